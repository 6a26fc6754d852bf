#!/usr/bin/env python3
"""Generate the bundled synthetic solar harvest trace.

Seven days sampled every five minutes. Each day follows a clipped sine from
sunrise (06:00) to sunset (18:00) scaled by a per-day clearness factor, with
seeded multiplicative cloud noise. The clearest midday sits just under 220 W.

    python3 tools/make_solar_trace.py > traces/solar_7day.csv
"""

import math
import random
import sys

PEAK_W = 220.0
STEP_S = 300
DAYS = 7
CLEARNESS = [1.00, 0.82, 0.55, 0.93, 0.38, 0.88, 0.97]


def main() -> None:
    rng = random.Random(20140507)
    out = sys.stdout
    out.write("# synthetic 7-day solar panel trace, 5 min resolution\n")
    out.write("# generated by tools/make_solar_trace.py\n")
    out.write(f"# duration_s={DAYS * 86400}\n")
    out.write("time_s,power_w\n")
    for t in range(0, DAYS * 86400, STEP_S):
        day, sec = divmod(t, 86400)
        hour = sec / 3600.0
        if 6.0 <= hour <= 18.0:
            base = math.sin(math.pi * (hour - 6.0) / 12.0) ** 1.3
            cloud = 1.0 - (1.0 - CLEARNESS[day]) * rng.random()
            power = min(PEAK_W, PEAK_W * CLEARNESS[day] * base * (0.9 + 0.1 * cloud))
        else:
            power = 0.0
        out.write(f"{t},{power:.3f}\n")


if __name__ == "__main__":
    main()
