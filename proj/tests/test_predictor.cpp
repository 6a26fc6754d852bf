#include <doctest.h>

#include <random>
#include <vector>

#include "harvestsim/energy_source.hpp"
#include "harvestsim/harvester.hpp"
#include "harvestsim/predictor.hpp"

using namespace harvestsim;

namespace {

PredictorParams small_params(double alpha, std::size_t slots = 4) {
  PredictorParams p;
  p.alpha = alpha;
  p.slots_per_day = slots;
  p.slot_duration_s = kSecondsPerDay / static_cast<double>(slots);
  p.store_capacity_days = 3;
  p.similarity_window = 2;
  return p;
}

void record_day(ProfileStore& s, const std::vector<double>& day) {
  for (double e : day) s.record_slot(e);
}

}  // namespace

TEST_CASE("predict_next") {
  CHECK(predict_next(1.0, 0.7, 12.5) == 0.7);
  CHECK(predict_next(0.0, 0.7, 12.5) == 12.5);
  CHECK(predict_next(0.5, 2.0, 4.0) == 3.0);
}

TEST_CASE("record_slot commits whole days, oldest evicted first") {
  ProfileStore s(4, 2);
  record_day(s, {1, 2, 3});
  CHECK(s.stored_days().empty());
  CHECK(s.current_slot_index() == 3);
  s.record_slot(4);
  CHECK(s.stored_days().size() == 1);
  CHECK(s.current_slot_index() == 0);
  CHECK(s.stored_days()[0].slot_energies_j == std::vector<double>{1, 2, 3, 4});

  record_day(s, {5, 5, 5, 5});
  record_day(s, {6, 6, 6, 6});
  REQUIRE(s.stored_days().size() == 2);
  CHECK(s.stored_days()[0].slot_energies_j[0] == 5.0);
  CHECK(s.stored_days()[1].slot_energies_j[0] == 6.0);
  CHECK(*s.last_recorded() == 6.0);

  CHECK_THROWS_AS(s.record_slot(-1.0), NegativeEnergy);
}

TEST_CASE("an all-zero day predicts zero at alpha = 0") {
  ProfileStore s(4, 2);
  record_day(s, {0, 0, 0, 0});
  s.record_slot(0.0);
  for (double e : predict_horizon(s, small_params(0.0), 6)) CHECK(e == 0.0);
}

TEST_CASE("select_profile") {
  ProfileStore s(4, 5);
  CHECK_THROWS_AS(s.select_profile(2), EmptyStore);

  SUBCASE("single stored day") {
    record_day(s, {9, 9, 9, 9});
    s.record_slot(0.0);
    CHECK(s.select_profile(2) == 0);
  }
  SUBCASE("closest day by mean absolute error") {
    record_day(s, {1, 1, 1, 1});  // A
    record_day(s, {5, 5, 5, 5});  // B
    s.record_slot(1.1);
    s.record_slot(0.9);
    // MAE(A) = 0.1, MAE(B) = 4
    CHECK(s.select_profile(2) == 0);
  }
  SUBCASE("ties go to the most recent day") {
    record_day(s, {2, 2, 2, 2});
    record_day(s, {2, 2, 2, 2});
    s.record_slot(3.0);
    CHECK(s.select_profile(2) == 1);
  }
  SUBCASE("window limits the comparison to the trailing slots") {
    record_day(s, {0, 0, 8, 8});
    record_day(s, {8, 8, 0, 0});
    record_day(s, {0, 0, 0, 0});  // newest: makes today start fresh
    s.record_slot(8);
    s.record_slot(8);
    s.record_slot(8);
    // window 1 sees only slot 2: day 0 matches exactly
    CHECK(s.select_profile(1) == 0);
    // window 3: day 0 MAE 16/3, day 1 MAE 8/3
    CHECK(s.select_profile(3) == 1);
  }
  SUBCASE("no slot observed yet today falls back to the newest day") {
    record_day(s, {1, 1, 1, 1});
    record_day(s, {3, 3, 3, 3});
    CHECK(s.select_profile(2) == 1);
  }
}

TEST_CASE("predict_horizon") {
  ProfileStore s(4, 3);
  CHECK_THROWS_AS(predict_horizon(s, small_params(0.5), 1), EmptyStore);
  record_day(s, {1, 2, 3, 4});
  s.record_slot(10.0);  // today slot 0; next slot index is 1

  SUBCASE("n = 1 reduces to predict_next") {
    const auto p = predict_horizon(s, small_params(0.25), 1);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == predict_next(0.25, 10.0, 2.0));
  }
  SUBCASE("alpha = 0 replays the stored profile, wrapping into tomorrow") {
    CHECK(predict_horizon(s, small_params(0.0), 5) == std::vector<double>{2, 3, 4, 1, 2});
  }
  SUBCASE("alpha = 1 feeds the observation forward") {
    CHECK(predict_horizon(s, small_params(1.0), 4) == std::vector<double>{10, 10, 10, 10});
  }
  SUBCASE("intermediate alpha matches the unrolled recurrence") {
    const double a = 0.3;
    const std::vector<double> day{1, 2, 3, 4};
    std::vector<double> expect;
    double c = 10.0;
    for (std::size_t h = 0; h < 6; ++h) {
      c = a * c + (1 - a) * day[(1 + h) % 4];
      expect.push_back(c);
    }
    const auto got = predict_horizon(s, small_params(a), 6);
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-14));
      CHECK(got[i] >= 0.0);
    }
  }
}

TEST_CASE("parameter validation") {
  PredictorParams p;
  CHECK_NOTHROW(p.validate());
  p.alpha = 1.5;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = PredictorParams{};
  p.slots_per_day = 47;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = PredictorParams{};
  p.similarity_window = 49;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
}

TEST_CASE("property: bounded, affine in alpha, homogeneous") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = u(rng), c = u(rng), e = u(rng);
    const double p = predict_next(a, c, e);
    REQUIRE(p >= std::min(c, e));
    REQUIRE(p <= std::max(c, e));
    // slope between exactly representable alpha grid points
    for (double a0 : {0.0, 0.25, 0.5}) {
      const double slope = (predict_next(a0 + 0.25, c, e) - predict_next(a0, c, e)) / 0.25;
      REQUIRE(std::abs(slope - (c - e)) <= 1e-12);
    }
    // power-of-two scaling is exact in binary floating point
    for (double s : {0.5, 2.0, 1024.0}) REQUIRE(predict_next(a, s * c, s * e) == s * p);
    const double s = 0.1 + 10.0 * u(rng);
    REQUIRE(predict_next(a, s * c, s * e) == doctest::Approx(s * p).epsilon(1e-14));
  }
}

TEST_CASE("property: appending a strictly worse day leaves the selection unchanged") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    ProfileStore s(6, 10);
    for (int d = 0; d < 3; ++d) {
      for (int k = 0; k < 6; ++k) s.record_slot(u(rng));
    }
    for (int k = 0; k < 3; ++k) s.record_slot(u(rng));
    const std::size_t chosen = s.select_profile(3);

    std::vector<double> today(s.current_day().slot_energies_j.begin(),
                              s.current_day().slot_energies_j.begin() + 3);
    // same history plus a day far from today's observations in every slot
    ProfileStore rebuilt(6, 10);
    for (const auto& d : s.stored_days()) record_day(rebuilt, d.slot_energies_j);
    record_day(rebuilt, {100, 100, 100, 100, 100, 100});
    for (double e : today) rebuilt.record_slot(e);
    CHECK(rebuilt.select_profile(3) == chosen);
  }
}

TEST_CASE("energy predictor in a simulation") {
  Simulator sim;
  BasicSourceParams bp;
  bp.initial_energy_j = 1e6;
  BasicEnergySource src(sim, bp);
  HarvestTrace t;
  t.samples = {{0.0, 0.0}, {21600.0, 2.0}, {64800.0, 0.0}};
  t.duration_s = kSecondsPerDay;
  t.wrap = true;
  TraceHarvester h(sim, src, t);
  EnergyPredictor pred(sim, h, small_params(0.5));
  std::vector<Prediction> seen;
  pred.on_prediction([&](const Prediction& p) { seen.push_back(p); });
  src.start();
  h.start();
  pred.start();

  sim.run_until(seconds(2 * kSecondsPerDay));
  REQUIRE(seen.size() == 8);
  // day one: no stored profile yet
  for (int i = 0; i < 3; ++i) {
    CHECK(seen[i].cold_start);
    CHECK(seen[i].predicted_j == seen[i].observed_j);
  }
  // slots of 6 h: energies 0, 43200, 43200, 0 J
  CHECK(seen[1].observed_j == doctest::Approx(43200.0));
  // after the first full day every prediction is blended with the profile
  for (std::size_t i = 3; i < seen.size(); ++i) CHECK_FALSE(seen[i].cold_start);
  // day 2: observed c_t and the stored day's next slot are blended 50/50
  CHECK(seen[4].predicted_j == doctest::Approx(0.5 * 0.0 + 0.5 * 43200.0));
  CHECK(seen[5].predicted_j == doctest::Approx(0.5 * 43200.0 + 0.5 * 43200.0));
  CHECK(seen[6].predicted_j == doctest::Approx(0.5 * 43200.0 + 0.5 * 0.0));
}
