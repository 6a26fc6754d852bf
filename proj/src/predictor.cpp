#include "harvestsim/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "harvestsim/errors.hpp"
#include "harvestsim/harvester.hpp"

namespace harvestsim {

void PredictorParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must lie in [0, 1]");
  if (!(std::isfinite(slot_duration_s) && slot_duration_s > 0.0)) {
    throw InvalidParameter("slot_duration_s must be > 0");
  }
  if (slots_per_day == 0) throw InvalidParameter("slots_per_day must be positive");
  if (slot_duration_s * static_cast<double>(slots_per_day) != kSecondsPerDay) {
    throw InvalidParameter("slot_duration_s * slots_per_day must equal 86400 s");
  }
  if (store_capacity_days == 0) throw InvalidParameter("store_capacity_days must be positive");
  if (similarity_window == 0 || similarity_window > slots_per_day) {
    throw InvalidParameter("similarity_window must lie in [1, slots_per_day]");
  }
}

double predict_next(double alpha, double c_t, double e_d_next) {
  const double blend = alpha * c_t + (1.0 - alpha) * e_d_next;
  // rounding can step one ulp outside the inputs when they are close
  return std::clamp(blend, std::min(c_t, e_d_next), std::max(c_t, e_d_next));
}

ProfileStore::ProfileStore(std::size_t slots_per_day, std::size_t capacity_days)
    : slots_per_day_(slots_per_day), capacity_days_(capacity_days) {
  if (slots_per_day_ == 0 || capacity_days_ == 0) {
    throw InvalidParameter("profile store needs at least one slot and one day");
  }
  current_.slot_energies_j.assign(slots_per_day_, 0.0);
}

void ProfileStore::record_slot(double energy_j) {
  if (!(std::isfinite(energy_j) && energy_j >= 0.0)) {
    throw NegativeEnergy("slot energy must be finite and non-negative");
  }
  current_.slot_energies_j[current_.filled++] = energy_j;
  last_ = energy_j;
  if (current_.complete()) {
    if (stored_.size() == capacity_days_) stored_.pop_front();
    stored_.push_back(std::move(current_));
    current_ = SlotProfile{};
    current_.slot_energies_j.assign(slots_per_day_, 0.0);
  }
}

std::size_t ProfileStore::select_profile(std::size_t window) const {
  if (stored_.empty()) throw EmptyStore("no stored day profile");
  const std::size_t observed = current_.filled;
  if (observed == 0 || window == 0) return stored_.size() - 1;
  const std::size_t n = std::min(window, observed);
  const std::size_t first = observed - n;

  std::size_t best = stored_.size() - 1;
  double best_err = std::numeric_limits<double>::infinity();
  // newest first so that ties keep the most recent day
  for (std::size_t i = stored_.size(); i-- > 0;) {
    double err = 0.0;
    for (std::size_t s = first; s < observed; ++s) {
      err += std::abs(stored_[i].slot_energies_j[s] - current_.slot_energies_j[s]);
    }
    err /= static_cast<double>(n);
    if (err < best_err) {
      best_err = err;
      best = i;
    }
  }
  return best;
}

std::vector<double> predict_horizon(const ProfileStore& store, const PredictorParams& params,
                                    std::size_t horizon) {
  if (horizon == 0) throw InvalidParameter("prediction horizon must be >= 1");
  if (!store.last_recorded()) throw EmptyStore("no slot has been observed");
  const auto& day = store.stored_days().at(store.select_profile(params.similarity_window));
  const std::size_t spd = store.slots_per_day();

  std::vector<double> out;
  out.reserve(horizon);
  double c = *store.last_recorded();
  for (std::size_t h = 0; h < horizon; ++h) {
    const double e_d = day.slot_energies_j[(store.current_slot_index() + h) % spd];
    c = predict_next(params.alpha, c, e_d);
    out.push_back(c);
  }
  return out;
}

EnergyPredictor::EnergyPredictor(Simulator& sim, const EnergyHarvester& harvester,
                                 PredictorParams params)
    : sim_(sim),
      harvester_(harvester),
      params_((params.validate(), std::move(params))),
      store_(params_.slots_per_day, params_.store_capacity_days) {}

void EnergyPredictor::start() {
  origin_ = sim_.now();
  sim_.schedule(origin_ + params_.slot_duration_s, [this] { slot_boundary(1); });
}

void EnergyPredictor::slot_boundary(std::size_t k) {
  const SimTime start = origin_ + static_cast<double>(k - 1) * params_.slot_duration_s;
  const SimTime end = sim_.now();
  const double observed = harvester_.slot_energy(start, end);
  store_.record_slot(observed);

  Prediction p{end, observed, observed, true};
  if (!store_.stored_days().empty()) {
    p.predicted_j = predict_horizon(store_, params_, 1).front();
    p.cold_start = false;
  }
  latest_ = p;
  if (on_prediction_) on_prediction_(p);

  sim_.schedule(origin_ + static_cast<double>(k + 1) * params_.slot_duration_s,
                [this, k] { slot_boundary(k + 1); });
}

}  // namespace harvestsim
