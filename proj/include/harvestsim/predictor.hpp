#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "harvestsim/simulator.hpp"

namespace harvestsim {

class EnergyHarvester;

inline constexpr double kSecondsPerDay = 86400.0;

struct PredictorParams {
  double alpha = 0.5;
  double slot_duration_s = 1800.0;
  std::size_t slots_per_day = 48;
  std::size_t store_capacity_days = 7;
  std::size_t similarity_window = 4;
  std::string stream_tag = "predictor";

  /// Throws InvalidParameter. Slots must tile one day exactly.
  void validate() const;
};

/// Weighted blend of the energy harvested in the slot just observed and the
/// energy a stored day harvested in the slot that comes next:
///   alpha * c_t + (1 - alpha) * e_d_next
double predict_next(double alpha, double c_t, double e_d_next);

struct SlotProfile {
  std::vector<double> slot_energies_j;
  std::size_t filled = 0;

  bool complete() const noexcept { return filled == slot_energies_j.size(); }
};

/// Per-slot harvested energy for the current day plus a FIFO of complete
/// past days.
class ProfileStore {
 public:
  ProfileStore(std::size_t slots_per_day, std::size_t capacity_days);

  /// Appends the energy of the slot just finished. When that completes the
  /// day, the day is committed (evicting the oldest at capacity) and a new
  /// one begins. Throws NegativeEnergy.
  void record_slot(double energy_j);

  /// Index into stored_days() of the day whose slots best match the last
  /// min(window, observed) slots of today by mean absolute error. Ties go to
  /// the most recently stored day. With no slots observed yet today, the most
  /// recent day is returned. Throws EmptyStore.
  std::size_t select_profile(std::size_t window) const;

  const std::deque<SlotProfile>& stored_days() const noexcept { return stored_; }
  const SlotProfile& current_day() const noexcept { return current_; }
  /// Index of the slot about to be observed.
  std::size_t current_slot_index() const noexcept { return current_.filled; }
  std::size_t slots_per_day() const noexcept { return slots_per_day_; }
  /// Energy of the most recently recorded slot, if any.
  std::optional<double> last_recorded() const noexcept { return last_; }

 private:
  std::size_t slots_per_day_;
  std::size_t capacity_days_;
  std::deque<SlotProfile> stored_;
  SlotProfile current_;
  std::optional<double> last_;
};

/// Predicted energies for the next `horizon` slots. The first uses the last
/// observed slot as c_t; later slots feed the previous prediction back in as
/// c_t. Throws EmptyStore when no day is stored or nothing has been recorded.
std::vector<double> predict_horizon(const ProfileStore& store, const PredictorParams& params,
                                    std::size_t horizon);

struct Prediction {
  SimTime made_at;
  double observed_j;   // c_t
  double predicted_j;  // next slot
  bool cold_start;
};

/// Runs the predictor inside a simulation: at every slot boundary it measures
/// the harvester's slot energy, records it, and predicts the next slot. With
/// an empty store the prediction falls back to the observed value and is
/// flagged cold_start.
class EnergyPredictor {
 public:
  EnergyPredictor(Simulator& sim, const EnergyHarvester& harvester, PredictorParams params);

  void start();

  const std::optional<Prediction>& latest() const noexcept { return latest_; }
  const ProfileStore& store() const noexcept { return store_; }
  const PredictorParams& params() const noexcept { return params_; }
  void on_prediction(std::function<void(const Prediction&)> cb) { on_prediction_ = std::move(cb); }

 private:
  void slot_boundary(std::size_t k);

  Simulator& sim_;
  const EnergyHarvester& harvester_;
  PredictorParams params_;
  ProfileStore store_;
  SimTime origin_{};
  std::optional<Prediction> latest_;
  std::function<void(const Prediction&)> on_prediction_;
};

}  // namespace harvestsim
