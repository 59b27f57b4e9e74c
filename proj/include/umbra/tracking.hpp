#pragma once

#include <map>
#include <vector>

#include "umbra/prediction.hpp"
#include "umbra/road.hpp"

namespace umbra {

struct TrackedObject {
  int id{-1};
  AgentClass cls{AgentClass::kVehicle};
  AgentState last_state;
  double last_seen_t{0.0};
};

struct TrackerConfig {
  double horizon{3.0};        // prediction horizon [s]
  double forget_after{5.0};   // unseen objects are dropped beyond this [s]
  double sigma0_sq{0.25};     // base position variance [m^2]
  double growth_rate{0.5};    // variance growth [m^2/s]
  double lateral_decay{2.0};  // time constant for d -> 0 [s]
};

/// Covariance sequence over the horizon for an object unseen for
/// time_unseen seconds: Sigma(t) = (sigma0^2 + q*(time_unseen + t)) * I.
std::vector<Mat2> grow_uncertainty(double time_unseen, double horizon, double dt,
                                   const TrackerConfig& cfg = {});

/// Kinematic forward prediction from the last observed state. Pedestrians
/// move straight at constant velocity; vehicles and cyclists follow the
/// hosting lane's centerline (through successors) at constant speed with the
/// lateral offset decaying to zero. Off-road states fall back to the
/// straight-line model. Timestamps are absolute (now + k*dt) and the motion
/// extrapolates from last_seen_t, so unseen time is already rolled in.
AgentPrediction predict(const TrackedObject& obj, const LaneletNetwork& net, double now,
                        double dt, const TrackerConfig& cfg = {});

/// Keeps real obstacles represented while they are out of view.
class ObjectTracker {
 public:
  explicit ObjectTracker(TrackerConfig cfg = {}) : cfg_(cfg) {}

  const TrackerConfig& config() const { return cfg_; }
  const std::map<int, TrackedObject>& objects() const { return objects_; }

  /// Records a sighting; resets the unseen clock of the object.
  void observe(int id, AgentClass cls, const AgentState& state, double now);

  /// Removes objects unseen for longer than forget_after.
  void prune(double now);

  std::vector<AgentPrediction> predictions(const LaneletNetwork& net, double now,
                                           double dt) const;

 private:
  TrackerConfig cfg_;
  std::map<int, TrackedObject> objects_;
};

}  // namespace umbra
