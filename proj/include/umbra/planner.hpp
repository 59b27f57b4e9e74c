#pragma once

#include <vector>

#include "umbra/risk.hpp"
#include "umbra/road.hpp"

namespace umbra {

struct PlannerLimits {
  double a_max{3.0};        // [m/s^2]
  double a_min{-8.0};       // [m/s^2]
  double lat_acc_max{4.0};  // [m/s^2]
};

struct PlannerWeights {
  double jerk{0.1};
  double lateral{0.5};
  double speed{1.0};
};

struct PlannerConfig {
  double horizon{3.0};  // [s], multiple of dt
  double dt{0.1};       // [s]
  std::vector<double> target_speeds;              // empty: 5 spanning [0, speed_span]
  std::vector<double> lateral_offsets{-0.5, 0.0, 0.5};
  PlannerWeights weights;
  PlannerLimits limits;
  double desired_speed{13.9};  // cruise speed the cost prefers [m/s]
  double speed_span{13.9};     // default target-speed range [m/s]

  std::vector<double> effective_target_speeds() const;
};

/// Samples one candidate per (target speed, lateral offset) pair: quartic
/// velocity-keeping profile along gamma, quintic lateral profile toward the
/// offset. Candidates violating the acceleration limits are dropped; the
/// rest are cost-sorted with deterministic tie-breaking (target-speed index,
/// then |offset|).
std::vector<TrajectoryCandidate> sample_trajectories(const AgentState& ego,
                                                     const ReferencePath& gamma,
                                                     const PlannerConfig& cfg);

/// Maximum-deceleration profile along gamma used when no candidate is
/// feasible.
TrajectoryCandidate emergency_stop(const AgentState& ego, const ReferencePath& gamma,
                                   const PlannerConfig& cfg);

}  // namespace umbra
