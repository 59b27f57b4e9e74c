#pragma once

#include <optional>
#include <span>
#include <vector>

#include "umbra/occlusion.hpp"
#include "umbra/prediction.hpp"
#include "umbra/road.hpp"

namespace umbra {

struct BehaviorProfile {
  double v0{0.0};  // initial speed [m/s]
  double a{0.0};   // acceleration [m/s^2]
};

enum class SpawnKind { kStaticPedestrian, kDynamicLane };

struct SpawnPoint {
  Vec2 position;
  SpawnKind kind{SpawnKind::kDynamicLane};
  std::optional<LaneletId> lanelet_id;
  std::optional<double> s;
};

/// Hypothesized road user in an occluded area. Predictions follow `path`
/// from its start; speeds are clipped to [0, speed_cap].
struct PhantomAgent {
  AgentClass cls{AgentClass::kVehicle};
  SpawnPoint spawn;
  std::vector<BehaviorProfile> profiles;
  std::vector<Vec2> path;
  double speed_cap{std::numeric_limits<double>::infinity()};
};

struct PhantomConfig {
  std::vector<BehaviorProfile> pedestrian_profiles{{1.5, 0.0}, {2.5, 0.0}};
  std::vector<BehaviorProfile> cyclist_profiles{{3.0, 0.0}, {3.0, 1.0}, {6.0, 0.0}, {6.0, 1.0}};
  std::vector<double> vehicle_speed_fractions{0.5, 1.0};  // of the lane speed limit
  std::vector<double> vehicle_accelerations{0.0, 2.0};
  double static_horizon{30.0};    // obstacles farther ahead along gamma are ignored [m]
  double dynamic_horizon{50.0};   // crossings farther ahead along gamma are ignored [m]
  double chain_extension{50.0};   // centerline followed through successors [m]
  double spawn_inset{0.25};       // candidate offset behind the shadow boundary [m]
  double boundary_band{0.5};      // spawn must sit this close to the shadow boundary [m]
  double base_variance{0.1};      // phantom position covariance [m^2]
  double min_crossing_angle{0.26};  // ~15 deg; flatter intersections do not count
  double path_overshoot{3.0};     // pedestrian path continues past gamma [m]
};

/// One pedestrian hypothesis behind each qualifying static obstacle: the
/// occluded point nearest to gamma within the boundary band of the
/// obstacle's shadow, for obstacles ahead of the ego. The path heads
/// straight for the closest point on gamma.
std::vector<PhantomAgent> static_spawn_points(const RegionSet& occluded,
                                              std::span<const Polygon> static_obstacles,
                                              const ReferencePath& gamma, const AgentState& ego,
                                              double sensor_range,
                                              std::span<const Polygon> visible_obstacles,
                                              const PhantomConfig& cfg = {});

/// Lane-bound hypotheses on occluded lanes whose centerline (followed
/// through successors) crosses gamma ahead of the ego: the occluded point
/// closest in arc length to the crossing, one agent per applicable class
/// (vehicle + cyclist on vehicle lanes, pedestrian on sidewalks).
std::vector<PhantomAgent> dynamic_spawn_points(const OcclusionMap& occlusion,
                                               const LaneletNetwork& net,
                                               const ReferencePath& gamma, double ego_s,
                                               std::span<const Polygon> visible_obstacles,
                                               const PhantomConfig& cfg = {});

/// One prediction per behavior profile; s(t) = v0*t + a*t^2/2 along the
/// agent's path with speeds clipped to [0, speed_cap], positions clamped at
/// the path end, constant base covariance.
std::vector<AgentPrediction> predict_phantom(const PhantomAgent& agent, double now, double dt,
                                             double t_pred, const PhantomConfig& cfg = {});

}  // namespace umbra
