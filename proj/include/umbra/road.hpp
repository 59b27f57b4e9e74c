#pragma once

#include <map>
#include <string>
#include <vector>

#include "umbra/geometry.hpp"

namespace umbra {

using LaneletId = int;

enum class LaneType { kVehicle, kSidewalk };

/// Sidewalk traffic moves both ways along the path; vehicle lanes only in
/// the direction of increasing arc length.
bool bidirectional(LaneType type);

const char* to_string(LaneType type);

struct FrenetCoord {
  double s{0.0};  // progress along the path [m]
  double d{0.0};  // lateral deviation, positive left of travel [m]
};

/// Polyline with arc-length parameterization.
class ReferencePath {
 public:
  /// Consecutive duplicate points are merged; needs >= 2 distinct points.
  explicit ReferencePath(std::vector<Vec2> points);

  const std::vector<Vec2>& points() const { return points_; }
  const std::vector<double>& cumulative_s() const { return cum_s_; }
  double length() const { return cum_s_.back(); }

  /// Interpolated point at arc length s (clamped to [0, length]).
  Vec2 point_at(double s) const;
  Vec2 tangent_at(double s) const;
  /// Left unit normal.
  Vec2 normal_at(double s) const;
  double heading_at(double s) const;

  /// Global nearest point on the polyline; ties resolve to the smallest s.
  /// Points beyond the ends clamp to s = 0 or s = length.
  FrenetCoord project(const Vec2& p) const;

  /// Copy resampled at the given spacing (end point always kept).
  ReferencePath resampled(double spacing) const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> cum_s_;
};

struct Lanelet {
  LaneletId id{0};
  std::vector<Vec2> left_boundary;
  std::vector<Vec2> right_boundary;
  LaneType type{LaneType::kVehicle};
  double speed_limit{13.9};  // [m/s]
  std::vector<LaneletId> successors;
};

/// Polygon enclosed by the left boundary and the reversed right boundary.
/// Throws InvalidGeometry when the boundaries cross.
Polygon lanelet_region(const Lanelet& l);

/// Midline of the boundaries, resampled at the given spacing.
ReferencePath centerline(const Lanelet& l, double spacing = 0.5);

class LaneletNetwork {
 public:
  /// Validates and precomputes per-lane geometry. Throws InvalidScenario
  /// listing every violated invariant.
  explicit LaneletNetwork(std::vector<Lanelet> lanelets);

  /// All violations of the network invariants; empty means valid.
  static std::vector<std::string> validate(const std::vector<Lanelet>& lanelets);

  const std::vector<Lanelet>& lanelets() const { return lanelets_; }
  bool has(LaneletId id) const { return index_.count(id) > 0; }
  const Lanelet& at(LaneletId id) const;
  const Polygon& region_of(LaneletId id) const;
  const ReferencePath& centerline_of(LaneletId id) const;
  double length_of(LaneletId id) const;
  const std::vector<LaneletId>& predecessors_of(LaneletId id) const;
  const RegionSet& road_area() const { return road_area_; }

 private:
  std::size_t index_of(LaneletId id) const;

  std::vector<Lanelet> lanelets_;
  std::map<LaneletId, std::size_t> index_;
  std::vector<Polygon> regions_;
  std::vector<ReferencePath> centerlines_;
  std::map<LaneletId, std::vector<LaneletId>> predecessors_;
  RegionSet road_area_;
};

/// Pose, velocity and Frenet coordinates relative to the reference path.
struct AgentState {
  double x{0.0};
  double y{0.0};
  double theta{0.0};
  double v{0.0};
  double s{0.0};
  double d{0.0};

  Vec2 position() const { return {x, y}; }
};

/// Fills (s, d) by projection so the state is consistent by construction.
/// Throws InvalidGeometry for negative speed.
AgentState make_agent_state(double x, double y, double theta, double v,
                            const ReferencePath& gamma);

}  // namespace umbra
