#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "umbra/geometry.hpp"
#include "umbra/road.hpp"

namespace umbra {

struct Interval {
  double lo{0.0};
  double hi{0.0};
  double length() const { return hi - lo; }
};

/// Sorted pairwise-disjoint intervals on a lane's arc length.
class IntervalSet {
 public:
  IntervalSet() = default;
  static IntervalSet from_intervals(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  double total_length() const;
  bool contains(double s, double tol = 1e-9) const;

  void add(Interval iv);
  IntervalSet unioned(const IntervalSet& other) const;
  IntervalSet subtracted(const IntervalSet& other) const;
  IntervalSet clipped(double lo, double hi) const;
  static IntervalSet complement(const IntervalSet& set, double lo, double hi);

 private:
  void normalize();
  std::vector<Interval> intervals_;
};

struct LaneOcclusion {
  LaneletId lanelet_id{0};
  IntervalSet intervals;
  bool initialized{false};
};

struct OcclusionMap {
  std::map<LaneletId, LaneOcclusion> per_lane;
  double t{0.0};
};

struct OcclusionConfig {
  double station_spacing{0.5};  // longitudinal sampling along the lane [m]
  int lateral_samples{5};       // points across the lane per station
  double edge_fraction{0.05};   // lateral samples span [f, 1-f] of the width
};

struct DetectionResult {
  RegionSet visible_area;
  std::vector<std::size_t> visible_obstacles;  // indices into the input span
};

/// Visible area over the road network plus the set of detected obstacles
/// (those whose polygon intersects the visible area).
DetectionResult detect(const AgentState& ego, std::span<const Polygon> obstacles,
                       const LaneletNetwork& net, double range,
                       int n_arc = kDefaultArcSegments);

/// Runs of stations whose full cross-section lies inside the visible area,
/// as closed arc-length intervals.
IntervalSet visible_intervals(const RegionSet& visible_area, const Lanelet& lane,
                              const OcclusionConfig& cfg = {});

/// First-observation occlusion of a lane: everything not currently seen.
LaneOcclusion init_lane(const RegionSet& visible_area, const Lanelet& lane,
                        const OcclusionConfig& cfg = {});

struct PropagationResult {
  LaneOcclusion lane;  // clipped to [0, lane length]
  std::vector<std::pair<LaneletId, Interval>> spillover;
};

/// Dilates the occluded intervals by speed_limit * dt: downstream for
/// vehicle lanes, both directions for sidewalks. Overflow past the lane
/// ends is reported against successor (resp. predecessor) lanelets.
PropagationResult propagate_lane(const LaneOcclusion& occ, const Lanelet& lane, double dt,
                                 const LaneletNetwork& net);

/// Lane-aligned polygons (full lane width) for all occluded intervals,
/// unioned across lanes.
RegionSet occluded_region(const OcclusionMap& map, const LaneletNetwork& net,
                          const OcclusionConfig& cfg = {});

/// Per-lane occlusion state carried across timesteps. Lanes initialize on
/// first sight, then propagate and subtract the currently visible
/// cross-sections. Freed sections re-occlude only by propagation from an
/// adjacent occluded interval.
class OcclusionTracker {
 public:
  explicit OcclusionTracker(const LaneletNetwork& net, OcclusionConfig cfg = {});

  const OcclusionMap& map() const { return map_; }
  const OcclusionConfig& config() const { return cfg_; }

  void update(const RegionSet& visible_area, double dt);

  /// Drops all carried state; every lane re-initializes on the next update.
  void reset();

  RegionSet occluded_region() const;
  double occluded_area() const;

 private:
  struct LaneCache {
    std::vector<double> stations;
    std::vector<std::vector<Vec2>> samples;
  };

  IntervalSet seen_intervals(const RegionSet& visible_area, LaneletId id) const;

  const LaneletNetwork& net_;
  OcclusionConfig cfg_;
  OcclusionMap map_;
  std::map<LaneletId, LaneCache> cache_;
};

/// Memory-less comparator: occlusion re-derived from the current visible
/// area alone.
OcclusionMap naive_occlusion(const RegionSet& visible_area, const LaneletNetwork& net,
                             const OcclusionConfig& cfg = {});

}  // namespace umbra
