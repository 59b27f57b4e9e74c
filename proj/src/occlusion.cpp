#include "umbra/occlusion.hpp"

#include <algorithm>
#include <cmath>

namespace umbra {

namespace {
constexpr double kIntervalEps = 1e-9;
}

IntervalSet IntervalSet::from_intervals(std::vector<Interval> intervals) {
  IntervalSet out;
  out.intervals_ = std::move(intervals);
  out.normalize();
  return out;
}

void IntervalSet::normalize() {
  std::erase_if(intervals_, [](const Interval& iv) { return iv.length() <= kIntervalEps; });
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const Interval& iv : intervals_) {
    if (!merged.empty() && iv.lo <= merged.back().hi + kIntervalEps) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  intervals_ = std::move(merged);
}

double IntervalSet::total_length() const {
  double len = 0.0;
  for (const Interval& iv : intervals_) {
    len += iv.length();
  }
  return len;
}

bool IntervalSet::contains(double s, double tol) const {
  for (const Interval& iv : intervals_) {
    if (s >= iv.lo - tol && s <= iv.hi + tol) {
      return true;
    }
  }
  return false;
}

void IntervalSet::add(Interval iv) {
  intervals_.push_back(iv);
  normalize();
}

IntervalSet IntervalSet::unioned(const IntervalSet& other) const {
  std::vector<Interval> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return from_intervals(std::move(all));
}

IntervalSet IntervalSet::subtracted(const IntervalSet& other) const {
  std::vector<Interval> out;
  for (const Interval& iv : intervals_) {
    std::vector<Interval> pieces{iv};
    for (const Interval& cut : other.intervals_) {
      std::vector<Interval> next;
      for (const Interval& p : pieces) {
        if (cut.hi <= p.lo || cut.lo >= p.hi) {
          next.push_back(p);
          continue;
        }
        if (cut.lo > p.lo) {
          next.push_back({p.lo, cut.lo});
        }
        if (cut.hi < p.hi) {
          next.push_back({cut.hi, p.hi});
        }
      }
      pieces = std::move(next);
    }
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return from_intervals(std::move(out));
}

IntervalSet IntervalSet::clipped(double lo, double hi) const {
  std::vector<Interval> out;
  for (const Interval& iv : intervals_) {
    const Interval c{std::max(iv.lo, lo), std::min(iv.hi, hi)};
    if (c.length() > kIntervalEps) {
      out.push_back(c);
    }
  }
  return from_intervals(std::move(out));
}

IntervalSet IntervalSet::complement(const IntervalSet& set, double lo, double hi) {
  std::vector<Interval> out;
  double cursor = lo;
  for (const Interval& iv : set.intervals_) {
    if (iv.lo > cursor) {
      out.push_back({cursor, std::min(iv.lo, hi)});
    }
    cursor = std::max(cursor, iv.hi);
    if (cursor >= hi) {
      break;
    }
  }
  if (cursor < hi) {
    out.push_back({cursor, hi});
  }
  return from_intervals(std::move(out));
}

DetectionResult detect(const AgentState& ego, std::span<const Polygon> obstacles,
                       const LaneletNetwork& net, double range, int n_arc) {
  DetectionResult out;
  out.visible_area = visible_region(ego.position(), range, net.road_area(), obstacles, n_arc);
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (region_distance(out.visible_area, obstacles[i]) <= 1e-6) {
      out.visible_obstacles.push_back(i);
    }
  }
  return out;
}

namespace {

struct CrossSection {
  Vec2 left;
  Vec2 right;
};

CrossSection cross_section_at(const Lanelet& lane, const ReferencePath& center, double s) {
  const Vec2 c = center.point_at(s);
  const ReferencePath left{std::vector<Vec2>(lane.left_boundary)};
  const ReferencePath right{std::vector<Vec2>(lane.right_boundary)};
  const FrenetCoord fl = left.project(c);
  const FrenetCoord fr = right.project(c);
  return {left.point_at(fl.s), right.point_at(fr.s)};
}

// Stations plus per-station lateral sample points, computed once per lane.
struct LaneStations {
  std::vector<double> s;
  std::vector<std::vector<Vec2>> samples;
  std::vector<CrossSection> sections;
};

LaneStations build_stations(const Lanelet& lane, const ReferencePath& center,
                            const OcclusionConfig& cfg) {
  LaneStations st;
  const double len = center.length();
  const int n = std::max(1, static_cast<int>(std::ceil(len / cfg.station_spacing)));
  // Boundary projections are reused across stations.
  const ReferencePath left{std::vector<Vec2>(lane.left_boundary)};
  const ReferencePath right{std::vector<Vec2>(lane.right_boundary)};
  st.s.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = len * i / n;
    const Vec2 c = center.point_at(s);
    const Vec2 lp = left.point_at(left.project(c).s);
    const Vec2 rp = right.point_at(right.project(c).s);
    st.s.push_back(s);
    st.sections.push_back({lp, rp});
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(cfg.lateral_samples));
    for (int k = 0; k < cfg.lateral_samples; ++k) {
      const double f =
          cfg.lateral_samples == 1
              ? 0.5
              : cfg.edge_fraction +
                    (1.0 - 2.0 * cfg.edge_fraction) * k / (cfg.lateral_samples - 1);
      pts.push_back(lp + (rp - lp) * f);
    }
    st.samples.push_back(std::move(pts));
  }
  return st;
}

IntervalSet visible_runs(const RegionSet& visible_area, const LaneStations& st) {
  std::vector<Interval> runs;
  std::size_t i = 0;
  const std::size_t n = st.s.size();
  while (i < n) {
    const auto station_visible = [&](std::size_t k) {
      for (const Vec2& p : st.samples[k]) {
        if (!visible_area.contains(p)) {
          return false;
        }
      }
      return true;
    };
    if (!station_visible(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && station_visible(j + 1)) {
      ++j;
    }
    runs.push_back({st.s[i], st.s[j]});
    i = j + 1;
  }
  return IntervalSet::from_intervals(std::move(runs));
}

}  // namespace

IntervalSet visible_intervals(const RegionSet& visible_area, const Lanelet& lane,
                              const OcclusionConfig& cfg) {
  const ReferencePath center = centerline(lane);
  return visible_runs(visible_area, build_stations(lane, center, cfg));
}

LaneOcclusion init_lane(const RegionSet& visible_area, const Lanelet& lane,
                        const OcclusionConfig& cfg) {
  const ReferencePath center = centerline(lane);
  const IntervalSet seen = visible_runs(visible_area, build_stations(lane, center, cfg));
  LaneOcclusion occ;
  occ.lanelet_id = lane.id;
  occ.intervals = IntervalSet::complement(seen, 0.0, center.length());
  occ.initialized = true;
  return occ;
}

PropagationResult propagate_lane(const LaneOcclusion& occ, const Lanelet& lane, double dt,
                                 const LaneletNetwork& net) {
  const double len = net.length_of(lane.id);
  const double step = lane.speed_limit * dt;
  const bool both_ways = bidirectional(lane.type);

  PropagationResult out;
  out.lane.lanelet_id = lane.id;
  out.lane.initialized = occ.initialized;

  std::vector<Interval> grown;
  for (const Interval& iv : occ.intervals.intervals()) {
    Interval g{both_ways ? iv.lo - step : iv.lo, iv.hi + step};
    if (g.hi > len) {
      for (LaneletId succ : lane.successors) {
        out.spillover.emplace_back(succ, Interval{0.0, std::min(g.hi - len, net.length_of(succ))});
      }
    }
    if (both_ways && g.lo < 0.0) {
      for (LaneletId pred : net.predecessors_of(lane.id)) {
        const double plen = net.length_of(pred);
        out.spillover.emplace_back(pred, Interval{std::max(0.0, plen + g.lo), plen});
      }
    }
    grown.push_back({std::max(0.0, g.lo), std::min(len, g.hi)});
  }
  out.lane.intervals = IntervalSet::from_intervals(std::move(grown));
  return out;
}

RegionSet occluded_region(const OcclusionMap& map, const LaneletNetwork& net,
                          const OcclusionConfig& cfg) {
  std::vector<Polygon> polys;
  for (const auto& [id, occ] : map.per_lane) {
    if (occ.intervals.empty()) {
      continue;
    }
    const Lanelet& lane = net.at(id);
    const ReferencePath& center = net.centerline_of(id);
    for (const Interval& iv : occ.intervals.intervals()) {
      if (iv.length() < 1e-6) {
        continue;
      }
      const int n = std::max(1, static_cast<int>(std::ceil(iv.length() / cfg.station_spacing)));
      std::vector<Vec2> left, right;
      left.reserve(static_cast<std::size_t>(n) + 1);
      right.reserve(static_cast<std::size_t>(n) + 1);
      for (int i = 0; i <= n; ++i) {
        const double s = iv.lo + iv.length() * i / n;
        const CrossSection cs = cross_section_at(lane, center, s);
        left.push_back(cs.left);
        right.push_back(cs.right);
      }
      std::vector<Vec2> ring = std::move(left);
      ring.insert(ring.end(), right.rbegin(), right.rend());
      Polygon piece = Polygon::unchecked(std::move(ring));
      if (piece.area() >= kAreaEps) {
        polys.push_back(std::move(piece));
      }
    }
  }
  return RegionSet::from_polygons(std::move(polys));
}

OcclusionTracker::OcclusionTracker(const LaneletNetwork& net, OcclusionConfig cfg)
    : net_(net), cfg_(cfg) {
  for (const Lanelet& lane : net_.lanelets()) {
    LaneOcclusion occ;
    occ.lanelet_id = lane.id;
    map_.per_lane.emplace(lane.id, std::move(occ));
    LaneStations st = build_stations(lane, net_.centerline_of(lane.id), cfg_);
    cache_.emplace(lane.id, LaneCache{std::move(st.s), std::move(st.samples)});
  }
}

IntervalSet OcclusionTracker::seen_intervals(const RegionSet& visible_area, LaneletId id) const {
  const LaneCache& lc = cache_.at(id);
  std::vector<Interval> runs;
  std::size_t i = 0;
  const std::size_t n = lc.stations.size();
  const auto station_visible = [&](std::size_t k) {
    for (const Vec2& p : lc.samples[k]) {
      if (!visible_area.contains(p)) {
        return false;
      }
    }
    return true;
  };
  while (i < n) {
    if (!station_visible(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && station_visible(j + 1)) {
      ++j;
    }
    runs.push_back({lc.stations[i], lc.stations[j]});
    i = j + 1;
  }
  return IntervalSet::from_intervals(std::move(runs));
}

void OcclusionTracker::reset() {
  for (auto& [id, occ] : map_.per_lane) {
    occ.intervals = IntervalSet{};
    occ.initialized = false;
  }
}

void OcclusionTracker::update(const RegionSet& visible_area, double dt) {
  if (!(dt > 0.0)) {
    throw InvalidGeometry("occlusion update needs dt > 0");
  }
  std::map<LaneletId, IntervalSet> seen;
  for (const Lanelet& lane : net_.lanelets()) {
    seen[lane.id] = seen_intervals(visible_area, lane.id);
  }

  std::map<LaneletId, LaneOcclusion> next;
  std::vector<std::pair<LaneletId, Interval>> spills;
  for (const Lanelet& lane : net_.lanelets()) {
    const LaneOcclusion& current = map_.per_lane.at(lane.id);
    if (!current.initialized) {
      LaneOcclusion occ;
      occ.lanelet_id = lane.id;
      occ.intervals = IntervalSet::complement(seen[lane.id], 0.0, net_.length_of(lane.id));
      occ.initialized = true;
      next.emplace(lane.id, std::move(occ));
    } else {
      PropagationResult prop = propagate_lane(current, lane, dt, net_);
      spills.insert(spills.end(), prop.spillover.begin(), prop.spillover.end());
      next.emplace(lane.id, std::move(prop.lane));
    }
  }
  for (const auto& [id, iv] : spills) {
    next.at(id).intervals.add(iv);
  }
  for (auto& [id, occ] : next) {
    occ.intervals = occ.intervals.subtracted(seen[id]);
  }
  map_.per_lane = std::move(next);
  map_.t += dt;
}

RegionSet OcclusionTracker::occluded_region() const {
  return umbra::occluded_region(map_, net_, cfg_);
}

double OcclusionTracker::occluded_area() const { return occluded_region().area(); }

OcclusionMap naive_occlusion(const RegionSet& visible_area, const LaneletNetwork& net,
                             const OcclusionConfig& cfg) {
  OcclusionMap map;
  for (const Lanelet& lane : net.lanelets()) {
    map.per_lane.emplace(lane.id, init_lane(visible_area, lane, cfg));
  }
  return map;
}

}  // namespace umbra
