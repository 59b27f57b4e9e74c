#include "umbra/road.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace umbra {

bool bidirectional(LaneType type) {
  switch (type) {
    case LaneType::kVehicle:
      return false;
    case LaneType::kSidewalk:
      return true;
  }
  return false;
}

const char* to_string(LaneType type) {
  return type == LaneType::kSidewalk ? "sidewalk" : "vehicle";
}

ReferencePath::ReferencePath(std::vector<Vec2> points) {
  points_.reserve(points.size());
  for (const Vec2& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidGeometry("reference path point is not finite");
    }
    if (points_.empty() || distance(points_.back(), p) > 1e-12) {
      points_.push_back(p);
    }
  }
  if (points_.size() < 2) {
    throw InvalidGeometry("reference path needs at least 2 distinct points");
  }
  cum_s_.resize(points_.size());
  cum_s_[0] = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    cum_s_[i] = cum_s_[i - 1] + distance(points_[i - 1], points_[i]);
  }
}

namespace {

// Index of the segment containing arc length s (clamped).
std::size_t segment_at(const std::vector<double>& cum_s, double s) {
  const auto it = std::upper_bound(cum_s.begin(), cum_s.end(), s);
  const std::size_t hi = static_cast<std::size_t>(std::distance(cum_s.begin(), it));
  return std::clamp<std::size_t>(hi, 1, cum_s.size() - 1) - 1;
}

}  // namespace

Vec2 ReferencePath::point_at(double s) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_at(cum_s_, s);
  const double seg_len = cum_s_[i + 1] - cum_s_[i];
  const double t = seg_len > 0.0 ? (s - cum_s_[i]) / seg_len : 0.0;
  return points_[i] + (points_[i + 1] - points_[i]) * t;
}

Vec2 ReferencePath::tangent_at(double s) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_at(cum_s_, s);
  return (points_[i + 1] - points_[i]).normalized();
}

Vec2 ReferencePath::normal_at(double s) const {
  const Vec2 t = tangent_at(s);
  return {-t.y, t.x};
}

double ReferencePath::heading_at(double s) const { return tangent_at(s).angle(); }

FrenetCoord ReferencePath::project(const Vec2& p) const {
  double best_dist2 = std::numeric_limits<double>::infinity();
  FrenetCoord best;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2& a = points_[i];
    const Vec2& b = points_[i + 1];
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const Vec2 q = a + ab * t;
    const double dist2 = (p - q).squared_norm();
    if (dist2 < best_dist2 - 1e-18) {
      best_dist2 = dist2;
      const Vec2 tangent = ab.normalized();
      best.s = cum_s_[i] + t * std::sqrt(len2);
      best.d = tangent.cross(p - q);
    }
  }
  return best;
}

ReferencePath ReferencePath::resampled(double spacing) const {
  std::vector<Vec2> out;
  const double total = length();
  const int n = std::max(1, static_cast<int>(std::ceil(total / spacing)));
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    out.push_back(point_at(total * i / n));
  }
  return ReferencePath(std::move(out));
}

Polygon lanelet_region(const Lanelet& l) {
  if (l.left_boundary.size() < 2 || l.right_boundary.size() < 2) {
    throw InvalidGeometry("lanelet boundaries need at least 2 points each");
  }
  std::vector<Vec2> ring = l.left_boundary;
  ring.insert(ring.end(), l.right_boundary.rbegin(), l.right_boundary.rend());
  try {
    return Polygon(std::move(ring));
  } catch (const InvalidGeometry& e) {
    std::ostringstream msg;
    msg << "lanelet " << l.id << " encloses an invalid region: " << e.what();
    throw InvalidGeometry(msg.str());
  }
}

ReferencePath centerline(const Lanelet& l, double spacing) {
  const ReferencePath left{std::vector<Vec2>(l.left_boundary)};
  const ReferencePath right{std::vector<Vec2>(l.right_boundary)};
  const int samples =
      std::max<int>(64, static_cast<int>(std::ceil(std::max(left.length(), right.length()) / 0.25)));
  std::vector<Vec2> mid;
  mid.reserve(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) {
    const double f = static_cast<double>(i) / samples;
    const Vec2 a = left.point_at(f * left.length());
    const Vec2 b = right.point_at(f * right.length());
    mid.push_back((a + b) * 0.5);
  }
  return ReferencePath(std::move(mid)).resampled(spacing);
}

std::vector<std::string> LaneletNetwork::validate(const std::vector<Lanelet>& lanelets) {
  std::vector<std::string> out;
  std::map<LaneletId, const Lanelet*> by_id;
  for (const Lanelet& l : lanelets) {
    if (!by_id.emplace(l.id, &l).second) {
      out.push_back("duplicate lanelet id " + std::to_string(l.id));
    }
  }
  for (const Lanelet& l : lanelets) {
    const std::string tag = "lanelet " + std::to_string(l.id);
    if (l.left_boundary.size() < 2 || l.right_boundary.size() < 2) {
      out.push_back(tag + ": boundary with fewer than 2 points");
      continue;
    }
    if (!(l.speed_limit > 0.0)) {
      out.push_back(tag + ": speed limit must be positive");
    }
    try {
      lanelet_region(l);
    } catch (const InvalidGeometry& e) {
      out.push_back(tag + ": " + e.what());
    }
    for (LaneletId succ_id : l.successors) {
      const auto it = by_id.find(succ_id);
      if (it == by_id.end()) {
        out.push_back(tag + ": unresolved successor " + std::to_string(succ_id));
        continue;
      }
      const Lanelet& succ = *it->second;
      if (succ.left_boundary.size() < 2 || succ.right_boundary.size() < 2) {
        continue;
      }
      const double gap_left = distance(l.left_boundary.back(), succ.left_boundary.front());
      const double gap_right = distance(l.right_boundary.back(), succ.right_boundary.front());
      if (gap_left > 0.1 || gap_right > 0.1) {
        std::ostringstream msg;
        msg << tag << ": cross-section gap to successor " << succ_id << " exceeds 0.1 m ("
            << std::max(gap_left, gap_right) << " m)";
        out.push_back(msg.str());
      }
    }
  }
  return out;
}

LaneletNetwork::LaneletNetwork(std::vector<Lanelet> lanelets) : lanelets_(std::move(lanelets)) {
  std::vector<std::string> violations = validate(lanelets_);
  if (!violations.empty()) {
    throw InvalidScenario(std::move(violations));
  }
  std::vector<Polygon> regions;
  for (std::size_t i = 0; i < lanelets_.size(); ++i) {
    const Lanelet& l = lanelets_[i];
    index_[l.id] = i;
    regions_.push_back(lanelet_region(l));
    regions.push_back(regions_.back());
    centerlines_.push_back(centerline(l));
    predecessors_.emplace(l.id, std::vector<LaneletId>{});
  }
  for (const Lanelet& l : lanelets_) {
    for (LaneletId succ : l.successors) {
      predecessors_[succ].push_back(l.id);
    }
  }
  road_area_ = RegionSet::from_polygons(std::move(regions));
}

std::size_t LaneletNetwork::index_of(LaneletId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw InvalidGeometry("unknown lanelet id " + std::to_string(id));
  }
  return it->second;
}

const Lanelet& LaneletNetwork::at(LaneletId id) const { return lanelets_[index_of(id)]; }

const Polygon& LaneletNetwork::region_of(LaneletId id) const { return regions_[index_of(id)]; }

const ReferencePath& LaneletNetwork::centerline_of(LaneletId id) const {
  return centerlines_[index_of(id)];
}

double LaneletNetwork::length_of(LaneletId id) const { return centerlines_[index_of(id)].length(); }

const std::vector<LaneletId>& LaneletNetwork::predecessors_of(LaneletId id) const {
  return predecessors_.at(id);
}

AgentState make_agent_state(double x, double y, double theta, double v,
                            const ReferencePath& gamma) {
  if (v < 0.0) {
    throw InvalidGeometry("agent speed must be non-negative");
  }
  const FrenetCoord f = gamma.project({x, y});
  return AgentState{x, y, theta, v, f.s, f.d};
}

}  // namespace umbra
