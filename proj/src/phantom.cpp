#include "umbra/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace umbra {

namespace {

bool inside_any(const Vec2& p, std::span<const Polygon> polys) {
  for (const Polygon& poly : polys) {
    if (poly.contains(p)) {
      return true;
    }
  }
  return false;
}

// Arc length travelled after time t with speed clipped to [0, cap].
double progress(double v0, double a, double cap, double t) {
  v0 = std::clamp(v0, 0.0, cap);
  if (a > 0.0) {
    const double t_sat = (cap - v0) / a;
    if (t <= t_sat) {
      return v0 * t + 0.5 * a * t * t;
    }
    return v0 * t_sat + 0.5 * a * t_sat * t_sat + cap * (t - t_sat);
  }
  if (a < 0.0) {
    const double t_stop = -v0 / a;
    if (t <= t_stop) {
      return v0 * t + 0.5 * a * t * t;
    }
    return v0 * t_stop + 0.5 * a * t_stop * t_stop;
  }
  return v0 * t;
}

double speed_at(double v0, double a, double cap, double t) {
  return std::clamp(std::clamp(v0, 0.0, cap) + a * t, 0.0, cap);
}

}  // namespace

std::vector<PhantomAgent> static_spawn_points(const RegionSet& occluded,
                                              std::span<const Polygon> static_obstacles,
                                              const ReferencePath& gamma, const AgentState& ego,
                                              double sensor_range,
                                              std::span<const Polygon> visible_obstacles,
                                              const PhantomConfig& cfg) {
  std::vector<PhantomAgent> out;
  if (occluded.empty()) {
    return out;
  }
  for (const Polygon& obstacle : static_obstacles) {
    const double s_obs = gamma.project(obstacle.centroid()).s;
    if (s_obs <= ego.s || s_obs > ego.s + cfg.static_horizon) {
      continue;
    }
    if (distance(obstacle.centroid(), ego.position()) > sensor_range) {
      continue;
    }
    const RegionSet shadow = obstacle_shadow(ego.position(), obstacle, sensor_range);
    if (shadow.empty()) {
      continue;
    }

    // Candidates just inside the shadow boundary.
    std::optional<Vec2> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const Polygon& piece : shadow.polygons()) {
      const auto& verts = piece.vertices();
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const Vec2 a = verts[i];
        const Vec2 b = verts[(i + 1) % verts.size()];
        const double len = distance(a, b);
        const int steps = std::max(1, static_cast<int>(len / 0.25));
        const Vec2 tangent = (b - a).normalized();
        const Vec2 normal{-tangent.y, tangent.x};
        for (int k = 0; k <= steps; ++k) {
          const Vec2 q = a + (b - a) * (static_cast<double>(k) / steps);
          for (const double side : {1.0, -1.0}) {
            const Vec2 cand = q + normal * (side * cfg.spawn_inset);
            if (!piece.contains(cand) || obstacle.contains(cand)) {
              continue;
            }
            if (!occluded.contains(cand) || inside_any(cand, visible_obstacles)) {
              continue;
            }
            const double dist_to_gamma = std::abs(gamma.project(cand).d);
            if (dist_to_gamma < best_dist) {
              best_dist = dist_to_gamma;
              best = cand;
            }
          }
        }
      }
    }
    if (!best) {
      continue;
    }
    PhantomAgent agent;
    agent.cls = AgentClass::kPedestrian;
    agent.spawn = SpawnPoint{*best, SpawnKind::kStaticPedestrian, std::nullopt, std::nullopt};
    agent.profiles = cfg.pedestrian_profiles;
    const Vec2 foot = gamma.point_at(gamma.project(*best).s);
    const Vec2 dir = (foot - *best).norm() > 1e-9 ? (foot - *best).normalized() : Vec2{1, 0};
    agent.path = {*best, foot + dir * cfg.path_overshoot};
    out.push_back(std::move(agent));
  }
  return out;
}

namespace {

struct ChainSegment {
  LaneletId id;
  double offset;  // chain arc length at the segment start
  double length;
};

struct Chain {
  std::vector<Vec2> points;
  std::vector<ChainSegment> segments;
  double total{0.0};
};

Chain build_chain(const LaneletNetwork& net, LaneletId start, double max_extension) {
  Chain chain;
  LaneletId id = start;
  int guard = 0;
  while (guard++ < 32) {
    const auto& pts = net.centerline_of(id).points();
    double offset = chain.total;
    if (chain.points.empty()) {
      chain.points = pts;
    } else {
      chain.points.insert(chain.points.end(), pts.begin(), pts.end());
    }
    // Recompute the running length from the actual polyline.
    chain.total = 0.0;
    for (std::size_t i = 1; i < chain.points.size(); ++i) {
      chain.total += distance(chain.points[i - 1], chain.points[i]);
    }
    chain.segments.push_back({id, offset, chain.total - offset});
    const Lanelet& lane = net.at(id);
    if (lane.successors.empty() || chain.total >= net.length_of(start) + max_extension) {
      break;
    }
    id = lane.successors.front();
    bool cycle = false;
    for (const ChainSegment& seg : chain.segments) {
      if (seg.id == id) {
        cycle = true;
      }
    }
    if (cycle) {
      break;
    }
  }
  return chain;
}

struct CrossingHit {
  double s_chain;
  double s_gamma;
};

std::optional<CrossingHit> find_crossing(const Chain& chain, const ReferencePath& gamma,
                                         double ego_s, const PhantomConfig& cfg) {
  std::optional<CrossingHit> best;
  const auto& cp = chain.points;
  const auto& gp = gamma.points();
  double s_chain_acc = 0.0;
  for (std::size_t i = 0; i + 1 < cp.size(); ++i) {
    const Vec2 r = cp[i + 1] - cp[i];
    const double seg_len = r.norm();
    double s_gamma_acc = 0.0;
    for (std::size_t j = 0; j + 1 < gp.size(); ++j) {
      const Vec2 s = gp[j + 1] - gp[j];
      const double denom = r.cross(s);
      const double gseg = s.norm();
      if (std::abs(denom) > 1e-12) {
        const double t = (gp[j] - cp[i]).cross(s) / denom;
        const double u = (gp[j] - cp[i]).cross(r) / denom;
        if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) {
          const double angle =
              std::abs(std::asin(std::clamp(r.normalized().cross(s.normalized()), -1.0, 1.0)));
          if (angle >= cfg.min_crossing_angle) {
            const double s_gamma = s_gamma_acc + u * gseg;
            if (s_gamma > ego_s && s_gamma <= ego_s + cfg.dynamic_horizon) {
              if (!best || s_gamma < best->s_gamma) {
                best = CrossingHit{s_chain_acc + t * seg_len, s_gamma};
              }
            }
          }
        }
      }
      s_gamma_acc += gseg;
    }
    s_chain_acc += seg_len;
  }
  return best;
}

// Occluded intervals of all chain lanes expressed in chain coordinates.
IntervalSet chain_occlusion(const Chain& chain, const OcclusionMap& occlusion) {
  std::vector<Interval> out;
  for (const ChainSegment& seg : chain.segments) {
    const auto it = occlusion.per_lane.find(seg.id);
    if (it == occlusion.per_lane.end()) {
      continue;
    }
    for (const Interval& iv : it->second.intervals.intervals()) {
      const double lo = seg.offset + std::min(iv.lo, seg.length);
      const double hi = seg.offset + std::min(iv.hi, seg.length);
      if (hi - lo > 1e-9) {
        out.push_back({lo, hi});
      }
    }
  }
  return IntervalSet::from_intervals(std::move(out));
}

std::vector<Vec2> subpath(const Chain& chain, double s_from, bool reversed) {
  ReferencePath path{std::vector<Vec2>(chain.points)};
  std::vector<Vec2> out;
  if (!reversed) {
    out.push_back(path.point_at(s_from));
    for (std::size_t i = 0; i < chain.points.size(); ++i) {
      if (path.cumulative_s()[i] > s_from) {
        out.push_back(chain.points[i]);
      }
    }
  } else {
    out.push_back(path.point_at(s_from));
    for (std::size_t i = chain.points.size(); i-- > 0;) {
      if (path.cumulative_s()[i] < s_from) {
        out.push_back(chain.points[i]);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<PhantomAgent> dynamic_spawn_points(const OcclusionMap& occlusion,
                                               const LaneletNetwork& net,
                                               const ReferencePath& gamma, double ego_s,
                                               std::span<const Polygon> visible_obstacles,
                                               const PhantomConfig& cfg) {
  std::vector<PhantomAgent> out;
  std::vector<Vec2> taken;

  for (const Lanelet& lane : net.lanelets()) {
    const Chain chain = build_chain(net, lane.id, cfg.chain_extension);
    const auto crossing = find_crossing(chain, gamma, ego_s, cfg);
    if (!crossing) {
      continue;
    }
    const IntervalSet occ = chain_occlusion(chain, occlusion);
    if (occ.empty()) {
      continue;
    }

    // Occluded point closest in arc length to the crossing; vehicle lanes
    // only approach from upstream, sidewalks from either side.
    const bool walkable = bidirectional(lane.type);
    std::optional<double> best_s;
    bool approach_reversed = false;
    for (const Interval& iv : occ.intervals()) {
      if (iv.lo <= crossing->s_chain) {
        const double cand = std::min(iv.hi, crossing->s_chain);
        if (!best_s || std::abs(crossing->s_chain - cand) < std::abs(crossing->s_chain - *best_s)) {
          best_s = cand;
          approach_reversed = false;
        }
      }
      if (walkable && iv.hi >= crossing->s_chain) {
        const double cand = std::max(iv.lo, crossing->s_chain);
        if (!best_s || std::abs(cand - crossing->s_chain) < std::abs(*best_s - crossing->s_chain)) {
          best_s = cand;
          approach_reversed = cand > crossing->s_chain;
        }
      }
    }
    if (!best_s) {
      continue;
    }

    const ReferencePath chain_path{std::vector<Vec2>(chain.points)};
    const Vec2 pos = chain_path.point_at(*best_s);
    if (inside_any(pos, visible_obstacles)) {
      continue;
    }
    bool duplicate = false;
    for (const Vec2& prev : taken) {
      if (distance(prev, pos) < 0.5) {
        duplicate = true;
      }
    }
    if (duplicate) {
      continue;
    }
    taken.push_back(pos);

    // Hosting lane of the spawn point.
    LaneletId host = lane.id;
    double s_local = *best_s;
    for (const ChainSegment& seg : chain.segments) {
      if (*best_s >= seg.offset && *best_s <= seg.offset + seg.length) {
        host = seg.id;
        s_local = *best_s - seg.offset;
        break;
      }
    }
    const double cap = net.at(host).speed_limit;
    const std::vector<Vec2> path = subpath(chain, *best_s, approach_reversed);
    if (path.size() < 2) {
      continue;
    }
    const SpawnPoint spawn{pos, SpawnKind::kDynamicLane, host, s_local};

    if (lane.type == LaneType::kVehicle) {
      PhantomAgent vehicle;
      vehicle.cls = AgentClass::kVehicle;
      vehicle.spawn = spawn;
      for (const double frac : cfg.vehicle_speed_fractions) {
        for (const double acc : cfg.vehicle_accelerations) {
          vehicle.profiles.push_back({frac * cap, acc});
        }
      }
      vehicle.path = path;
      vehicle.speed_cap = cap;
      out.push_back(vehicle);

      PhantomAgent cyclist;
      cyclist.cls = AgentClass::kCyclist;
      cyclist.spawn = spawn;
      cyclist.profiles = cfg.cyclist_profiles;
      cyclist.path = path;
      cyclist.speed_cap = cap;
      out.push_back(std::move(cyclist));
    } else {
      PhantomAgent walker;
      walker.cls = AgentClass::kPedestrian;
      walker.spawn = spawn;
      walker.profiles = cfg.pedestrian_profiles;
      walker.path = path;
      walker.speed_cap = cap;
      out.push_back(std::move(walker));
    }
  }
  return out;
}

std::vector<AgentPrediction> predict_phantom(const PhantomAgent& agent, double now, double dt,
                                             double t_pred, const PhantomConfig& cfg) {
  std::vector<AgentPrediction> out;
  if (agent.path.size() < 2) {
    return out;
  }
  const ReferencePath path{std::vector<Vec2>(agent.path)};
  const int n = static_cast<int>(std::round(t_pred / dt));
  int profile_index = 0;
  for (const BehaviorProfile& prof : agent.profiles) {
    AgentPrediction pred;
    pred.cls = agent.cls;
    pred.source_id = -(++profile_index);
    pred.points.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
      const double t_rel = k * dt;
      PredictionPoint p;
      p.t = now + t_rel;
      const double s = progress(prof.v0, prof.a, agent.speed_cap, t_rel);
      p.mean = path.point_at(std::min(s, path.length()));
      p.cov = Mat2::isotropic(cfg.base_variance);
      p.speed = speed_at(prof.v0, prof.a, agent.speed_cap, t_rel);
      pred.points.push_back(p);
    }
    out.push_back(std::move(pred));
  }
  return out;
}

}  // namespace umbra
