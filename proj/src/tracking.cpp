#include "umbra/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace umbra {

const char* to_string(AgentClass cls) {
  switch (cls) {
    case AgentClass::kPedestrian:
      return "pedestrian";
    case AgentClass::kCyclist:
      return "cyclist";
    case AgentClass::kVehicle:
      return "vehicle";
  }
  return "vehicle";
}

std::vector<Mat2> grow_uncertainty(double time_unseen, double horizon, double dt,
                                   const TrackerConfig& cfg) {
  std::vector<Mat2> out;
  const int n = static_cast<int>(std::round(horizon / dt));
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const double t_rel = k * dt;
    out.push_back(Mat2::isotropic(cfg.sigma0_sq + cfg.growth_rate * (time_unseen + t_rel)));
  }
  return out;
}

namespace {

double angle_diff(double a, double b) {
  double d = a - b;
  while (d > std::numbers::pi) {
    d -= 2 * std::numbers::pi;
  }
  while (d < -std::numbers::pi) {
    d += 2 * std::numbers::pi;
  }
  return d;
}

// Hosting lane for a lane-bound agent: containing vehicle lane whose
// direction agrees with the agent heading, smallest |lateral offset| wins.
const Lanelet* find_host_lane(const LaneletNetwork& net, const Vec2& pos, double heading) {
  const Lanelet* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Lanelet& lane : net.lanelets()) {
    if (lane.type != LaneType::kVehicle || !net.region_of(lane.id).contains(pos)) {
      continue;
    }
    const FrenetCoord f = net.centerline_of(lane.id).project(pos);
    const double align = angle_diff(heading, net.centerline_of(lane.id).heading_at(f.s));
    if (std::abs(align) > 0.5 * std::numbers::pi) {
      continue;
    }
    if (std::abs(f.d) < best_d) {
      best_d = std::abs(f.d);
      best = &lane;
    }
  }
  return best;
}

// Centerline of the host lane extended through successors until it covers
// the requested length past s0.
ReferencePath chain_path(const LaneletNetwork& net, const Lanelet& host, double needed) {
  std::vector<Vec2> pts = net.centerline_of(host.id).points();
  double total = net.length_of(host.id);
  const Lanelet* lane = &host;
  int guard = 0;
  while (total < needed && !lane->successors.empty() && guard++ < 16) {
    const Lanelet& next = net.at(lane->successors.front());
    const auto& cpts = net.centerline_of(next.id).points();
    pts.insert(pts.end(), cpts.begin(), cpts.end());
    total += net.length_of(next.id);
    lane = &next;
  }
  return ReferencePath(std::move(pts));
}

AgentPrediction straight_line(const TrackedObject& obj, double now, double dt,
                              const TrackerConfig& cfg) {
  AgentPrediction out;
  out.cls = obj.cls;
  out.source_id = obj.id;
  const double unseen = now - obj.last_seen_t;
  const Vec2 vel = Vec2{std::cos(obj.last_state.theta), std::sin(obj.last_state.theta)} *
                   obj.last_state.v;
  const std::vector<Mat2> covs = grow_uncertainty(unseen, cfg.horizon, dt, cfg);
  for (std::size_t k = 0; k < covs.size(); ++k) {
    const double t_rel = static_cast<double>(k) * dt;
    PredictionPoint p;
    p.t = now + t_rel;
    p.mean = obj.last_state.position() + vel * (unseen + t_rel);
    p.cov = covs[k];
    p.speed = obj.last_state.v;
    out.points.push_back(p);
  }
  return out;
}

}  // namespace

AgentPrediction predict(const TrackedObject& obj, const LaneletNetwork& net, double now,
                        double dt, const TrackerConfig& cfg) {
  if (obj.cls == AgentClass::kPedestrian) {
    return straight_line(obj, now, dt, cfg);
  }
  const Lanelet* host = find_host_lane(net, obj.last_state.position(), obj.last_state.theta);
  if (host == nullptr) {
    return straight_line(obj, now, dt, cfg);
  }
  const double unseen = now - obj.last_seen_t;
  const ReferencePath path =
      chain_path(net, *host, net.length_of(host->id) +
                                 obj.last_state.v * (unseen + cfg.horizon) + 5.0);
  const FrenetCoord f0 = path.project(obj.last_state.position());

  AgentPrediction out;
  out.cls = obj.cls;
  out.source_id = obj.id;
  const std::vector<Mat2> covs = grow_uncertainty(unseen, cfg.horizon, dt, cfg);
  for (std::size_t k = 0; k < covs.size(); ++k) {
    const double t_rel = static_cast<double>(k) * dt;
    const double dt_total = unseen + t_rel;
    const double s = f0.s + obj.last_state.v * dt_total;
    const double d = f0.d * std::exp(-dt_total / cfg.lateral_decay);
    PredictionPoint p;
    p.t = now + t_rel;
    p.mean = path.point_at(s) + path.normal_at(s) * d;
    p.cov = covs[k];
    p.speed = obj.last_state.v;
    out.points.push_back(p);
  }
  return out;
}

void ObjectTracker::observe(int id, AgentClass cls, const AgentState& state, double now) {
  TrackedObject& obj = objects_[id];
  obj.id = id;
  obj.cls = cls;
  obj.last_state = state;
  obj.last_seen_t = now;
}

void ObjectTracker::prune(double now) {
  std::erase_if(objects_, [&](const auto& kv) {
    return now - kv.second.last_seen_t > cfg_.forget_after;
  });
}

std::vector<AgentPrediction> ObjectTracker::predictions(const LaneletNetwork& net, double now,
                                                        double dt) const {
  std::vector<AgentPrediction> out;
  out.reserve(objects_.size());
  for (const auto& [id, obj] : objects_) {
    out.push_back(predict(obj, net, now, dt, cfg_));
  }
  return out;
}

}  // namespace umbra
