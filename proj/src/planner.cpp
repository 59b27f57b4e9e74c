#include "umbra/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace umbra {

std::vector<double> PlannerConfig::effective_target_speeds() const {
  if (!target_speeds.empty()) {
    return target_speeds;
  }
  std::vector<double> out;
  for (int i = 0; i < 5; ++i) {
    out.push_back(speed_span * i / 4.0);
  }
  return out;
}

namespace {

// Quartic velocity-keeping profile: s(0)=s0, v(0)=v0, a(0)=0,
// v(T)=vt, a(T)=0.
struct LonProfile {
  double s0, v0, c3, c4;
  double s(double t) const { return s0 + v0 * t + c3 * t * t * t + c4 * t * t * t * t; }
  double v(double t) const { return v0 + 3 * c3 * t * t + 4 * c4 * t * t * t; }
  double a(double t) const { return 6 * c3 * t + 12 * c4 * t * t; }
  double jerk(double t) const { return 6 * c3 + 24 * c4 * t; }
};

LonProfile make_lon(double s0, double v0, double vt, double horizon) {
  const double dv = vt - v0;
  return {s0, v0, dv / (horizon * horizon), -dv / (2 * horizon * horizon * horizon)};
}

// Quintic lateral profile: d(0)=d0, d'(0)=dd0, d''(0)=0, d(T)=dt_target,
// d'(T)=0, d''(T)=0.
struct LatProfile {
  double d0, dd0, c3, c4, c5;
  double d(double t) const {
    return d0 + dd0 * t + c3 * t * t * t + c4 * t * t * t * t + c5 * t * t * t * t * t;
  }
  double dd(double t) const {
    return dd0 + 3 * c3 * t * t + 4 * c4 * t * t * t + 5 * c5 * t * t * t * t;
  }
  double ddd(double t) const { return 6 * c3 * t + 12 * c4 * t * t + 20 * c5 * t * t * t; }
  double jerk(double t) const { return 6 * c3 + 24 * c4 * t + 60 * c5 * t * t; }
};

LatProfile make_lat(double d0, double dd0, double d_target, double horizon) {
  const double T = horizon;
  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
  // Solve the 3x3 system for c3..c5.
  const double b1 = d_target - d0 - dd0 * T;
  const double b2 = -dd0;
  const double b3 = 0.0;
  // Closed-form inverse of [[T3,T4,T5],[3T2,4T3,5T4],[6T,12T2,20T3]].
  const double c3 = (10 * b1 - 4 * b2 * T + 0.5 * b3 * T2) / T3;
  const double c4 = (-15 * b1 + 7 * b2 * T - b3 * T2) / T4;
  const double c5 = (6 * b1 - 3 * b2 * T + 0.5 * b3 * T2) / T5;
  return {d0, dd0, c3, c4, c5};
}

double angle_wrap(double a) {
  while (a > std::numbers::pi) {
    a -= 2 * std::numbers::pi;
  }
  while (a < -std::numbers::pi) {
    a += 2 * std::numbers::pi;
  }
  return a;
}

}  // namespace

std::vector<TrajectoryCandidate> sample_trajectories(const AgentState& ego,
                                                     const ReferencePath& gamma,
                                                     const PlannerConfig& cfg) {
  const FrenetCoord f0 = gamma.project(ego.position());
  const double path_heading = gamma.heading_at(f0.s);
  const double dd0 = ego.v * std::sin(angle_wrap(ego.theta - path_heading));
  const std::vector<double> speeds = cfg.effective_target_speeds();
  const int n = std::max(1, static_cast<int>(std::round(cfg.horizon / cfg.dt)));

  std::vector<TrajectoryCandidate> out;
  for (std::size_t si = 0; si < speeds.size(); ++si) {
    const double vt = speeds[si];
    const LonProfile lon = make_lon(f0.s, ego.v, vt, cfg.horizon);
    for (const double offset : cfg.lateral_offsets) {
      // A standing or stopping vehicle cannot shift laterally.
      const double d_target = std::max(ego.v, vt) < 0.1 ? f0.d : offset;
      const LatProfile lat = make_lat(f0.d, dd0, d_target, cfg.horizon);

      TrajectoryCandidate cand;
      cand.speed_index = static_cast<int>(si);
      cand.lateral_offset = offset;
      cand.states.reserve(static_cast<std::size_t>(n) + 1);
      bool ok = true;
      double jerk_sq = 0.0, lat_dev_sq = 0.0;
      for (int k = 0; k <= n && ok; ++k) {
        const double t = cfg.horizon * k / n;
        const double sv = lon.v(t);
        const double sa = lon.a(t);
        const double la = lat.ddd(t);
        if (sv < -1e-9 || sa > cfg.limits.a_max + 1e-9 || sa < cfg.limits.a_min - 1e-9 ||
            std::abs(la) > cfg.limits.lat_acc_max + 1e-9) {
          ok = false;
          break;
        }
        const double s = lon.s(t);
        const double d = lat.d(t);
        const Vec2 pos = gamma.point_at(s) + gamma.normal_at(s) * d;
        const double heading = gamma.heading_at(s) +
                               std::atan2(lat.dd(t), std::max(sv, 0.5));
        cand.states.push_back({t, pos.x, pos.y, std::hypot(sv, lat.dd(t)), heading});
        jerk_sq += lon.jerk(t) * lon.jerk(t) + lat.jerk(t) * lat.jerk(t);
        lat_dev_sq += d * d;
      }
      if (!ok) {
        continue;
      }
      const double steps = static_cast<double>(n + 1);
      cand.cost = cfg.weights.jerk * jerk_sq / steps + cfg.weights.lateral * lat_dev_sq / steps +
                  cfg.weights.speed * (vt - cfg.desired_speed) * (vt - cfg.desired_speed);
      cand.feasible = true;
      out.push_back(std::move(cand));
    }
  }
  std::sort(out.begin(), out.end(), [](const TrajectoryCandidate& a, const TrajectoryCandidate& b) {
    if (a.cost != b.cost) {
      return a.cost < b.cost;
    }
    if (a.speed_index != b.speed_index) {
      return a.speed_index < b.speed_index;
    }
    if (std::abs(a.lateral_offset) != std::abs(b.lateral_offset)) {
      return std::abs(a.lateral_offset) < std::abs(b.lateral_offset);
    }
    return a.lateral_offset < b.lateral_offset;
  });
  return out;
}

TrajectoryCandidate emergency_stop(const AgentState& ego, const ReferencePath& gamma,
                                   const PlannerConfig& cfg) {
  const FrenetCoord f0 = gamma.project(ego.position());
  const int n = std::max(1, static_cast<int>(std::round(cfg.horizon / cfg.dt)));
  TrajectoryCandidate cand;
  cand.cost = 0.0;
  cand.feasible = true;
  for (int k = 0; k <= n; ++k) {
    const double t = cfg.horizon * k / n;
    const double v = std::max(0.0, ego.v + cfg.limits.a_min * t);
    // Distance covered under constant deceleration until standstill.
    const double t_stop = -ego.v / cfg.limits.a_min;
    const double s_rel = t < t_stop ? ego.v * t + 0.5 * cfg.limits.a_min * t * t
                                    : -0.5 * ego.v * ego.v / cfg.limits.a_min;
    const double s = f0.s + s_rel;
    const Vec2 pos = gamma.point_at(s) + gamma.normal_at(s) * f0.d;
    cand.states.push_back({t, pos.x, pos.y, v, gamma.heading_at(s)});
  }
  return cand;
}

}  // namespace umbra
