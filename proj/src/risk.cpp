#include "umbra/risk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "umbra/errors.hpp"

namespace umbra {

namespace {

constexpr int kQuadOrder = 24;

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration.
struct QuadRule {
  std::array<double, kQuadOrder> x{};
  std::array<double, kQuadOrder> w{};

  QuadRule() {
    const int n = kQuadOrder;
    for (int i = 0; i < n; ++i) {
      double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = xi;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        const double step = p1 / dp;
        xi -= step;
        if (std::abs(step) < 1e-15) {
          break;
        }
      }
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      x[static_cast<std::size_t>(i)] = xi;
      w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
  }
};

const QuadRule& quad_rule() {
  static const QuadRule rule;
  return rule;
}

double gaussian_pdf(const Vec2& q, const Mat2& cov, double det) {
  const double ixx = cov.yy / det;
  const double ixy = -cov.xy / det;
  const double iyy = cov.xx / det;
  const double expo = -0.5 * (q.x * q.x * ixx + 2.0 * q.x * q.y * ixy + q.y * q.y * iyy);
  return std::exp(expo) / (2.0 * std::numbers::pi * std::sqrt(det));
}

}  // namespace

double collision_probability(const Vec2& ego_pos, double ego_heading, const Vec2& mean,
                             const Mat2& cov, const EgoFootprint& fp) {
  // Work in the footprint frame: rect [-hx, hx] x [-hy, hy], mean at rel.
  const Vec2 rel = (mean - ego_pos).rotated(-ego_heading);
  const Mat2 c = cov.rotated(-ego_heading);
  const double hx = fp.length / 2.0;
  const double hy = fp.width / 2.0;

  const double det = c.det();
  if (det < 1e-18 || c.trace() < 1e-12) {
    // Point mass.
    return (std::abs(rel.x) <= hx && std::abs(rel.y) <= hy) ? 1.0 : 0.0;
  }

  const Vec2 nearest{std::clamp(rel.x, -hx, hx), std::clamp(rel.y, -hy, hy)};
  const double screen = gaussian_pdf(nearest - rel, c, det) * fp.area();
  if (screen < 1e-9) {
    return std::min(screen, 1.0);
  }

  const double sx = std::sqrt(c.xx);
  const double sy = std::sqrt(c.yy);
  const double x0 = std::max(-hx, rel.x - 8.0 * sx);
  const double x1 = std::min(hx, rel.x + 8.0 * sx);
  const double y0 = std::max(-hy, rel.y - 8.0 * sy);
  const double y1 = std::min(hy, rel.y + 8.0 * sy);
  if (x0 >= x1 || y0 >= y1) {
    return std::min(screen, 1.0);
  }

  const QuadRule& rule = quad_rule();
  const double cx = 0.5 * (x0 + x1), rx = 0.5 * (x1 - x0);
  const double cy = 0.5 * (y0 + y1), ry = 0.5 * (y1 - y0);
  double integral = 0.0;
  for (int i = 0; i < kQuadOrder; ++i) {
    const double px = cx + rx * rule.x[static_cast<std::size_t>(i)];
    double row = 0.0;
    for (int j = 0; j < kQuadOrder; ++j) {
      const double py = cy + ry * rule.x[static_cast<std::size_t>(j)];
      row += rule.w[static_cast<std::size_t>(j)] * gaussian_pdf({px - rel.x, py - rel.y}, c, det);
    }
    integral += rule.w[static_cast<std::size_t>(i)] * row;
  }
  integral *= rx * ry;
  return std::clamp(integral, 0.0, 1.0);
}

double harm(AgentClass cls, double rel_speed, const HarmParams& params) {
  const HarmParams::Logistic& h = params.of(cls);
  return 1.0 / (1.0 + std::exp(-h.k * (rel_speed - h.v50)));
}

RiskProfile trajectory_risk(const TrajectoryCandidate& traj,
                            std::span<const AgentPrediction> agents, const RiskParams& params) {
  RiskProfile out;
  out.per_step.reserve(traj.states.size());
  for (const TrajectoryState& st : traj.states) {
    double step_risk = 0.0;
    bool covered = agents.empty();
    for (const AgentPrediction& agent : agents) {
      if (agent.points.empty()) {
        continue;
      }
      const double t0 = agent.points.front().t;
      const double pred_dt = agent.points.size() > 1 ? agent.points[1].t - t0 : 0.0;
      std::size_t idx = 0;
      if (pred_dt > 0.0) {
        const double fidx = (st.t - t0) / pred_dt;
        if (fidx < -0.5 || fidx > static_cast<double>(agent.points.size() - 1) + 0.5) {
          continue;  // outside the prediction horizon
        }
        idx = static_cast<std::size_t>(std::clamp<long>(
            std::lround(fidx), 0L, static_cast<long>(agent.points.size() - 1)));
      } else if (std::abs(st.t - t0) > 1e-6) {
        continue;
      }
      covered = true;
      const PredictionPoint& p = agent.points[idx];
      const double prob =
          collision_probability({st.x, st.y}, st.theta, p.mean, p.cov, params.footprint);
      if (prob <= 0.0) {
        continue;
      }
      const double severity = harm(agent.cls, std::abs(st.v - p.speed), params.harm);
      step_risk = std::max(step_risk, prob * severity);
    }
    if (!covered) {
      out.truncated = true;
    }
    out.per_step.push_back({st.t, step_risk});
    out.max_risk = std::max(out.max_risk, step_risk);
  }
  return out;
}

Selection select(std::span<const TrajectoryCandidate> candidates,
                 std::span<const RiskProfile> risks, double r_max) {
  if (candidates.empty()) {
    throw PlannerFailure("no trajectory candidates to select from");
  }
  if (risks.size() != candidates.size()) {
    throw PlannerFailure("risk profiles do not match the candidate list");
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (risks[i].max_risk <= r_max) {
      return {i, false};
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < risks.size(); ++i) {
    if (risks[i].max_risk < risks[best].max_risk) {
      best = i;
    }
  }
  return {best, true};
}

}  // namespace umbra
