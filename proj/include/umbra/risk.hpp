#pragma once

#include <span>
#include <vector>

#include "umbra/prediction.hpp"

namespace umbra {

struct EgoFootprint {
  double length{4.8};  // [m]
  double width{2.0};   // [m]
  double area() const { return length * width; }
};

/// Logistic collision-severity curve per road-user class.
struct HarmParams {
  struct Logistic {
    double v50;  // relative speed at harm 0.5 [m/s]
    double k;    // slope [s/m]
  };
  Logistic pedestrian{8.3, 0.6};
  Logistic cyclist{10.0, 0.5};
  Logistic vehicle{16.7, 0.3};

  const Logistic& of(AgentClass cls) const {
    switch (cls) {
      case AgentClass::kPedestrian:
        return pedestrian;
      case AgentClass::kCyclist:
        return cyclist;
      case AgentClass::kVehicle:
        return vehicle;
    }
    return vehicle;
  }
};

struct RiskParams {
  EgoFootprint footprint;
  HarmParams harm;
};

/// Probability mass of N(mean, cov) over the ego footprint centered at
/// ego_pos with the given heading. Singular covariances degrade to a point
/// mass. Capped at 1.
double collision_probability(const Vec2& ego_pos, double ego_heading, const Vec2& mean,
                             const Mat2& cov, const EgoFootprint& fp = {});

/// Collision severity in [0, 1], monotone in the relative speed.
double harm(AgentClass cls, double rel_speed, const HarmParams& params = {});

/// Ego trajectory sample per Frenet-sampled candidate.
struct TrajectoryState {
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double v{0.0};
  double theta{0.0};
};

struct TrajectoryCandidate {
  std::vector<TrajectoryState> states;  // uniform dt
  double cost{0.0};
  bool feasible{true};
  int speed_index{0};        // tie-break bookkeeping
  double lateral_offset{0.0};
};

struct StepRisk {
  double t{0.0};
  double risk{0.0};
};

/// Per-step risk (max over agents of probability x harm) and its maximum.
struct RiskProfile {
  std::vector<StepRisk> per_step;
  double max_risk{0.0};
  bool truncated{false};  // some steps lacked prediction coverage
};

RiskProfile trajectory_risk(const TrajectoryCandidate& traj,
                            std::span<const AgentPrediction> agents,
                            const RiskParams& params = {});

struct Selection {
  std::size_t index{0};
  bool exceeded{false};  // no candidate met the threshold; minimum-risk fallback
};

/// Cheapest candidate with max_risk <= r_max; falls back to the minimum-risk
/// candidate when none qualifies. Candidates must be cost-sorted. Throws
/// PlannerFailure on an empty list.
Selection select(std::span<const TrajectoryCandidate> candidates,
                 std::span<const RiskProfile> risks, double r_max);

}  // namespace umbra
