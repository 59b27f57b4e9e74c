#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "umbra/planner.hpp"

using namespace umbra;

namespace {

const ReferencePath& straight_gamma() {
  static const ReferencePath g{std::vector<Vec2>{{0, 0}, {300, 0}}};
  return g;
}

PlannerConfig base_config(double desired = 10.0) {
  PlannerConfig cfg;
  cfg.desired_speed = desired;
  cfg.speed_span = 13.9;
  return cfg;
}

}  // namespace

TEST_CASE("standstill fixed point") {
  const AgentState ego = make_agent_state(5.0, 0.0, 0.0, 0.0, straight_gamma());
  PlannerConfig cfg = base_config(0.0);
  const auto cands = sample_trajectories(ego, straight_gamma(), cfg);
  REQUIRE_FALSE(cands.empty());
  const TrajectoryCandidate& best = cands.front();
  CHECK(best.cost == doctest::Approx(0.0));
  for (const TrajectoryState& st : best.states) {
    CHECK(st.x == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(st.y == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(st.v == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("cruise at the desired speed is the cheapest candidate") {
  const AgentState ego = make_agent_state(10.0, 0.0, 0.0, 10.0, straight_gamma());
  PlannerConfig cfg = base_config(10.0);
  cfg.target_speeds = {0.0, 5.0, 10.0, 13.9};
  const auto cands = sample_trajectories(ego, straight_gamma(), cfg);
  REQUIRE_FALSE(cands.empty());
  const TrajectoryCandidate& best = cands.front();
  CHECK(best.speed_index == 2);
  CHECK(best.lateral_offset == 0.0);
  for (std::size_t k = 0; k < best.states.size(); ++k) {
    CHECK(best.states[k].v == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(best.states[k].y == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("infeasible deceleration is excluded") {
  const AgentState ego = make_agent_state(0.0, 0.0, 0.0, 13.9, straight_gamma());
  PlannerConfig cfg = base_config(13.9);
  cfg.horizon = 1.0;  // 13.9 -> 0 in 1 s needs |a| ~ 20.9 > 8
  cfg.target_speeds = {0.0, 13.9};
  const auto cands = sample_trajectories(ego, straight_gamma(), cfg);
  for (const TrajectoryCandidate& c : cands) {
    CHECK(c.speed_index != 0);
  }

  SUBCASE("same target is feasible over a longer horizon") {
    cfg.horizon = 3.0;  // peak |a| = 6.95
    const auto longer = sample_trajectories(ego, straight_gamma(), cfg);
    bool found_stop = false;
    for (const TrajectoryCandidate& c : longer) {
      found_stop = found_stop || c.speed_index == 0;
    }
    CHECK(found_stop);
  }
}

TEST_CASE("candidates respect the acceleration limits") {
  const PlannerConfig cfg = base_config(12.0);
  for (const double v0 : {0.0, 4.0, 9.0, 13.9}) {
    const AgentState ego = make_agent_state(0.0, 0.2, 0.05, v0, straight_gamma());
    const auto cands = sample_trajectories(ego, straight_gamma(), cfg);
    for (const TrajectoryCandidate& c : cands) {
      for (std::size_t k = 1; k < c.states.size(); ++k) {
        const double dv = c.states[k].v - c.states[k - 1].v;
        const double dt = c.states[k].t - c.states[k - 1].t;
        // Envelope check on speed changes (v mixes a little lateral motion in).
        CHECK(dv / dt <= cfg.limits.a_max + 0.5);
        CHECK(dv / dt >= cfg.limits.a_min - 0.5);
      }
    }
  }
}

TEST_CASE("frenet re-projection matches the sampled profile on straight paths") {
  const AgentState ego = make_agent_state(3.0, 0.4, 0.0, 8.0, straight_gamma());
  PlannerConfig cfg = base_config(8.0);
  const auto cands = sample_trajectories(ego, straight_gamma(), cfg);
  REQUIRE_FALSE(cands.empty());
  for (const TrajectoryCandidate& c : cands) {
    // End state must sit at the commanded lateral offset.
    const FrenetCoord f_end = straight_gamma().project({c.states.back().x, c.states.back().y});
    CHECK(std::abs(f_end.d - c.lateral_offset) <= 1e-3);
  }
}

TEST_CASE("ordering is total and deterministic") {
  const AgentState ego = make_agent_state(0.0, 0.0, 0.0, 6.0, straight_gamma());
  PlannerConfig cfg = base_config(6.0);
  const auto a = sample_trajectories(ego, straight_gamma(), cfg);
  const auto b = sample_trajectories(ego, straight_gamma(), cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].speed_index == b[i].speed_index);
    CHECK(a[i].lateral_offset == b[i].lateral_offset);
    CHECK(a[i].cost == b[i].cost);
  }

  SUBCASE("ties break by speed index then |offset|") {
    cfg.weights = {0.0, 0.0, 0.0};  // all costs zero
    const auto tied = sample_trajectories(ego, straight_gamma(), cfg);
    REQUIRE(tied.size() >= 6);
    CHECK(tied[0].speed_index == 0);
    CHECK(tied[0].lateral_offset == 0.0);
    CHECK(tied[1].speed_index == 0);
    CHECK(std::abs(tied[1].lateral_offset) == 0.5);
  }
}

TEST_CASE("emergency stop ramps down at the braking limit") {
  const AgentState ego = make_agent_state(10.0, 0.0, 0.0, 12.0, straight_gamma());
  const PlannerConfig cfg = base_config();
  const TrajectoryCandidate stop = emergency_stop(ego, straight_gamma(), cfg);
  CHECK(stop.states.front().v == doctest::Approx(12.0));
  CHECK(stop.states.back().v == doctest::Approx(0.0));
  for (std::size_t k = 1; k < stop.states.size(); ++k) {
    const double dv = stop.states[k].v - stop.states[k - 1].v;
    CHECK(dv <= 1e-9);
    CHECK(dv / 0.1 >= cfg.limits.a_min - 1e-6);
  }
}
