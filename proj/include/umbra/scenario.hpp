#pragma once

#include <optional>
#include <string>
#include <vector>

#include "umbra/occlusion.hpp"
#include "umbra/phantom.hpp"
#include "umbra/planner.hpp"
#include "umbra/prediction.hpp"
#include "umbra/risk.hpp"
#include "umbra/road.hpp"
#include "umbra/tracking.hpp"

namespace umbra {

inline constexpr const char* kScenarioSchema = "umbra.scenario/1";

enum class PlannerMode { kBaseline, kPhantomOnly, kPhantomWithTracking, kOmniscient };

const char* to_string(PlannerMode mode);
std::optional<PlannerMode> mode_from_string(const std::string& name);

struct TimedState {
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double theta{0.0};
  double v{0.0};
};

/// Scripted road user replayed by the simulation (no interaction).
struct DynamicObstacle {
  int id{0};
  AgentClass cls{AgentClass::kVehicle};
  double length{4.5};
  double width{1.8};
  std::vector<TimedState> states;  // strictly increasing t, linear interpolation

  TimedState state_at(double t) const;
  Polygon polygon_at(double t) const;
};

struct EgoInit {
  double x{0.0};
  double y{0.0};
  double theta{0.0};
  double v{0.0};
};

struct Scenario {
  std::string schema{kScenarioSchema};
  std::string name{"unnamed"};
  double dt{0.1};
  double duration{10.0};
  double sensor_range{50.0};
  int sensor_arc_segments{kDefaultArcSegments};
  PlannerMode mode{PlannerMode::kPhantomWithTracking};
  double r_max{0.1};  // may be infinity
  double desired_speed{10.0};

  std::vector<Lanelet> lanelets;
  std::vector<Vec2> reference_path;
  EgoInit ego;
  std::vector<std::vector<Vec2>> static_obstacles;
  std::vector<DynamicObstacle> dynamic_obstacles;

  PlannerConfig planner;
  RiskParams risk;
  PhantomConfig phantom;
  TrackerConfig tracker;
  OcclusionConfig occlusion;

  std::vector<Polygon> static_polygons() const;
  ReferencePath gamma() const { return ReferencePath(reference_path); }
};

/// Every violated invariant, empty when the scenario is valid.
std::vector<std::string> validate(const Scenario& s);

/// Parse/serialize the scenario file format (JSON, schema-tagged, SI units).
Scenario scenario_from_json_string(const std::string& text);
std::string scenario_to_json_string(const Scenario& s);

/// Throws InvalidScenario on parse errors or invariant violations.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace umbra
