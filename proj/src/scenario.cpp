#include "umbra/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace umbra {

using nlohmann::json;

const char* to_string(PlannerMode mode) {
  switch (mode) {
    case PlannerMode::kBaseline:
      return "baseline";
    case PlannerMode::kPhantomOnly:
      return "phantom_only";
    case PlannerMode::kPhantomWithTracking:
      return "phantom_with_tracking";
    case PlannerMode::kOmniscient:
      return "omniscient";
  }
  return "baseline";
}

std::optional<PlannerMode> mode_from_string(const std::string& name) {
  for (const PlannerMode m : {PlannerMode::kBaseline, PlannerMode::kPhantomOnly,
                              PlannerMode::kPhantomWithTracking, PlannerMode::kOmniscient}) {
    if (name == to_string(m)) {
      return m;
    }
  }
  return std::nullopt;
}

namespace {

std::optional<AgentClass> class_from_string(const std::string& name) {
  for (const AgentClass c :
       {AgentClass::kPedestrian, AgentClass::kCyclist, AgentClass::kVehicle}) {
    if (name == to_string(c)) {
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace

TimedState DynamicObstacle::state_at(double t) const {
  if (states.empty()) {
    return {};
  }
  if (t <= states.front().t) {
    TimedState s = states.front();
    s.t = t;
    return s;
  }
  if (t >= states.back().t) {
    TimedState s = states.back();
    s.t = t;
    return s;
  }
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    const TimedState& a = states[i];
    const TimedState& b = states[i + 1];
    if (t >= a.t && t <= b.t) {
      const double f = (t - a.t) / (b.t - a.t);
      TimedState s;
      s.t = t;
      s.x = a.x + f * (b.x - a.x);
      s.y = a.y + f * (b.y - a.y);
      double dth = b.theta - a.theta;
      while (dth > std::numbers::pi) dth -= 2 * std::numbers::pi;
      while (dth < -std::numbers::pi) dth += 2 * std::numbers::pi;
      s.theta = a.theta + f * dth;
      s.v = a.v + f * (b.v - a.v);
      return s;
    }
  }
  return states.back();
}

Polygon DynamicObstacle::polygon_at(double t) const {
  const TimedState s = state_at(t);
  return oriented_rect({s.x, s.y}, length, width, s.theta);
}

std::vector<Polygon> Scenario::static_polygons() const {
  std::vector<Polygon> out;
  out.reserve(static_obstacles.size());
  for (const auto& ring : static_obstacles) {
    out.emplace_back(ring);
  }
  return out;
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> out;
  if (s.schema != kScenarioSchema) {
    out.push_back("unknown schema id '" + s.schema + "' (expected " + kScenarioSchema + ")");
  }
  if (!(s.dt > 0.0)) {
    out.push_back("dt must be positive");
  }
  if (!(s.duration > 0.0)) {
    out.push_back("duration must be positive");
  } else if (s.dt > 0.0) {
    const double steps = s.duration / s.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6) {
      out.push_back("duration must be a multiple of dt");
    }
  }
  if (!(s.sensor_range > 0.0)) {
    out.push_back("sensor_range must be positive");
  }
  if (s.sensor_arc_segments < 16) {
    out.push_back("sensor_arc_segments must be at least 16");
  }
  if (!(s.r_max > 0.0)) {
    out.push_back("r_max must be positive (use inf for the unrestricted planner)");
  }
  if (s.lanelets.empty()) {
    out.push_back("network has no lanelets");
  }
  for (const std::string& v : LaneletNetwork::validate(s.lanelets)) {
    out.push_back(v);
  }
  if (s.reference_path.size() < 2) {
    out.push_back("reference path needs at least 2 points");
  } else {
    try {
      const ReferencePath gamma(s.reference_path);
      const FrenetCoord f = gamma.project({s.ego.x, s.ego.y});
      if (std::abs(f.d) > 2.5) {
        std::ostringstream msg;
        msg << "ego starts " << std::abs(f.d) << " m off the reference path";
        out.push_back(msg.str());
      }
    } catch (const InvalidGeometry& e) {
      out.push_back(std::string("reference path invalid: ") + e.what());
    }
  }
  if (s.ego.v < 0.0) {
    out.push_back("ego speed must be non-negative");
  }
  for (std::size_t i = 0; i < s.static_obstacles.size(); ++i) {
    try {
      const Polygon p(s.static_obstacles[i]);
    } catch (const InvalidGeometry& e) {
      out.push_back("static obstacle " + std::to_string(i) + ": " + e.what());
    }
  }
  for (const DynamicObstacle& d : s.dynamic_obstacles) {
    if (d.states.empty()) {
      out.push_back("dynamic obstacle " + std::to_string(d.id) + " has no states");
      continue;
    }
    for (std::size_t i = 1; i < d.states.size(); ++i) {
      if (d.states[i].t <= d.states[i - 1].t) {
        out.push_back("dynamic obstacle " + std::to_string(d.id) +
                      " timestamps are not strictly increasing");
        break;
      }
    }
    if (!(d.length > 0.0) || !(d.width > 0.0)) {
      out.push_back("dynamic obstacle " + std::to_string(d.id) + " has non-positive extent");
    }
  }
  if (!(s.desired_speed >= 0.0)) {
    out.push_back("desired_speed must be non-negative");
  }
  return out;
}

namespace {

json vec2_list_to_json(const std::vector<Vec2>& pts) {
  json arr = json::array();
  for (const Vec2& p : pts) {
    arr.push_back({p.x, p.y});
  }
  return arr;
}

std::vector<Vec2> vec2_list_from_json(const json& arr) {
  std::vector<Vec2> out;
  for (const auto& item : arr) {
    out.push_back({item.at(0).get<double>(), item.at(1).get<double>()});
  }
  return out;
}

double r_max_from_json(const json& j) {
  if (j.is_string()) {
    const std::string v = j.get<std::string>();
    if (v == "inf" || v == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
    throw InvalidScenario({"r_max string must be 'inf'"});
  }
  return j.get<double>();
}

}  // namespace

Scenario scenario_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidScenario({std::string("parse error: ") + e.what()});
  }
  try {
    Scenario s;
    s.schema = j.value("schema", std::string{});
    s.name = j.value("name", std::string{"unnamed"});
    s.dt = j.value("dt", 0.1);
    s.duration = j.value("duration", 10.0);
    s.sensor_range = j.value("sensor_range", 50.0);
    s.sensor_arc_segments = j.value("sensor_arc_segments", kDefaultArcSegments);
    const std::string mode_name = j.value("mode", std::string{"phantom_with_tracking"});
    const auto mode = mode_from_string(mode_name);
    if (!mode) {
      throw InvalidScenario({"unknown mode '" + mode_name + "'"});
    }
    s.mode = *mode;
    if (j.contains("r_max")) {
      s.r_max = r_max_from_json(j.at("r_max"));
    }
    s.desired_speed = j.value("desired_speed", 10.0);

    for (const auto& jl : j.at("network").at("lanelets")) {
      Lanelet l;
      l.id = jl.at("id").get<int>();
      const std::string type = jl.value("type", std::string{"vehicle"});
      l.type = type == "sidewalk" ? LaneType::kSidewalk : LaneType::kVehicle;
      l.speed_limit = jl.value("speed_limit", 13.9);
      l.left_boundary = vec2_list_from_json(jl.at("left"));
      l.right_boundary = vec2_list_from_json(jl.at("right"));
      if (jl.contains("successors")) {
        for (const auto& succ : jl.at("successors")) {
          l.successors.push_back(succ.get<int>());
        }
      }
      s.lanelets.push_back(std::move(l));
    }
    s.reference_path = vec2_list_from_json(j.at("reference_path"));
    const json& je = j.at("ego");
    s.ego = {je.at("x").get<double>(), je.at("y").get<double>(), je.value("theta", 0.0),
             je.value("v", 0.0)};
    if (j.contains("static_obstacles")) {
      for (const auto& jo : j.at("static_obstacles")) {
        s.static_obstacles.push_back(vec2_list_from_json(jo));
      }
    }
    if (j.contains("dynamic_obstacles")) {
      for (const auto& jd : j.at("dynamic_obstacles")) {
        DynamicObstacle d;
        d.id = jd.value("id", static_cast<int>(s.dynamic_obstacles.size() + 1));
        const std::string cls = jd.value("class", std::string{"vehicle"});
        const auto parsed = class_from_string(cls);
        if (!parsed) {
          throw InvalidScenario({"unknown obstacle class '" + cls + "'"});
        }
        d.cls = *parsed;
        d.length = jd.value("length", d.cls == AgentClass::kVehicle   ? 4.5
                                      : d.cls == AgentClass::kCyclist ? 1.8
                                                                      : 0.5);
        d.width = jd.value("width", d.cls == AgentClass::kVehicle   ? 1.8
                                    : d.cls == AgentClass::kCyclist ? 0.6
                                                                    : 0.5);
        for (const auto& js : jd.at("states")) {
          d.states.push_back({js.at(0).get<double>(), js.at(1).get<double>(),
                              js.at(2).get<double>(), js.at(3).get<double>(),
                              js.at(4).get<double>()});
        }
        s.dynamic_obstacles.push_back(std::move(d));
      }
    }
    if (j.contains("planner")) {
      const json& jp = j.at("planner");
      s.planner.horizon = jp.value("horizon", s.planner.horizon);
      s.planner.dt = jp.value("dt", s.planner.dt);
      if (jp.contains("target_speeds")) {
        s.planner.target_speeds = jp.at("target_speeds").get<std::vector<double>>();
      }
      if (jp.contains("lateral_offsets")) {
        s.planner.lateral_offsets = jp.at("lateral_offsets").get<std::vector<double>>();
      }
      s.planner.speed_span = jp.value("speed_span", s.planner.speed_span);
      s.planner.weights.jerk = jp.value("w_jerk", s.planner.weights.jerk);
      s.planner.weights.lateral = jp.value("w_lateral", s.planner.weights.lateral);
      s.planner.weights.speed = jp.value("w_speed", s.planner.weights.speed);
      s.planner.limits.a_max = jp.value("a_max", s.planner.limits.a_max);
      s.planner.limits.a_min = jp.value("a_min", s.planner.limits.a_min);
      s.planner.limits.lat_acc_max = jp.value("lat_acc_max", s.planner.limits.lat_acc_max);
    }
    if (j.contains("tracker")) {
      const json& jt = j.at("tracker");
      s.tracker.horizon = jt.value("horizon", s.tracker.horizon);
      s.tracker.forget_after = jt.value("forget_after", s.tracker.forget_after);
      s.tracker.sigma0_sq = jt.value("sigma0_sq", s.tracker.sigma0_sq);
      s.tracker.growth_rate = jt.value("growth_rate", s.tracker.growth_rate);
      s.tracker.lateral_decay = jt.value("lateral_decay", s.tracker.lateral_decay);
    }
    if (j.contains("risk")) {
      const json& jr = j.at("risk");
      s.risk.footprint.length = jr.value("ego_length", s.risk.footprint.length);
      s.risk.footprint.width = jr.value("ego_width", s.risk.footprint.width);
      const auto load_harm = [&jr](const char* key, HarmParams::Logistic& h) {
        if (jr.contains(key)) {
          h.v50 = jr.at(key).value("v50", h.v50);
          h.k = jr.at(key).value("k", h.k);
        }
      };
      load_harm("pedestrian", s.risk.harm.pedestrian);
      load_harm("cyclist", s.risk.harm.cyclist);
      load_harm("vehicle", s.risk.harm.vehicle);
    }
    if (j.contains("phantom")) {
      const json& jp = j.at("phantom");
      const auto load_profiles = [&jp](const char* key, std::vector<BehaviorProfile>& out) {
        if (jp.contains(key)) {
          out.clear();
          for (const auto& pr : jp.at(key)) {
            out.push_back({pr.at(0).get<double>(), pr.at(1).get<double>()});
          }
        }
      };
      load_profiles("pedestrian_profiles", s.phantom.pedestrian_profiles);
      load_profiles("cyclist_profiles", s.phantom.cyclist_profiles);
      if (jp.contains("vehicle_speed_fractions")) {
        s.phantom.vehicle_speed_fractions =
            jp.at("vehicle_speed_fractions").get<std::vector<double>>();
      }
      if (jp.contains("vehicle_accelerations")) {
        s.phantom.vehicle_accelerations =
            jp.at("vehicle_accelerations").get<std::vector<double>>();
      }
      s.phantom.static_horizon = jp.value("static_horizon", s.phantom.static_horizon);
      s.phantom.dynamic_horizon = jp.value("dynamic_horizon", s.phantom.dynamic_horizon);
      s.phantom.base_variance = jp.value("base_variance", s.phantom.base_variance);
    }
    if (j.contains("occlusion")) {
      const json& jo = j.at("occlusion");
      s.occlusion.station_spacing = jo.value("station_spacing", s.occlusion.station_spacing);
      s.occlusion.lateral_samples = jo.value("lateral_samples", s.occlusion.lateral_samples);
      s.occlusion.edge_fraction = jo.value("edge_fraction", s.occlusion.edge_fraction);
    }
    return s;
  } catch (const json::exception& e) {
    throw InvalidScenario({std::string("malformed scenario: ") + e.what()});
  }
}

std::string scenario_to_json_string(const Scenario& s) {
  json j;
  j["schema"] = s.schema;
  j["name"] = s.name;
  j["dt"] = s.dt;
  j["duration"] = s.duration;
  j["sensor_range"] = s.sensor_range;
  j["sensor_arc_segments"] = s.sensor_arc_segments;
  j["mode"] = to_string(s.mode);
  if (std::isinf(s.r_max)) {
    j["r_max"] = "inf";
  } else {
    j["r_max"] = s.r_max;
  }
  j["desired_speed"] = s.desired_speed;

  json lanelets = json::array();
  for (const Lanelet& l : s.lanelets) {
    json jl;
    jl["id"] = l.id;
    jl["type"] = to_string(l.type);
    jl["speed_limit"] = l.speed_limit;
    jl["left"] = vec2_list_to_json(l.left_boundary);
    jl["right"] = vec2_list_to_json(l.right_boundary);
    if (!l.successors.empty()) {
      jl["successors"] = l.successors;
    }
    lanelets.push_back(std::move(jl));
  }
  j["network"]["lanelets"] = std::move(lanelets);
  j["reference_path"] = vec2_list_to_json(s.reference_path);
  j["ego"] = {{"x", s.ego.x}, {"y", s.ego.y}, {"theta", s.ego.theta}, {"v", s.ego.v}};

  json statics = json::array();
  for (const auto& ring : s.static_obstacles) {
    statics.push_back(vec2_list_to_json(ring));
  }
  j["static_obstacles"] = std::move(statics);

  json dynamics = json::array();
  for (const DynamicObstacle& d : s.dynamic_obstacles) {
    json jd;
    jd["id"] = d.id;
    jd["class"] = to_string(d.cls);
    jd["length"] = d.length;
    jd["width"] = d.width;
    json states = json::array();
    for (const TimedState& st : d.states) {
      states.push_back({st.t, st.x, st.y, st.theta, st.v});
    }
    jd["states"] = std::move(states);
    dynamics.push_back(std::move(jd));
  }
  j["dynamic_obstacles"] = std::move(dynamics);

  j["planner"] = {{"horizon", s.planner.horizon},
                  {"dt", s.planner.dt},
                  {"target_speeds", s.planner.target_speeds},
                  {"lateral_offsets", s.planner.lateral_offsets},
                  {"speed_span", s.planner.speed_span},
                  {"w_jerk", s.planner.weights.jerk},
                  {"w_lateral", s.planner.weights.lateral},
                  {"w_speed", s.planner.weights.speed},
                  {"a_max", s.planner.limits.a_max},
                  {"a_min", s.planner.limits.a_min},
                  {"lat_acc_max", s.planner.limits.lat_acc_max}};
  j["tracker"] = {{"horizon", s.tracker.horizon},
                  {"forget_after", s.tracker.forget_after},
                  {"sigma0_sq", s.tracker.sigma0_sq},
                  {"growth_rate", s.tracker.growth_rate},
                  {"lateral_decay", s.tracker.lateral_decay}};
  const auto harm_json = [](const HarmParams::Logistic& h) {
    return json{{"v50", h.v50}, {"k", h.k}};
  };
  j["risk"] = {{"ego_length", s.risk.footprint.length},
               {"ego_width", s.risk.footprint.width},
               {"pedestrian", harm_json(s.risk.harm.pedestrian)},
               {"cyclist", harm_json(s.risk.harm.cyclist)},
               {"vehicle", harm_json(s.risk.harm.vehicle)}};
  const auto profiles_json = [](const std::vector<BehaviorProfile>& profiles) {
    json arr = json::array();
    for (const BehaviorProfile& p : profiles) {
      arr.push_back({p.v0, p.a});
    }
    return arr;
  };
  j["phantom"] = {{"pedestrian_profiles", profiles_json(s.phantom.pedestrian_profiles)},
                  {"cyclist_profiles", profiles_json(s.phantom.cyclist_profiles)},
                  {"vehicle_speed_fractions", s.phantom.vehicle_speed_fractions},
                  {"vehicle_accelerations", s.phantom.vehicle_accelerations},
                  {"static_horizon", s.phantom.static_horizon},
                  {"dynamic_horizon", s.phantom.dynamic_horizon},
                  {"base_variance", s.phantom.base_variance}};
  j["occlusion"] = {{"station_spacing", s.occlusion.station_spacing},
                    {"lateral_samples", s.occlusion.lateral_samples},
                    {"edge_fraction", s.occlusion.edge_fraction}};
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidScenario({"cannot open scenario file '" + path + "'"});
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario s = scenario_from_json_string(buf.str());
  std::vector<std::string> violations = validate(s);
  if (!violations.empty()) {
    throw InvalidScenario(std::move(violations));
  }
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write scenario file '" + path + "'");
  }
  out << scenario_to_json_string(s);
}

}  // namespace umbra
