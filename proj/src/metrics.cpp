#include "umbra/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace umbra {

namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out += buf;
}

}  // namespace

std::string metrics_to_csv(const RunResult& result) {
  std::string out = "t,s_ego,v_ego,a_ego,max_risk,area_occluded,selected_cost,exceedance\n";
  for (const StepRecord& r : result.steps) {
    append_number(out, r.t);
    out += ',';
    append_number(out, r.s_ego);
    out += ',';
    append_number(out, r.v_ego);
    out += ',';
    append_number(out, r.a_ego);
    out += ',';
    append_number(out, r.max_risk);
    out += ',';
    append_number(out, r.area_occluded);
    out += ',';
    append_number(out, r.selected_cost);
    out += ',';
    out += r.exceedance ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_metrics_csv(const RunResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot write metrics file '" + path + "'");
  }
  f << metrics_to_csv(result);
}

RunResult metrics_from_csv(const std::string& text) {
  RunResult out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  double prev_v = 0.0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    StepRecord r;
    int exceed = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%d", &r.t, &r.s_ego, &r.v_ego,
                    &r.a_ego, &r.max_risk, &r.area_occluded, &r.selected_cost, &exceed) != 8) {
      throw std::runtime_error("malformed metrics row: " + line);
    }
    r.exceedance = exceed != 0;
    out.steps.push_back(r);
    out.min_velocity = first ? r.v_ego : std::min(out.min_velocity, r.v_ego);
    out.max_abs_accel = std::max(out.max_abs_accel, std::abs(r.a_ego));
    out.max_risk = std::max(out.max_risk, r.max_risk);
    out.sum_occluded_area += r.area_occluded;
    prev_v = r.v_ego;
    first = false;
  }
  (void)prev_v;
  return out;
}

}  // namespace umbra
