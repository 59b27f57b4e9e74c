#pragma once

#include <string>
#include <vector>

namespace umbra {

/// One simulation step. Column order in the CSV matches the field order.
struct StepRecord {
  double t{0.0};
  double s_ego{0.0};
  double v_ego{0.0};
  double a_ego{0.0};  // finite difference of v_ego
  double max_risk{0.0};
  double area_occluded{0.0};
  double selected_cost{0.0};
  bool exceedance{false};
};

struct RunResult {
  std::vector<StepRecord> steps;
  bool collision{false};
  double collision_t{-1.0};
  double min_velocity{0.0};
  double max_abs_accel{0.0};
  double max_risk{0.0};
  double sum_occluded_area{0.0};
};

/// CSV with the fixed header
/// t,s_ego,v_ego,a_ego,max_risk,area_occluded,selected_cost,exceedance.
std::string metrics_to_csv(const RunResult& result);
void write_metrics_csv(const RunResult& result, const std::string& path);
RunResult metrics_from_csv(const std::string& text);

}  // namespace umbra
