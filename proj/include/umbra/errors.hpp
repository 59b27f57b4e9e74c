#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace umbra {

/// Geometric input violates an invariant (self-intersecting polygon,
/// origin inside an occluder, ...).
class InvalidGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario failed validation. Carries one message per violated invariant.
class InvalidScenario : public std::runtime_error {
 public:
  explicit InvalidScenario(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "scenario validation failed:";
    for (const auto& s : v) {
      out += "\n  - " + s;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// The trajectory sampler produced no feasible candidate.
class PlannerFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace umbra
