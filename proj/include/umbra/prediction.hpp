#pragma once

#include <cmath>
#include <vector>

#include "umbra/geometry.hpp"

namespace umbra {

enum class AgentClass { kPedestrian, kCyclist, kVehicle };

const char* to_string(AgentClass cls);

/// Symmetric 2x2 matrix (position covariance, m^2).
struct Mat2 {
  double xx{0.0};
  double xy{0.0};
  double yy{0.0};

  static Mat2 isotropic(double v) { return {v, 0.0, v}; }

  double trace() const { return xx + yy; }
  double det() const { return xx * yy - xy * xy; }
  double min_eigenvalue() const {
    const double mean = 0.5 * (xx + yy);
    const double r = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
    return mean - r;
  }
  bool psd(double tol = 1e-12) const { return min_eigenvalue() >= -tol; }

  Mat2 plus_isotropic(double v) const { return {xx + v, xy, yy + v}; }
  /// R * M * R^T for a rotation by angle.
  Mat2 rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    const double axx = c * xx - s * xy, axy = c * xy - s * yy;
    const double bxx = s * xx + c * xy, bxy = s * xy + c * yy;
    return {c * axx - s * axy, c * bxx - s * bxy, s * bxx + c * bxy};
  }
};

/// One horizon step of a predicted agent position.
struct PredictionPoint {
  double t{0.0};  // absolute simulation time [s]
  Vec2 mean;
  Mat2 cov;
  double speed{0.0};  // agent speed at this step [m/s]
};

/// Uniform view on tracked-object and phantom predictions consumed by the
/// risk assessment.
struct AgentPrediction {
  AgentClass cls{AgentClass::kVehicle};
  int source_id{-1};
  std::vector<PredictionPoint> points;
};

}  // namespace umbra
