#pragma once

// Independent reference computations used by the tests. These stay
// deliberately naive (brute force, sampling) and must not call into the
// code paths they check.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "umbra/geometry.hpp"
#include "umbra/road.hpp"

namespace oracles {

using umbra::Polygon;
using umbra::RegionSet;
using umbra::Vec2;

inline bool point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b, double tol = 1e-9) {
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  if (len2 == 0.0) {
    return umbra::distance(p, a) <= tol;
  }
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return umbra::distance(p, a + ab * t) <= tol;
}

inline bool point_strictly_inside(const Vec2& p, const Polygon& poly) {
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (point_on_segment(p, v[i], v[(i + 1) % v.size()])) {
      return false;
    }
  }
  bool inside = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

// Parameters t in (0,1) where the segment a->b crosses polygon edges.
inline std::vector<double> segment_polygon_crossings(const Vec2& a, const Vec2& b,
                                                     const Polygon& poly) {
  std::vector<double> ts;
  const auto& v = poly.vertices();
  const Vec2 r = b - a;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& c = v[i];
    const Vec2& d = v[(i + 1) % v.size()];
    const Vec2 s = d - c;
    const double denom = r.cross(s);
    if (std::abs(denom) < 1e-15) {
      continue;
    }
    const double t = (c - a).cross(s) / denom;
    const double u = (c - a).cross(r) / denom;
    if (t > 1e-12 && t < 1.0 - 1e-12 && u > -1e-12 && u < 1.0 + 1e-12) {
      ts.push_back(t);
    }
  }
  return ts;
}

// True when the open segment a->b passes through the interior of the polygon
// for a length above tol.
inline bool segment_blocked(const Vec2& a, const Vec2& b, const Polygon& poly,
                            double tol = 1e-9) {
  std::vector<double> ts = segment_polygon_crossings(a, b, poly);
  ts.push_back(0.0);
  ts.push_back(1.0);
  std::sort(ts.begin(), ts.end());
  const double seg_len = umbra::distance(a, b);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if ((ts[i + 1] - ts[i]) * seg_len <= tol) {
      continue;
    }
    const double tm = 0.5 * (ts[i] + ts[i + 1]);
    if (point_strictly_inside(a + (b - a) * tm, poly)) {
      return true;
    }
  }
  return false;
}

inline bool line_of_sight(const Vec2& from, const Vec2& to,
                          const std::vector<Polygon>& obstacles) {
  for (const Polygon& o : obstacles) {
    if (segment_blocked(from, to, o)) {
      return false;
    }
  }
  return true;
}

struct GridAgreement {
  std::size_t checked{0};
  std::size_t agreeing{0};
  double ratio() const { return checked == 0 ? 1.0 : double(agreeing) / double(checked); }
};

// Compares a computed visible region against per-cell line-of-sight over a
// grid restricted to the road area. Cells whose 3x3 neighborhood is not
// uniform (in either answer) count as boundary cells and are skipped.
inline GridAgreement grid_visibility_agreement(const Vec2& origin, double range,
                                               const RegionSet& road,
                                               const std::vector<Polygon>& obstacles,
                                               const RegionSet& computed, double cell = 0.05) {
  double x0 = 1e18, y0 = 1e18, x1 = -1e18, y1 = -1e18;
  for (const Polygon& p : road.polygons()) {
    for (const Vec2& v : p.vertices()) {
      x0 = std::min(x0, v.x);
      x1 = std::max(x1, v.x);
      y0 = std::min(y0, v.y);
      y1 = std::max(y1, v.y);
    }
  }
  const int nx = static_cast<int>((x1 - x0) / cell) + 1;
  const int ny = static_cast<int>((y1 - y0) / cell) + 1;

  // -1 = off-road, 0/1 = oracle/computed visibility packed as bits.
  std::vector<signed char> oracle(static_cast<std::size_t>(nx) * ny, -1);
  std::vector<signed char> approx(static_cast<std::size_t>(nx) * ny, -1);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Vec2 p{x0 + (ix + 0.5) * cell, y0 + (iy + 0.5) * cell};
      if (!road.contains(p)) {
        continue;
      }
      const std::size_t idx = static_cast<std::size_t>(iy) * nx + ix;
      const bool in_range = umbra::distance(p, origin) <= range;
      oracle[idx] = (in_range && line_of_sight(origin, p, obstacles)) ? 1 : 0;
      approx[idx] = computed.contains(p) ? 1 : 0;
    }
  }

  GridAgreement agg;
  for (int iy = 1; iy + 1 < ny; ++iy) {
    for (int ix = 1; ix + 1 < nx; ++ix) {
      const std::size_t idx = static_cast<std::size_t>(iy) * nx + ix;
      if (oracle[idx] < 0) {
        continue;
      }
      bool boundary = false;
      for (int dy = -1; dy <= 1 && !boundary; ++dy) {
        for (int dx = -1; dx <= 1 && !boundary; ++dx) {
          const std::size_t n = static_cast<std::size_t>(iy + dy) * nx + (ix + dx);
          if (oracle[n] < 0 || oracle[n] != oracle[idx] || approx[n] != approx[idx]) {
            boundary = true;
          }
        }
      }
      if (boundary) {
        continue;
      }
      ++agg.checked;
      if (oracle[idx] == approx[idx]) {
        ++agg.agreeing;
      }
    }
  }
  return agg;
}

// Monte-Carlo mass of N(mean, cov) over an oriented rectangle.
inline double mc_collision_probability(const Vec2& center, double heading, double length,
                                       double width, const Vec2& mean, double cxx, double cxy,
                                       double cyy, std::size_t samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  // Cholesky factor of the covariance.
  const double l11 = std::sqrt(cxx);
  const double l21 = cxy / l11;
  const double l22 = std::sqrt(std::max(0.0, cyy - l21 * l21));
  const double hx = length / 2, hy = width / 2;
  const double c = std::cos(-heading), s = std::sin(-heading);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double z1 = n01(rng), z2 = n01(rng);
    const double px = mean.x + l11 * z1;
    const double py = mean.y + l21 * z1 + l22 * z2;
    const double rx = c * (px - center.x) - s * (py - center.y);
    const double ry = s * (px - center.x) + c * (py - center.y);
    if (std::abs(rx) <= hx && std::abs(ry) <= hy) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

// Nearest-segment scan written independently of ReferencePath::project.
inline umbra::FrenetCoord frenet_by_scan(const Vec2& p, const std::vector<Vec2>& pts) {
  double best = 1e300;
  umbra::FrenetCoord out;
  double s_acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[i + 1];
    const double seg = umbra::distance(a, b);
    const double t = seg > 0 ? std::clamp((p - a).dot(b - a) / (seg * seg), 0.0, 1.0) : 0.0;
    const Vec2 q = a + (b - a) * t;
    const double d2 = (p - q).squared_norm();
    if (d2 < best - 1e-18) {
      best = d2;
      out.s = s_acc + t * seg;
      out.d = (b - a).normalized().cross(p - q);
    }
    s_acc += seg;
  }
  return out;
}

}  // namespace oracles
