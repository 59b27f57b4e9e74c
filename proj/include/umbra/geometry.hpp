#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "umbra/errors.hpp"

namespace umbra {

/// Slivers below this area [m^2] are dropped by the boolean ops.
inline constexpr double kAreaEps = 1e-6;
/// Coordinates are snapped to this grid [m] before boolean ops.
inline constexpr double kSnapGrid = 1e-9;
/// Default arc discretization of the sensor disc.
inline constexpr int kDefaultArcSegments = 360;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double squared_norm() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }

  Vec2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{};
  }
  /// Rotation by angle [rad] about the origin.
  Vec2 rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
  double angle() const { return std::atan2(y, x); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

double distance(const Vec2& a, const Vec2& b);

/// Simple polygon, counter-clockwise, strictly positive area.
class Polygon {
 public:
  /// Validates the invariants; clockwise input is reversed to ccw.
  /// Throws InvalidGeometry on < 3 distinct vertices, non-finite
  /// coordinates, self-intersection, or zero area.
  explicit Polygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double area() const { return area_; }
  Vec2 centroid() const;

  /// Boundary-inclusive point test.
  bool contains(const Vec2& p) const;
  /// Interior point test (boundary excluded).
  bool contains_strictly(const Vec2& p) const;

  bool is_convex() const;

  Polygon translated(const Vec2& offset) const;
  Polygon rotated(double angle, const Vec2& pivot = {}) const;

  /// Construction without invariant checks, for outputs of the boolean
  /// kernel whose validity is already established.
  static Polygon unchecked(std::vector<Vec2> vertices);

 private:
  struct UncheckedTag {};
  Polygon(std::vector<Vec2> vertices, UncheckedTag);

  std::vector<Vec2> vertices_;
  double area_{0.0};
};

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
Polygon make_rect(double x0, double y0, double x1, double y1);
/// Rectangle of the given length (along heading) and width, centered at c.
Polygon oriented_rect(const Vec2& center, double length, double width, double heading);

/// Set of pairwise interior-disjoint simple polygons.
class RegionSet {
 public:
  RegionSet() = default;

  /// Unions the inputs, so overlapping members are merged.
  static RegionSet from_polygons(std::vector<Polygon> polygons);
  /// Trusts the inputs to be disjoint already.
  static RegionSet from_disjoint(std::vector<Polygon> polygons);

  const std::vector<Polygon>& polygons() const { return polygons_; }
  bool empty() const { return polygons_.empty(); }
  double area() const;
  bool contains(const Vec2& p) const;

  RegionSet translated(const Vec2& offset) const;

 private:
  std::vector<Polygon> polygons_;
};

enum class BoolOp { kUnion, kIntersection, kDifference };

RegionSet boolean_op(const RegionSet& a, const RegionSet& b, BoolOp op);
RegionSet region_union(const RegionSet& a, const RegionSet& b);
RegionSet region_intersection(const RegionSet& a, const RegionSet& b);
RegionSet region_difference(const RegionSet& a, const RegionSet& b);

/// Euclidean distance between a region and a polygon; 0 when they touch
/// or overlap.
double region_distance(const RegionSet& region, const Polygon& poly);

/// Regular n_arc-gon inscribed in the disc of the given range around origin.
/// Throws InvalidGeometry for range <= 0 or n_arc < 16.
RegionSet sensor_disc(const Vec2& origin, double range, int n_arc = kDefaultArcSegments);

/// Umbra of an obstacle seen from origin, clipped to the sensor disc. The
/// obstacle occludes itself, so the returned region covers the obstacle's
/// in-range part. Empty if the obstacle lies outside the disc. Throws
/// InvalidGeometry if origin is not strictly outside the obstacle.
RegionSet obstacle_shadow(const Vec2& origin, const Polygon& obstacle, double range,
                          int n_arc = kDefaultArcSegments);

/// Sensor-visible part of the road: (disc ∩ road_area) minus all obstacle
/// shadows.
RegionSet visible_region(const Vec2& origin, double range, const RegionSet& road_area,
                         std::span<const Polygon> obstacles,
                         int n_arc = kDefaultArcSegments);

/// Ear-clipping triangulation of a simple polygon.
std::vector<Polygon> triangulate(const Polygon& poly);

}  // namespace umbra
