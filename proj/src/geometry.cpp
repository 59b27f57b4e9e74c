#include "umbra/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "boost_geom.hpp"

namespace umbra {

namespace {

double signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    a += p.cross(q);
  }
  return 0.5 * a;
}

bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b, double tol = 1e-9) {
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  const double len2 = ab.squared_norm();
  if (len2 == 0.0) {
    return distance(p, a) <= tol;
  }
  const double t = std::clamp(ap.dot(ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t) <= tol;
}

// Boundary handling selected by `strict`: strict excludes the boundary.
bool point_in_ring(const Vec2& p, const std::vector<Vec2>& v, bool strict) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (on_segment(p, v[i], v[(i + 1) % v.size()])) {
      return !strict;
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

std::vector<Vec2> dedupe_consecutive(std::vector<Vec2> v) {
  std::vector<Vec2> out;
  out.reserve(v.size());
  for (const Vec2& p : v) {
    if (out.empty() || distance(out.back(), p) > kSnapGrid / 2) {
      out.push_back(p);
    }
  }
  while (out.size() > 1 && distance(out.front(), out.back()) <= kSnapGrid / 2) {
    out.pop_back();
  }
  return out;
}

}  // namespace

double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

Polygon::Polygon(std::vector<Vec2> vertices) {
  for (const Vec2& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidGeometry("polygon vertex is not finite");
    }
  }
  vertices_ = dedupe_consecutive(std::move(vertices));
  if (vertices_.size() < 3) {
    throw InvalidGeometry("polygon needs at least 3 distinct vertices");
  }
  area_ = signed_area(vertices_);
  if (area_ < 0.0) {
    std::reverse(vertices_.begin(), vertices_.end());
    area_ = -area_;
  }
  if (area_ <= 0.0) {
    throw InvalidGeometry("polygon area is not strictly positive");
  }
  bgx::BPoly bp = bgx::to_bpoly(*this);
  std::string reason;
  if (!boost::geometry::is_valid(bp, reason)) {
    throw InvalidGeometry("polygon is not simple: " + reason);
  }
}

Polygon::Polygon(std::vector<Vec2> vertices, UncheckedTag) : vertices_(std::move(vertices)) {
  area_ = signed_area(vertices_);
  if (area_ < 0.0) {
    std::reverse(vertices_.begin(), vertices_.end());
    area_ = -area_;
  }
}

Polygon Polygon::unchecked(std::vector<Vec2> vertices) {
  return Polygon(std::move(vertices), UncheckedTag{});
}

Vec2 Polygon::centroid() const {
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec2& p = vertices_[i];
    const Vec2& q = vertices_[(i + 1) % vertices_.size()];
    const double w = p.cross(q);
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  const double denom = 6.0 * area_;
  return {cx / denom, cy / denom};
}

bool Polygon::contains(const Vec2& p) const { return point_in_ring(p, vertices_, false); }

bool Polygon::contains_strictly(const Vec2& p) const { return point_in_ring(p, vertices_, true); }

bool Polygon::is_convex() const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    const Vec2& c = vertices_[(i + 2) % n];
    if ((b - a).cross(c - b) < -1e-12) {
      return false;
    }
  }
  return true;
}

Polygon Polygon::translated(const Vec2& offset) const {
  std::vector<Vec2> v = vertices_;
  for (Vec2& p : v) {
    p = p + offset;
  }
  return Polygon::unchecked(std::move(v));
}

Polygon Polygon::rotated(double angle, const Vec2& pivot) const {
  std::vector<Vec2> v = vertices_;
  for (Vec2& p : v) {
    p = pivot + (p - pivot).rotated(angle);
  }
  return Polygon::unchecked(std::move(v));
}

Polygon make_rect(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Polygon oriented_rect(const Vec2& center, double length, double width, double heading) {
  const Vec2 fwd = Vec2{1.0, 0.0}.rotated(heading) * (length / 2.0);
  const Vec2 left = Vec2{0.0, 1.0}.rotated(heading) * (width / 2.0);
  return Polygon::unchecked(
      {center - fwd - left, center + fwd - left, center + fwd + left, center - fwd + left});
}

RegionSet RegionSet::from_polygons(std::vector<Polygon> polygons) {
  if (polygons.empty()) {
    return {};
  }
  bgx::BMulti acc;
  for (const Polygon& p : polygons) {
    bgx::BMulti next;
    boost::geometry::union_(acc, bgx::to_bpoly(p), next);
    acc = std::move(next);
  }
  return bgx::from_multi(acc);
}

RegionSet RegionSet::from_disjoint(std::vector<Polygon> polygons) {
  RegionSet r;
  r.polygons_ = std::move(polygons);
  return r;
}

double RegionSet::area() const {
  double a = 0.0;
  for (const Polygon& p : polygons_) {
    a += p.area();
  }
  return a;
}

bool RegionSet::contains(const Vec2& p) const {
  for (const Polygon& poly : polygons_) {
    if (poly.contains(p)) {
      return true;
    }
  }
  return false;
}

RegionSet RegionSet::translated(const Vec2& offset) const {
  std::vector<Polygon> out;
  out.reserve(polygons_.size());
  for (const Polygon& p : polygons_) {
    out.push_back(p.translated(offset));
  }
  return from_disjoint(std::move(out));
}

RegionSet boolean_op(const RegionSet& a, const RegionSet& b, BoolOp op) {
  const bgx::BMulti ma = bgx::to_multi(a);
  const bgx::BMulti mb = bgx::to_multi(b);
  bgx::BMulti out;
  switch (op) {
    case BoolOp::kUnion:
      boost::geometry::union_(ma, mb, out);
      break;
    case BoolOp::kIntersection:
      boost::geometry::intersection(ma, mb, out);
      break;
    case BoolOp::kDifference:
      boost::geometry::difference(ma, mb, out);
      break;
  }
  return bgx::from_multi(out);
}

RegionSet region_union(const RegionSet& a, const RegionSet& b) {
  return boolean_op(a, b, BoolOp::kUnion);
}
RegionSet region_intersection(const RegionSet& a, const RegionSet& b) {
  return boolean_op(a, b, BoolOp::kIntersection);
}
RegionSet region_difference(const RegionSet& a, const RegionSet& b) {
  return boolean_op(a, b, BoolOp::kDifference);
}

double region_distance(const RegionSet& region, const Polygon& poly) {
  if (region.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  const bgx::BPoly bp = bgx::to_bpoly(poly);
  double best = std::numeric_limits<double>::infinity();
  for (const Polygon& p : region.polygons()) {
    best = std::min(best, boost::geometry::distance(bgx::to_bpoly(p), bp));
    if (best == 0.0) {
      break;
    }
  }
  return best;
}

RegionSet sensor_disc(const Vec2& origin, double range, int n_arc) {
  if (!(range > 0.0)) {
    throw InvalidGeometry("sensor range must be positive");
  }
  if (n_arc < 16) {
    throw InvalidGeometry("sensor disc needs at least 16 arc segments");
  }
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>(n_arc));
  for (int k = 0; k < n_arc; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n_arc;
    v.push_back(origin + Vec2{range * std::cos(th), range * std::sin(th)});
  }
  return RegionSet::from_disjoint({Polygon::unchecked(std::move(v))});
}

namespace {

// Silhouette of a convex occluder seen from an outside origin: the two
// vertices of extreme bearing plus the chain between them facing the origin.
struct Silhouette {
  std::size_t left;   // max bearing
  std::size_t right;  // min bearing
};

Silhouette find_silhouette(const Vec2& origin, const std::vector<Vec2>& v, const Vec2& ref_dir) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  Silhouette s{0, 0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 d = v[i] - origin;
    const double bearing = std::atan2(ref_dir.cross(d), ref_dir.dot(d));
    if (bearing < lo) {
      lo = bearing;
      s.right = i;
    }
    if (bearing > hi) {
      hi = bearing;
      s.left = i;
    }
  }
  return s;
}

// Umbra of a convex part, including the part itself, out to far_radius.
// Bounded by the near chain, the two silhouette rays and a far arc.
bgx::BPoly convex_part_shadow(const Vec2& origin, const std::vector<Vec2>& v, double far_radius,
                              int n_arc) {
  const Vec2 ref_dir = (Polygon::unchecked(std::vector<Vec2>(v)).centroid() - origin).normalized();
  const Silhouette sil = find_silhouette(origin, v, ref_dir);

  std::vector<Vec2> pts;
  // Near chain: ccw walk from the left silhouette vertex to the right one.
  for (std::size_t i = sil.left;; i = (i + 1) % v.size()) {
    pts.push_back(v[i]);
    if (i == sil.right) {
      break;
    }
  }
  const double th_right = (v[sil.right] - origin).angle();
  const double th_left_rel =
      std::atan2((v[sil.right] - origin).cross(v[sil.left] - origin),
                 (v[sil.right] - origin).dot(v[sil.left] - origin));
  const double extent = th_left_rel < 0 ? th_left_rel + 2 * std::numbers::pi : th_left_rel;
  if (extent >= std::numbers::pi - 1e-9) {
    throw InvalidGeometry("occluder subtends >= pi from the sensor origin");
  }
  pts.push_back(origin + Vec2{std::cos(th_right), std::sin(th_right)} * far_radius);
  const double step = 2.0 * std::numbers::pi / n_arc;
  for (double th = th_right + step; th < th_right + extent; th += step) {
    pts.push_back(origin + Vec2{std::cos(th), std::sin(th)} * far_radius);
  }
  pts.push_back(origin + Vec2{std::cos(th_right + extent), std::sin(th_right + extent)} * far_radius);

  bgx::BPoly poly;
  for (const Vec2& p : pts) {
    boost::geometry::append(poly.outer(), bgx::BPoint{p.x, p.y});
  }
  boost::geometry::correct(poly);
  return poly;
}

bgx::BMulti shadow_multi(const Vec2& origin, const Polygon& obstacle, double range, int n_arc) {
  if (obstacle.contains(origin)) {
    throw InvalidGeometry("sensor origin lies on or inside an obstacle");
  }
  double far_radius = range;
  for (const Vec2& p : obstacle.vertices()) {
    far_radius = std::max(far_radius, distance(p, origin));
  }
  far_radius = far_radius * 1.5 + 1.0;

  std::vector<std::vector<Vec2>> parts;
  if (obstacle.is_convex()) {
    parts.push_back(obstacle.vertices());
  } else {
    for (const Polygon& tri : triangulate(obstacle)) {
      parts.push_back(tri.vertices());
    }
  }
  bgx::BMulti acc;
  acc.push_back(bgx::to_bpoly(obstacle));
  for (const auto& part : parts) {
    const bgx::BPoly ps = convex_part_shadow(origin, part, far_radius, n_arc);
    bgx::BMulti next;
    boost::geometry::union_(acc, ps, next);
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

RegionSet obstacle_shadow(const Vec2& origin, const Polygon& obstacle, double range, int n_arc) {
  const bgx::BMulti shadow = shadow_multi(origin, obstacle, range, n_arc);
  const bgx::BMulti disc = bgx::to_multi(sensor_disc(origin, range, n_arc));
  bgx::BMulti clipped;
  boost::geometry::intersection(shadow, disc, clipped);
  return bgx::from_multi(clipped);
}

RegionSet visible_region(const Vec2& origin, double range, const RegionSet& road_area,
                         std::span<const Polygon> obstacles, int n_arc) {
  const bgx::BMulti disc = bgx::to_multi(sensor_disc(origin, range, n_arc));
  bgx::BMulti base;
  boost::geometry::intersection(disc, bgx::to_multi(road_area), base);
  if (base.empty()) {
    return {};
  }
  bgx::BMulti shadows;
  const bgx::BPoint bo{origin.x, origin.y};
  for (const Polygon& obst : obstacles) {
    if (obst.contains(origin)) {
      throw InvalidGeometry("sensor origin lies on or inside an obstacle");
    }
    if (boost::geometry::distance(bo, bgx::to_bpoly(obst)) > range) {
      continue;
    }
    bgx::BMulti next;
    boost::geometry::union_(shadows, shadow_multi(origin, obst, range, n_arc), next);
    shadows = std::move(next);
  }
  bgx::BMulti out;
  boost::geometry::difference(base, shadows, out);
  return bgx::from_multi(out);
}

std::vector<Polygon> triangulate(const Polygon& poly) {
  std::vector<Vec2> v = poly.vertices();
  std::vector<Polygon> tris;
  tris.reserve(v.size() - 2);

  auto is_ear = [&v](std::size_t i) {
    const std::size_t n = v.size();
    const Vec2& a = v[(i + n - 1) % n];
    const Vec2& b = v[i];
    const Vec2& c = v[(i + 1) % n];
    const double cr = (b - a).cross(c - b);
    if (cr <= 1e-12) {
      return false;  // reflex or degenerate corner
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) {
        continue;
      }
      const Vec2& p = v[j];
      const bool inside = (b - a).cross(p - a) >= -1e-12 && (c - b).cross(p - b) >= -1e-12 &&
                          (a - c).cross(p - c) >= -1e-12;
      if (inside) {
        return false;
      }
    }
    return true;
  };

  std::size_t guard = 0;
  while (v.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (is_ear(i)) {
        const std::size_t n = v.size();
        const Vec2 a = v[(i + n - 1) % n];
        const Vec2 b = v[i];
        const Vec2 c = v[(i + 1) % n];
        if (std::abs((b - a).cross(c - a)) > 1e-12) {
          tris.push_back(Polygon::unchecked({a, b, c}));
        }
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
    }
    if (!clipped) {
      // Collinear runs can block every ear test; drop the flattest corner.
      std::size_t flattest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t n = v.size();
        const double cr =
            std::abs((v[i] - v[(i + n - 1) % n]).cross(v[(i + 1) % n] - v[i]));
        if (cr < best) {
          best = cr;
          flattest = i;
        }
      }
      if (best > 1e-9) {
        throw InvalidGeometry("triangulation failed on a non-simple polygon");
      }
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(flattest));
    }
    if (++guard > 10000) {
      throw InvalidGeometry("triangulation did not terminate");
    }
  }
  if (v.size() == 3 && std::abs((v[1] - v[0]).cross(v[2] - v[0])) > 1e-12) {
    tris.push_back(Polygon::unchecked({v[0], v[1], v[2]}));
  }
  return tris;
}

}  // namespace umbra

namespace umbra::bgx {

BPoly to_bpoly(const Polygon& p) {
  BPoly out;
  for (const Vec2& v : p.vertices()) {
    boost::geometry::append(out.outer(), BPoint{v.x, v.y});
  }
  boost::geometry::correct(out);
  return out;
}

BMulti to_multi(const RegionSet& r) {
  BMulti out;
  out.reserve(r.polygons().size());
  for (const Polygon& p : r.polygons()) {
    out.push_back(to_bpoly(p));
  }
  return out;
}

namespace {

std::vector<Vec2> ring_to_vec(const BRing& ring) {
  std::vector<Vec2> v;
  v.reserve(ring.size());
  for (const BPoint& p : ring) {
    v.push_back({snap(p.x()), snap(p.y())});
  }
  if (!v.empty()) {
    v.pop_back();  // drop the closing point
  }
  return v;
}

// Splits a polygon with holes into hole-free pieces by cutting vertically
// through each hole.
void split_holes(const BPoly& poly, std::vector<BPoly>& out, int depth = 0) {
  if (poly.inners().empty() || depth > 64) {
    out.push_back(poly);
    return;
  }
  const BRing& hole = poly.inners().front();
  boost::geometry::model::box<BPoint> hole_box;
  boost::geometry::envelope(hole, hole_box);
  const double cut_x = 0.5 * (hole_box.min_corner().x() + hole_box.max_corner().x());

  boost::geometry::model::box<BPoint> box;
  boost::geometry::envelope(poly, box);
  const double pad = 1.0;
  const double x0 = box.min_corner().x() - pad;
  const double x1 = box.max_corner().x() + pad;
  const double y0 = box.min_corner().y() - pad;
  const double y1 = box.max_corner().y() + pad;

  for (const auto& [lo, hi] : {std::pair{x0, cut_x}, std::pair{cut_x, x1}}) {
    BPoly half;
    boost::geometry::append(half.outer(), BPoint{lo, y0});
    boost::geometry::append(half.outer(), BPoint{hi, y0});
    boost::geometry::append(half.outer(), BPoint{hi, y1});
    boost::geometry::append(half.outer(), BPoint{lo, y1});
    boost::geometry::correct(half);
    BMulti piece;
    boost::geometry::intersection(poly, half, piece);
    for (const BPoly& p : piece) {
      split_holes(p, out, depth + 1);
    }
  }
}

}  // namespace

RegionSet from_multi(const BMulti& m) {
  std::vector<BPoly> flat;
  for (const BPoly& poly : m) {
    if (std::abs(boost::geometry::area(poly)) < kAreaEps) {
      continue;
    }
    BPoly kept;
    kept.outer() = poly.outer();
    for (const BRing& hole : poly.inners()) {
      if (std::abs(boost::geometry::area(hole)) >= kAreaEps) {
        kept.inners().push_back(hole);
      }
    }
    split_holes(kept, flat);
  }
  std::vector<Polygon> polys;
  polys.reserve(flat.size());
  for (const BPoly& poly : flat) {
    std::vector<Vec2> v = ring_to_vec(poly.outer());
    if (v.size() < 3) {
      continue;
    }
    Polygon p = Polygon::unchecked(std::move(v));
    if (p.area() >= kAreaEps) {
      polys.push_back(std::move(p));
    }
  }
  return RegionSet::from_disjoint(std::move(polys));
}

}  // namespace umbra::bgx
