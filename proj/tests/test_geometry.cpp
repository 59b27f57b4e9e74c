#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "umbra/geometry.hpp"

using namespace umbra;

namespace {

RegionSet rect_region(double x0, double y0, double x1, double y1) {
  return RegionSet::from_disjoint({make_rect(x0, y0, x1, y1)});
}

}  // namespace

TEST_CASE("polygon invariants") {
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), InvalidGeometry);
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {2, 0}}), InvalidGeometry);  // zero area
  // Bowtie self-intersects.
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), InvalidGeometry);
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, std::nan("")}, {1, 1}}), InvalidGeometry);

  // Clockwise input is normalized to ccw with the same area.
  const Polygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(cw.area() == doctest::Approx(1.0));
  double cross_sum = 0.0;
  const auto& v = cw.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    cross_sum += v[i].cross(v[(i + 1) % v.size()]);
  }
  CHECK(cross_sum > 0.0);
}

TEST_CASE("region area basics") {
  CHECK(rect_region(0, 0, 1, 1).area() == doctest::Approx(1.0));
  CHECK(RegionSet{}.area() == 0.0);

  const RegionSet holed =
      region_difference(rect_region(0, 0, 10, 10), rect_region(2, 2, 4, 4));
  CHECK(holed.area() == doctest::Approx(96.0).epsilon(1e-9));
  // Hole-free representation: each member polygon is simple, interiors disjoint.
  CHECK(holed.polygons().size() >= 2);
  CHECK_FALSE(holed.contains({3, 3}));
  CHECK(holed.contains({1, 1}));
  CHECK(holed.contains({9, 9}));
}

TEST_CASE("boolean algebra") {
  const RegionSet a = rect_region(0, 0, 2, 2);
  const RegionSet b = rect_region(1, 0, 3, 2);

  CHECK(region_intersection(a, a).area() == doctest::Approx(a.area()));
  CHECK(region_difference(a, a).empty());
  CHECK(region_union(a, b).area() == doctest::Approx(6.0));

  SUBCASE("inclusion-exclusion on random boxes") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_real_distribution<double> w(0.5, 8.0);
    for (int i = 0; i < 50; ++i) {
      const double ax = u(rng), ay = u(rng), bx = u(rng), by = u(rng);
      const RegionSet ra = rect_region(ax, ay, ax + w(rng), ay + w(rng));
      const RegionSet rb = rect_region(bx, by, bx + w(rng), by + w(rng));
      const double lhs = region_union(ra, rb).area();
      const double rhs = ra.area() + rb.area() - region_intersection(ra, rb).area();
      CHECK(std::abs(lhs - rhs) <= kAreaEps);
    }
  }

  SUBCASE("difference is antitone in the subtrahend") {
    const RegionSet small = rect_region(0.5, 0.5, 1.5, 1.5);
    const RegionSet big = rect_region(0.25, 0.25, 1.75, 1.75);
    CHECK(region_difference(a, big).area() <= region_difference(a, small).area() + 1e-9);
  }
}

TEST_CASE("sensor disc") {
  const RegionSet d360 = sensor_disc({0, 0}, 10.0, 360);
  CHECK(d360.area() == doctest::Approx(std::numbers::pi * 100.0).epsilon(0.001));
  CHECK(d360.area() <= std::numbers::pi * 100.0);

  CHECK(sensor_disc({0, 0}, 10.0, 16).area() ==
        doctest::Approx(0.5 * 16 * 100.0 * std::sin(2 * std::numbers::pi / 16)));

  SUBCASE("inscribed square via 4 segments is rejected below 16") {
    CHECK_THROWS_AS(sensor_disc({0, 0}, 10.0, 4), InvalidGeometry);
  }
  CHECK_THROWS_AS(sensor_disc({0, 0}, 0.0), InvalidGeometry);
  CHECK_THROWS_AS(sensor_disc({0, 0}, -3.0), InvalidGeometry);

  SUBCASE("translation equivariance") {
    const RegionSet at_origin = sensor_disc({0, 0}, 10.0, 64);
    const RegionSet shifted = sensor_disc({5, 5}, 10.0, 64);
    const auto& va = at_origin.polygons()[0].vertices();
    const auto& vb = shifted.polygons()[0].vertices();
    REQUIRE(va.size() == vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
      CHECK(vb[i].x == doctest::Approx(va[i].x + 5.0).epsilon(1e-12));
      CHECK(vb[i].y == doctest::Approx(va[i].y + 5.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("obstacle shadow") {
  const Polygon box = make_rect(2, -0.5, 3, 0.5);

  SUBCASE("umbra membership cross-checked by ray casting") {
    const RegionSet shadow = obstacle_shadow({0, 0}, box, 10.0);
    CHECK(shadow.contains({5, 0}));
    CHECK_FALSE(shadow.contains({5, 3}));
    CHECK_FALSE(oracles::line_of_sight({0, 0}, {5, 0}, {box}));
    CHECK(oracles::line_of_sight({0, 0}, {5, 3}, {box}));
    // The obstacle occludes itself.
    CHECK(shadow.contains({2.5, 0}));
    // Nothing in front of the obstacle is shaded.
    CHECK_FALSE(shadow.contains({1.0, 0}));
  }

  SUBCASE("out-of-range occluder casts nothing") {
    const Polygon far_box = make_rect(20, -0.5, 21, 0.5);
    CHECK(obstacle_shadow({0, 0}, far_box, 10.0).empty());
  }

  SUBCASE("origin inside obstacle is an invalid sensing configuration") {
    CHECK_THROWS_AS(obstacle_shadow({2.5, 0}, box, 10.0), InvalidGeometry);
  }

  SUBCASE("joint rotation equivariance") {
    const double ang = std::numbers::pi / 2;
    const Vec2 origin{1.0, -2.0};
    const RegionSet s0 = obstacle_shadow(origin, box, 10.0);
    const RegionSet s1 = obstacle_shadow(origin.rotated(ang), box.rotated(ang), 10.0);
    CHECK(std::abs(s1.area() - s0.area()) <= kAreaEps);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 300; ++i) {
      const Vec2 p{u(rng), u(rng)};
      CHECK(s0.contains(p) == s1.contains(p.rotated(ang)));
    }
  }

  SUBCASE("concave occluder") {
    // L-shape opening away from the origin: the notch stays lit from inside
    // but everything behind the arms is dark.
    const Polygon ell({{4, -2}, {6, -2}, {6, 2}, {4, 2}, {4, 1}, {5, 1}, {5, -1}, {4, -1}});
    const RegionSet shadow = obstacle_shadow({0, 0}, ell, 20.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-15.0, 15.0);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
      const Vec2 p{u(rng), u(rng)};
      if (p.norm() > 19.0 || p.norm() < 0.5) {
        continue;
      }
      const auto occluded = [&](const Vec2& q) {
        return ell.contains(q) || !oracles::line_of_sight({0, 0}, q, {ell});
      };
      const bool blocked = occluded(p);
      // Skip points whose answer flips under a small angular or radial
      // perturbation; those sit on the shadow boundary.
      if (occluded(p.rotated(0.005)) != blocked || occluded(p.rotated(-0.005)) != blocked ||
          occluded(p * 1.01) != blocked || occluded(p * 0.99) != blocked) {
        continue;
      }
      ++checked;
      CHECK(shadow.contains(p) == blocked);
    }
    CHECK(checked > 500);
  }
}

TEST_CASE("visible region") {
  SUBCASE("unobstructed road within range") {
    const RegionSet road = rect_region(-5, -5, 5, 5);
    const RegionSet vis = visible_region({0, 0}, 20.0, road, {});
    CHECK(vis.area() == doctest::Approx(100.0).epsilon(1e-6));
  }

  SUBCASE("disc-limited case") {
    const RegionSet road = rect_region(-50, -50, 50, 50);
    const RegionSet vis = visible_region({0, 0}, 10.0, road, {}, 720);
    CHECK(vis.area() == doctest::Approx(std::numbers::pi * 100.0).epsilon(0.005));
  }

  SUBCASE("single occluder matches the grid oracle within 1%") {
    const RegionSet road = rect_region(0, -8, 30, 8);
    const std::vector<Polygon> obstacles = {make_rect(8, -2, 11, 2)};
    const Vec2 origin{1, 0};
    const RegionSet vis = visible_region(origin, 50.0, road, obstacles);

    const double cell = 0.05;
    double oracle_area = 0.0;
    for (double y = -8 + cell / 2; y < 8; y += cell) {
      for (double x = cell / 2; x < 30; x += cell) {
        const Vec2 p{x, y};
        if (umbra::distance(p, origin) <= 50.0 && oracles::line_of_sight(origin, p, obstacles)) {
          oracle_area += cell * cell;
        }
      }
    }
    CHECK(vis.area() == doctest::Approx(oracle_area).epsilon(0.01));
  }

  SUBCASE("monotone in range, antitone in obstacles") {
    const RegionSet road = rect_region(-30, -30, 30, 30);
    const std::vector<Polygon> one = {make_rect(5, -1, 7, 1)};
    const std::vector<Polygon> two = {make_rect(5, -1, 7, 1), make_rect(-9, 3, -6, 6)};
    const double a_small = visible_region({0, 0}, 15.0, road, one).area();
    const double a_big = visible_region({0, 0}, 25.0, road, one).area();
    CHECK(a_small <= a_big + 1e-9);
    const double with_two = visible_region({0, 0}, 25.0, road, two).area();
    CHECK(with_two <= a_big + 1e-9);
  }

  SUBCASE("random scenes agree with the line-of-sight oracle") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int scene = 0; scene < 4; ++scene) {
      const RegionSet road = rect_region(-12, -6, 12, 6);
      std::vector<Polygon> obstacles;
      const int n_obs = 1 + scene % 3;
      for (int i = 0; i < n_obs; ++i) {
        const double cx = -8 + 16 * u01(rng);
        const double cy = -4 + 8 * u01(rng);
        const double w = 1.5 + 2 * u01(rng), h = 1.5 + 2 * u01(rng);
        Polygon box = make_rect(cx, cy, cx + w, cy + h);
        if (box.contains({-10, 0})) {
          continue;
        }
        obstacles.push_back(box.rotated(u01(rng), box.centroid()));
      }
      bool origin_clear = true;
      for (const auto& o : obstacles) {
        if (o.contains({-10, 0})) {
          origin_clear = false;
        }
      }
      if (!origin_clear) {
        continue;
      }
      const RegionSet vis = visible_region({-10, 0}, 50.0, road, obstacles);
      const auto agg = oracles::grid_visibility_agreement({-10, 0}, 50.0, road, obstacles, vis, 0.1);
      CHECK(agg.ratio() >= 0.995);
    }
  }
}

TEST_CASE("triangulation covers the polygon") {
  const Polygon ell({{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 3}, {0, 3}});
  const auto tris = triangulate(ell);
  double total = 0.0;
  for (const auto& t : tris) {
    total += t.area();
  }
  CHECK(total == doctest::Approx(ell.area()).epsilon(1e-9));
}
