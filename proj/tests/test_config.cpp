#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "bigibbs/config.hpp"
#include "bigibbs/intensity.hpp"
#include "bigibbs/random.hpp"

using namespace bigibbs;

TEST_CASE("points reject non-finite coordinates", "[config]") {
  CHECK_THROWS_AS(Point({0.0, std::nan("")}), InvalidArgument);
  CHECK_THROWS_AS(Point({std::numeric_limits<double>::infinity()}), InvalidArgument);
  const Point p({0.25, 0.5});
  CHECK(p.dim() == 2);
  CHECK(p[1] == 0.5);
  CHECK(distance_squared(Point({0.0, 0.0}), Point({3.0, 4.0})) == 25.0);
}

TEST_CASE("windows require lower strictly below upper", "[config]") {
  CHECK_THROWS_AS(Window({0.0, 0.0}, {1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(Window({0.0}, {1.0, 1.0}), InvalidArgument);
  const Window w({0.0, 0.0}, {3.0, 2.0});
  CHECK(w.volume() == 6.0);
  CHECK(w.contains(Point({3.0, 2.0})));
  CHECK_FALSE(w.contains(Point({3.0000001, 1.0})));
  CHECK(w.contains(Window({1.0, 1.0}, {2.0, 2.0})));
  CHECK_FALSE(w.contains(Window({1.0, 1.0}, {4.0, 2.0})));
}

TEST_CASE("project keeps exactly the points in the closed box", "[config]") {
  const Window unit = Window::unit(2);
  const Configuration c{Point({0.2, 0.2}), Point({1.5, 0.5})};
  CHECK(project(c, unit) == Configuration{Point({0.2, 0.2})});
  CHECK(project(Configuration{}, unit).empty());

  const Configuration one{Point({0.3, 0.3})};
  CHECK(project(one, unit) == one);
  CHECK(project(project(one, unit), unit) == project(one, unit));

  const Configuration edge{Point({1.0, 0.0}), Point({0.0, 1.0})};
  CHECK(project(edge, unit).size() == 2);
}

TEST_CASE("project is idempotent on random configurations", "[config][property]") {
  RngState rng(11);
  const Window big({-1.0, -1.0}, {2.0, 2.0});
  const Window w({0.0, 0.25}, {1.0, 0.75});
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Point> pts;
    const auto n = rng.below(20);
    for (std::uint64_t i = 0; i < n; ++i) {
      pts.push_back(uniform_point(big, rng));
    }
    const Configuration c(pts);
    const Configuration once = project(c, w);
    CHECK(project(once, w) == once);
    for (const Point& p : once) {
      CHECK(w.contains(p));
    }
  }
}

TEST_CASE("union_disjoint appends and rejects duplicates", "[config]") {
  const Configuration c{Point({0.0, 0.0})};
  const Configuration u = union_disjoint(c, Point({1.0, 1.0}));
  CHECK(u == Configuration{Point({0.0, 0.0}), Point({1.0, 1.0})});
  CHECK(u.size() == c.size() + 1);
  CHECK(union_disjoint(Configuration{}, Point({0.5, 0.5})) == Configuration{Point({0.5, 0.5})});
  CHECK_THROWS_AS(union_disjoint(c, Point({0.0, 0.0})), DuplicatePoint);
  CHECK_THROWS_AS((Configuration{Point({0.1, 0.1}), Point({0.1, 0.1})}), DuplicatePoint);
}

TEST_CASE("configuration equality ignores insertion order", "[config]") {
  const Configuration a{Point({0.1, 0.2}), Point({0.3, 0.4})};
  const Configuration b{Point({0.3, 0.4}), Point({0.1, 0.2})};
  CHECK(a == b);
  CHECK(a[0] == b[1]);
  CHECK_FALSE(a == Configuration{Point({0.1, 0.2})});
}

TEST_CASE("remove_at moves the last point into the hole", "[config]") {
  Configuration c{Point({0.1}), Point({0.2}), Point({0.3})};
  const Point removed = c.remove_at(0);
  CHECK(removed == Point({0.1}));
  CHECK(c.size() == 2);
  CHECK(c[0] == Point({0.3}));
}

TEST_CASE("check_disjoint compares species by exact coordinates", "[config]") {
  CHECK(check_disjoint({Configuration{Point({0.0, 0.0})}, Configuration{Point({1.0, 1.0})}}));
  CHECK_FALSE(check_disjoint({Configuration{Point({0.0, 0.0})}, Configuration{Point({0.0, 0.0})}}));
  CHECK(check_disjoint({}));

  const TwoComponentConfiguration t{Configuration{Point({0.0, 0.0})}, Configuration{}};
  CHECK_THROWS_AS(with_point(t, Species::minus, Point({0.0, 0.0})), DuplicatePoint);
  CHECK(with_point(t, Species::minus, Point({0.5, 0.0})).minus.size() == 1);
}
