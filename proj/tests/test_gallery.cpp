#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracmax/error.hpp"
#include "fracmax/gallery.hpp"
#include "fracmax/norms.hpp"

using namespace fracmax;

namespace {

constexpr double kPi = std::numbers::pi;

PointId find_point(const MetricMeasureSpace& s, double x, double y) {
  for (PointId i = 0; i < s.size(); ++i)
    if (std::fabs(s.coordinate(i, 0) - x) < 1e-9 && std::fabs(s.coordinate(i, 1) - y) < 1e-9) return i;
  FAIL("no sample at (" << x << ", " << y << ")");
  return 0;
}

}  // namespace

TEST_CASE("euclidean grids") {
  const auto a = euclidean_grid(1, 0.5, -1.0, 1.0, 1.0);
  CHECK(a.size() == 5);
  CHECK(a.total_mass() == 2.5);
  const auto b = euclidean_grid(2, 1.0, 0.0, 2.0, 1.0);
  CHECK(b.size() == 9);
  CHECK(b.total_mass() == 9.0);
  CHECK_THROWS_AS(euclidean_grid(1, 0.0, -1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(euclidean_grid(1, 1.0, 0.0, 0.5, 1.0), Error);
  CHECK_THROWS_AS(euclidean_grid(3, 0.5, 0.0, 1.0, 1.0), Error);
}

TEST_CASE("line-plus-arc space balls at the origin") {
  const double h = 0.005;
  const auto s = buckley_space(3.0, h, false);
  const PointId o = find_point(s, 0.0, 0.0);
  CHECK(std::fabs(s.ball_mass(o, 0.9) - 1.8) <= 2 * h);
  CHECK(std::fabs(s.ball_mass(o, 1.01) - (2.02 + kPi / 2)) <= 2 * h);
  CHECK(s.cap_radius() == 3.0);
  const auto w = buckley_space(3.0, h, true);
  CHECK(std::fabs(w.ball_mass(find_point(w, 0.0, 0.0), 2.0) - (2.0 + kPi / 2) * 2.0) <= 4 * h);
  CHECK_THROWS_AS(buckley_space(2.0, h, false), Error);
  CHECK_THROWS_AS(buckley_space(3.0, 0.1, false), Error);
}

TEST_CASE("line-plus-arc function") {
  const double h = kPi / 80.0;
  const auto s = buckley_space(3.0, h, false);
  const ScalarField u = buckley_function(s);
  CHECK(u[find_point(s, std::cos(39 * h), std::sin(39 * h))] == doctest::Approx(1.0));
  CHECK(u[find_point(s, std::cos(18 * h), std::sin(18 * h))] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(u[find_point(s, std::cos(12 * h), std::sin(12 * h))] == 0.0);  // 12h = 3pi/20 < pi/5
  CHECK(u[find_point(s, 2.0 * h, 0.0)] == 0.0);
  CHECK_THROWS_AS(buckley_function(euclidean_grid(1, 0.1, -1.0, 1.0, 1.0)), Error);
}

TEST_CASE("line-plus-arc function is Lipschitz uniformly in h") {
  const auto a = buckley_space(3.0, 0.02, false);
  const auto b = buckley_space(3.0, 0.01, false);
  const double la = holder_seminorm(a, buckley_function(a), 1.0).value;
  const double lb = holder_seminorm(b, buckley_function(b), 1.0).value;
  CHECK(std::isfinite(la));
  CHECK(lb <= 1.1 * la);
  CHECK(lb <= 1.05 / (kPi / 20.0));  // slope in angle against chord length
}

TEST_CASE("cross space") {
  const double h = 0.005;
  const auto s = cross_space(3.0, 3.0, h);
  const PointId o = find_point(s, 0.0, 0.0);
  // four arms leave the origin
  CHECK(std::fabs(s.ball_mass(o, 0.5) - 2.0) <= 4 * h);
  CHECK(std::fabs(s.ball_mass(find_point(s, 0.0, 1.0), 0.5) - 0.5) <= 2 * h);
  CHECK(s.cap_radius() == 3.0);
  CHECK_THROWS_AS(cross_space(2.5, 3.0, h), Error);
  CHECK_THROWS_AS(cross_space(3.0, 1.5, h), Error);
}

TEST_CASE("cross function") {
  const auto s = cross_space(3.0, 3.0, 0.05);
  const ScalarField u = cross_function(s);
  CHECK(u[find_point(s, 0.0, 0.7)] == doctest::Approx(0.7));
  CHECK(u[find_point(s, 3.0, 0.0)] == 0.0);
  CHECK(u[find_point(s, 0.0, -0.5)] == 0.0);
  CHECK(u[find_point(s, 0.0, 1.0)] == doctest::Approx(1.0));
  CHECK(holder_seminorm(s, u, 1.0).value <= 1.0 + 1e-9);
  CHECK_THROWS_AS(cross_function(buckley_space(3.0, 0.05, false)), Error);
}

TEST_CASE("gallery weights approximate continuum length") {
  const double h = 0.01;
  CHECK(std::fabs(buckley_space(3.0, h, false).total_mass() - (6.0 + kPi / 2)) <= 3 * h);
  CHECK(std::fabs(cross_space(3.0, 3.0, h).total_mass() - 10.0) <= 3 * h);
}

TEST_CASE("test functions") {
  const auto g = euclidean_grid(1, 0.01, -1.0, 1.0, 1.0);
  for (double v : test_function(g, {TestFunctionKind::constant, 3.0})) CHECK(v == 3.0);
  const ScalarField ab = test_function(g, {TestFunctionKind::abs_power, 1.0, 1.0});
  CHECK(holder_seminorm(g, ab, 1.0).value == doctest::Approx(1.0).epsilon(1e-12));
  const ScalarField lg = test_function(g, {TestFunctionKind::clipped_log, 1.0, 1.0, 10.0});
  for (double v : lg) CHECK(std::fabs(v) <= 10.0);
  CHECK(lg[100] == doctest::Approx(std::log(0.005) - 1.0).epsilon(1e-12));  // cell average at the origin
  const ScalarField tight = test_function(g, {TestFunctionKind::clipped_log, 1.0, 1.0, 2.0});
  CHECK(tight[100] == -2.0);
  CHECK(std::isfinite(bmo_seminorm(g, lg).value));
  CHECK_THROWS_AS(test_function(g, {TestFunctionKind::abs_power, 1.0, 0.0}), Error);
  const auto m = build_matrix_space({{0, 1}, {1, 0}}, {1, 1}, 2.0);
  CHECK_THROWS_AS(test_function(m, {TestFunctionKind::bump}), Error);
  CHECK(test_function(m, {TestFunctionKind::constant, 2.0}) == ScalarField{2.0, 2.0});
}

TEST_CASE("gallery kinds parse") {
  CHECK(parse_gallery_kind("buckley-weighted") == GalleryKind::buckley_weighted);
  CHECK(parse_gallery_kind("grid2d") == GalleryKind::grid2d);
  CHECK_FALSE(parse_gallery_kind("sphere").has_value());
  CHECK(parse_test_function("clipped_log") == TestFunctionKind::clipped_log);
  GallerySpec spec;
  spec.kind = GalleryKind::grid1d;
  spec.step = 0.1;
  spec.extent = 1.0;
  const auto g = make_gallery(spec);
  CHECK(g.size() == 21);
  CHECK(g.cap_radius() == 0.5);
  CHECK(gallery_field(spec, g).size() == 21);
}
