#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fracmax/error.hpp"
#include "fracmax/gallery.hpp"
#include "fracmax/maxop.hpp"
#include "support.hpp"

using namespace fracmax;
using testing::random_field;
using testing::random_space;

namespace {

constexpr double kPi = std::numbers::pi;

// Plain sum over the open ball in the library's summation order.
double direct_average(const MetricMeasureSpace& s, const ScalarField& u, PointId x, double r) {
  const CenterOrder& o = s.order(x);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < o.ids.size() && o.dist[k] < r; ++k) {
    num += s.weight(o.ids[k]) * u[o.ids[k]];
    den += s.weight(o.ids[k]);
  }
  return num / den;
}

}  // namespace

TEST_CASE("ball averages") {
  const auto g = euclidean_grid(1, 0.01, -1.0, 1.0, 1.0);
  const ScalarField c(g.size(), 3.25);
  CHECK(ball_average(g, c, 17, 0.3) == doctest::Approx(3.25).epsilon(1e-15));
  const ScalarField lin = test_function(g, {TestFunctionKind::linear});
  CHECK(std::fabs(ball_average(g, lin, 100, 0.5)) < 1e-14);
  CHECK_THROWS_AS(ball_average(g, lin, 0, 0.0), Error);
}

TEST_CASE("ball averages match direct sums exactly on random balls") {
  std::mt19937_64 rng(21);
  const auto s = random_space(rng, 30, true);
  const ScalarField u = random_field(rng, s.size());
  std::uniform_int_distribution<PointId> pick(0, static_cast<PointId>(s.size() - 1));
  std::uniform_real_distribution<double> rad(1e-6, s.cap_radius());
  for (int t = 0; t < 50; ++t) {
    const PointId x = pick(rng);
    const double r = rad(rng);
    CHECK(ball_average(s, u, x, r) == direct_average(s, u, x, r));
    const FieldProfile prof = field_profile(s, u, x);
    CHECK(ball_average(prof, r) == direct_average(s, u, x, r));
  }
}

TEST_CASE("scaled averages") {
  const auto g = euclidean_grid(1, 0.05, -3.0, 3.0, 3.0);
  std::mt19937_64 rng(22);
  const ScalarField u = random_field(rng, g.size());
  ScalarField a(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) a[i] = std::fabs(u[i]);
  CHECK(scaled_average(g, u, 40, 0.7, 0.0) == ball_average(g, a, 40, 0.7));
  const ScalarField one(g.size(), 1.0);
  CHECK(scaled_average(g, one, 60, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("line-plus-arc origin average just past the arc") {
  const double h = 0.005;
  const auto s = buckley_space(3.0, h, false);
  const ScalarField u = buckley_function(s);
  const PointId origin = static_cast<PointId>(std::lround(3.0 / h));
  const double expected = (11.0 * kPi / 40.0) / (2.0 * (1.0 + h) + kPi / 2.0);
  CHECK(std::fabs(scaled_average(s, u, origin, 1.0 + h, 0.0) - expected) < 0.01);
}

TEST_CASE("maximal function of constants") {
  const auto g = euclidean_grid(1, 0.05, -2.0, 2.0, 1.5);
  const ScalarField one(g.size(), 1.0);
  const MaxField m0 = frac_maximal(g, one, 0.0);
  for (double v : m0.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  const MaxField mh = frac_maximal(g, one, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(mh.values[i] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
    CHECK(mh.truncated[i] == 1);
    CHECK(mh.argmax_radius[i] == 1.5);
  }
  const MaxField nc = frac_maximal_noncentered(g, one, 0.0);
  for (double v : nc.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("line-plus-arc maximal function at the origin") {
  const double h = 0.005;
  const auto s = buckley_space(3.0, h, false);
  const ScalarField u = buckley_function(s);
  const PointId origin = static_cast<PointId>(std::lround(3.0 / h));
  const MaxField m = frac_maximal(s, u, 0.0);
  CHECK(std::fabs(m.values[origin] - (11.0 * kPi / 40.0) / (2.0 + kPi / 2.0)) < 0.01);
  CHECK(m.values[origin] <= 3.0 * kPi / (20.0 + 5.0 * kPi));
  CHECK(m.argmax_radius[origin] > 1.0);
  CHECK(m.argmax_radius[origin] < 1.0 + 2 * h);
}

TEST_CASE("cross space noncentered values") {
  const auto s = cross_space(3.0, 3.0, 0.005);
  const ScalarField u = cross_function(s);
  for (double alpha : {0.0, 0.5, 1.0}) {
    const ProbeValue o = frac_maximal_at(s, u, alpha, std::vector<double>{0.0, 0.0}, true);
    const ProbeValue up = frac_maximal_at(s, u, alpha, std::vector<double>{0.0, 0.05}, true);
    CHECK(o.value <= 1.0 / 3.0 + 0.01);
    CHECK(up.value >= 0.5 - 0.05);
  }
}

TEST_CASE("noncentered dominates centered") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    const auto s = random_space(rng, 60, t % 2 == 0);
    const ScalarField u = random_field(rng, s.size());
    for (double alpha : {0.0, 0.5, 1.0}) {
      const MaxField c = frac_maximal(s, u, alpha);
      const MaxField n = frac_maximal_noncentered(s, u, alpha);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(n.values[i] >= c.values[i]);
    }
  }
}

TEST_CASE("optimized kernels equal the brute-force oracle exactly") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 12; ++t) {
    const auto s = random_space(rng, 5 + 10 * static_cast<std::size_t>(t), t % 3 == 0);
    const ScalarField u = random_field(rng, s.size());
    for (double alpha : {0.0, 0.5, 1.0}) {
      CHECK(testing::same_maxfield(frac_maximal(s, u, alpha), frac_maximal_bruteforce(s, u, alpha, false)));
      const MaxField ref = frac_maximal_bruteforce(s, u, alpha, true);
      CHECK(testing::same_maxfield(frac_maximal_noncentered(s, u, alpha), ref));
      CHECK(testing::same_maxfield(
          frac_maximal_noncentered(s, u, alpha, NoncenteredKernel::low_memory), ref));
    }
  }
}

TEST_CASE("oracle edge cases") {
  std::mt19937_64 rng(25);
  const auto s = random_space(rng, 40, false);
  const ScalarField zero(s.size(), 0.0);
  for (double v : frac_maximal_bruteforce(s, zero, 0.5, false).values) CHECK(v == 0.0);
  CHECK_THROWS_AS(frac_maximal_bruteforce(s, zero, 0.5, false, 10), Error);
  CHECK_THROWS_AS(frac_maximal(s, ScalarField{}, 0.5), Error);
  CHECK_THROWS_AS(frac_maximal(s, zero, -0.1), Error);
}

TEST_CASE("supremum over critical radii dominates a dense radius sweep") {
  std::mt19937_64 rng(26);
  for (int t = 0; t < 6; ++t) {
    const auto s = random_space(rng, 50, t % 2 == 0);
    const ScalarField u = random_field(rng, s.size());
    for (double alpha : {0.0, 0.5, 1.0}) {
      const MaxField m = frac_maximal(s, u, alpha);
      std::uniform_int_distribution<PointId> pick(0, static_cast<PointId>(s.size() - 1));
      std::uniform_real_distribution<double> rad(1e-9, s.cap_radius());
      for (int k = 0; k < 1000; ++k) {
        const PointId x = pick(rng);
        const double r = rad(rng);
        if (s.ball_mass(x, r) == 0.0) continue;
        CHECK(m.values[x] >= scaled_average(s, u, x, r, alpha) * (1 - 1e-14));
      }
      for (PointId x = 0; x < s.size(); ++x)
        CHECK(scaled_average(s, u, x, m.argmax_radius[x], alpha) ==
              doctest::Approx(m.values[x]).epsilon(1e-13));
    }
  }
}

TEST_CASE("probes at sample locations agree with the sampled field") {
  const auto g = euclidean_grid(1, 0.05, -1.0, 1.0, 0.5);
  const ScalarField u = test_function(g, {TestFunctionKind::bump});
  const MaxField m = frac_maximal(g, u, 0.5);
  const MaxField n = frac_maximal_noncentered(g, u, 0.5);
  for (PointId x = 0; x < g.size(); x += 5) {
    const std::vector<double> loc{g.coordinate(x, 0)};
    CHECK(frac_maximal_at(g, u, 0.5, loc).value == doctest::Approx(m.values[x]).epsilon(1e-14));
    CHECK(frac_maximal_at(g, u, 0.5, loc, true).value == doctest::Approx(n.values[x]).epsilon(1e-14));
  }
}
