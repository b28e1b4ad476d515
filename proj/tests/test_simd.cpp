#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fracmax/gallery.hpp"
#include "fracmax/maxop.hpp"
#include "fracmax/norms.hpp"
#include "fracmax/regularity.hpp"
#include "fracmax/simd.hpp"
#include "support.hpp"

using namespace fracmax;
using simd::Isa;
using simd::KernelTable;

namespace {

std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (const KernelTable* t = simd::kernels_for(isa)) out.push_back(t);
  return out;
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

struct IsaGuard {
  ~IsaGuard() { simd::set_isa(std::nullopt); }
};

}  // namespace

TEST_CASE("the scalar table is always available") {
  const KernelTable* s = simd::kernels_for(Isa::scalar);
  REQUIRE(s != nullptr);
  CHECK(s->isa == Isa::scalar);
  CHECK(simd::parse_isa(simd::isa_name(Isa::avx2)) == Isa::avx2);
  CHECK_FALSE(simd::parse_isa("sse9").has_value());
}

TEST_CASE("vector kernels reproduce the scalar reference bit for bit") {
  const KernelTable& ref = *simd::kernels_for(Isa::scalar);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  std::uniform_real_distribution<double> pos(0.0, 2.0);
  for (const KernelTable* t : vector_tables()) {
    CAPTURE(simd::isa_name(t->isa));
    for (std::size_t n = 0; n <= 67; ++n) {
      std::vector<double> u(n), w(n), den(n), g(n), dp(n), soa(3 * n);
      for (std::size_t j = 0; j < n; ++j) {
        u[j] = d(rng);
        w[j] = pos(rng) + 0.1;
        den[j] = j % 9 == 4 ? 0.0 : pos(rng);  // zero denominators exercise 0/0 and x/0
        g[j] = j % 7 == 3 ? 0.0 : pos(rng);
        dp[j] = pos(rng);
      }
      if (n > 5) u[5] = 0.25;  // equal to ui below: a 0/0 entry
      for (double& c : soa) c = d(rng);
      const double q[3] = {0.1, -0.2, 0.3};
      for (std::size_t dim = 1; dim <= 3; ++dim) {
        std::vector<double> a(n), b(n);
        ref.euclidean_row(soa.data(), n, dim, n, q, a.data());
        t->euclidean_row(soa.data(), n, dim, n, q, b.data());
        CHECK(a == b);
        ref.chebyshev_row(soa.data(), n, dim, n, q, a.data());
        t->chebyshev_row(soa.data(), n, dim, n, q, b.data());
        CHECK(a == b);
      }
      const simd::RowMax r1 = ref.ratio_row_max(0.25, u.data(), den.data(), n);
      const simd::RowMax r2 = t->ratio_row_max(0.25, u.data(), den.data(), n);
      CHECK(same(r1.value, r2.value));
      CHECK(r1.index == r2.index);
      const simd::RowMax g1 = ref.gradient_row_max(0.25, 0.0, u.data(), g.data(), dp.data(), n);
      const simd::RowMax g2 = t->gradient_row_max(0.25, 0.0, u.data(), g.data(), dp.data(), n);
      CHECK(same(g1.value, g2.value));
      CHECK(g1.index == g2.index);
      CHECK(ref.weighted_abs_dev(w.data(), u.data(), n, 0.3) == t->weighted_abs_dev(w.data(), u.data(), n, 0.3));
      CHECK(ref.weighted_sq_dev(w.data(), u.data(), n, 0.3) == t->weighted_sq_dev(w.data(), u.data(), n, 0.3));

      const double slopes[5] = {0.05, 0.3, 0.5, 0.75, 1.0};
      std::vector<double> e1(5, -INFINITY), e2(5, -INFINITY);
      std::vector<std::size_t> i1(5, simd::npos), i2(5, simd::npos);
      ref.envelope_update(u.data(), dp.data(), n, slopes, 5, e1.data(), i1.data(), 7);
      t->envelope_update(u.data(), dp.data(), n, slopes, 5, e2.data(), i2.data(), 7);
      CHECK(e1 == e2);
      CHECK(i1 == i2);
    }
  }
}

TEST_CASE("row maxima report the first index attaining the maximum") {
  const KernelTable& ref = *simd::kernels_for(Isa::scalar);
  const std::vector<double> u{1.0, 3.0, 1.0, 3.0, 2.0};
  const std::vector<double> den(5, 1.0);
  CHECK(ref.ratio_row_max(1.0, u.data(), den.data(), 5).index == 1);
  for (const KernelTable* t : vector_tables()) CHECK(t->ratio_row_max(1.0, u.data(), den.data(), 5).index == 1);
  CHECK(ref.ratio_row_max(1.0, u.data(), den.data(), 0).index == simd::npos);
}

TEST_CASE("end-to-end results do not depend on the kernel variant") {
  IsaGuard guard;
  std::mt19937_64 rng(42);
  const auto s = testing::random_space(rng, 150, false);
  const ScalarField u = testing::random_field(rng, s.size());
  const auto grid = euclidean_grid(1, 0.02, -2.0, 2.0, 1.0);

  simd::set_isa(Isa::scalar);
  const MaxField m_ref = frac_maximal_noncentered(s, u, 0.5);
  const double camp_ref = campanato_seminorm(s, u, 1.0, 0.5).value;
  const double camp2_ref = campanato_seminorm(s, u, 2.0, 0.0).value;
  const double hol_ref = holder_seminorm(s, u, 0.5).value;
  const ScalarField g_ref = canonical_gradient(s, u, 0.5);
  const DecayFit fit_ref = annular_decay_fit(grid);
  for (const KernelTable* t : vector_tables()) {
    simd::set_isa(t->isa);
    CHECK(testing::same_maxfield(frac_maximal_noncentered(s, u, 0.5), m_ref));
    CHECK(campanato_seminorm(s, u, 1.0, 0.5).value == camp_ref);
    CHECK(campanato_seminorm(s, u, 2.0, 0.0).value == camp2_ref);
    CHECK(holder_seminorm(s, u, 0.5).value == hol_ref);
    CHECK(canonical_gradient(s, u, 0.5) == g_ref);
    const DecayFit f = annular_decay_fit(grid);
    CHECK(f.constant == fit_ref.constant);
    CHECK(f.exponent == fit_ref.exponent);
  }
}
