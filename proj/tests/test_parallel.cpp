#include <doctest.h>

#include <atomic>
#include <random>

#include "fracmax/gallery.hpp"
#include "fracmax/maxop.hpp"
#include "fracmax/norms.hpp"
#include "fracmax/parallel.hpp"
#include "fracmax/regularity.hpp"
#include "support.hpp"

using namespace fracmax;

namespace {

struct ThreadGuard {
  std::size_t saved = thread_count();
  ~ThreadGuard() { set_thread_count(saved); }
};

}  // namespace

TEST_CASE("parallel_for visits every index once") {
  ThreadGuard guard;
  for (std::size_t threads : {1u, 3u, 8u}) {
    set_thread_count(threads);
    std::vector<std::atomic<int>> hits(1001);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) CHECK(h.load() == 1);
    parallel_for(0, [](std::size_t) { FAIL("body called for empty range"); });
  }
}

TEST_CASE("results are identical across thread counts") {
  ThreadGuard guard;
  std::mt19937_64 rng(51);
  const auto s = testing::random_space(rng, 180, true);
  const ScalarField u = testing::random_field(rng, s.size());
  const auto buck = buckley_space(3.0, 0.05, false);

  set_thread_count(1);
  const MaxField c1 = frac_maximal(s, u, 0.5);
  const MaxField n1 = frac_maximal_noncentered(s, u, 1.0);
  const SeminormResult k1 = campanato_seminorm(s, u, 1.5, 0.2);
  const GradientCertificate h1 = hajlasz_check(s, u, canonical_gradient(s, u, 0.5), 0.5, 1.0);
  const DecayFit f1 = relative_annular_decay_fit(buck);
  for (std::size_t threads : {2u, 5u, 16u}) {
    set_thread_count(threads);
    CHECK(testing::same_maxfield(frac_maximal(s, u, 0.5), c1));
    CHECK(testing::same_maxfield(frac_maximal_noncentered(s, u, 1.0), n1));
    const SeminormResult k = campanato_seminorm(s, u, 1.5, 0.2);
    CHECK(k.value == k1.value);
    CHECK(k.witness.a == k1.witness.a);
    CHECK(k.witness.radius == k1.witness.radius);
    const GradientCertificate h = hajlasz_check(s, u, canonical_gradient(s, u, 0.5), 0.5, 1.0);
    CHECK(h.violation_ratio == h1.violation_ratio);
    CHECK(h.x == h1.x);
    CHECK(h.y == h1.y);
    const DecayFit f = relative_annular_decay_fit(buck);
    CHECK(f.constant == f1.constant);
    CHECK(f.exponent == f1.exponent);
    CHECK(f.witness.x == f1.witness.x);
  }
}
