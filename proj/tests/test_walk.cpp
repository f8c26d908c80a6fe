// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rwcap/mc.hpp"
#include "rwcap/walk.hpp"

using namespace rwcap;

namespace {

// Trinomial closed form: after n steps one coordinate took p up-moves and
// q down-moves, each with probability 1/(2d), and held otherwise.
double coord_pmf_oracle(int d, int n, int k) {
  double pm = 1.0 / (2.0 * d);
  double ph = 1.0 - 2.0 * pm;
  double total = 0.0;
  for (int p = 0; p <= n; ++p) {
    int q = p - k;
    if (q < 0 || p + q > n) continue;
    double logc = std::lgamma(n + 1.0) - std::lgamma(p + 1.0) - std::lgamma(q + 1.0) -
                  std::lgamma(n - p - q + 1.0);
    double logp = (p + q) * std::log(pm);
    if (n - p - q > 0) logp += (n - p - q) * std::log(ph);
    total += std::exp(logc + logp);
  }
  return total;
}

}  // namespace

TEST_SUITE("walk") {

TEST_CASE("coordinate pmf matches the trinomial closed form") {
  for (int d : {3, 5}) {
    for (int n : {1, 2, 7, 12}) {
      auto pmf = srw_coord_pmf(d, n);
      REQUIRE(pmf.size() == std::size_t(2 * n + 1));
      double sum = 0.0;
      for (int k = -n; k <= n; ++k) {
        double got = pmf[std::size_t(k + n)];
        CHECK(std::abs(got - coord_pmf_oracle(d, n, k)) < 1e-12);
        CHECK(got == doctest::Approx(pmf[std::size_t(n - k)]).epsilon(1e-12));  // symmetry
        sum += got;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("sampled endpoint coordinate follows the exact pmf (chi-square)") {
  const int d = 5, n = 16, reps = 6000;
  auto pmf = srw_coord_pmf(d, n);
  std::vector<double> cnt(pmf.size(), 0.0);
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(2024, std::uint64_t(r));
    WalkCursor w(LatticePoint::origin(d));
    for (int t = 0; t < n; ++t) w.step(rng);
    cnt[std::size_t(w.coords()[0] + n)] += 1.0;
  }
  double chi2 = 0.0, dof = 0.0;
  double pooled_p = 0.0, pooled_c = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    double e = pmf[i] * reps;
    if (e < 5.0) {
      pooled_p += pmf[i];
      pooled_c += cnt[i];
      continue;
    }
    chi2 += (cnt[i] - e) * (cnt[i] - e) / e;
    dof += 1.0;
  }
  if (pooled_p * reps >= 5.0) {
    double e = pooled_p * reps;
    chi2 += (pooled_c - e) * (pooled_c - e) / e;
    dof += 1.0;
  }
  CHECK(chi2 < chi2_quantile(0.999, dof - 1.0));
}

TEST_CASE("cursor key stays in sync with the coordinates") {
  KeyPacker pk(5);
  CounterRng rng(5, 5);
  WalkCursor w(LatticePoint{3, -1, 0, 2, 0});
  for (int t = 0; t < 2000; ++t) {
    w.step(rng);
    REQUIRE(w.key() == pk.pack(w.coords()));
  }
  CHECK(w.point().dim() == 5);
}

TEST_CASE("range accumulation semantics") {
  CounterRng r1(9, 1), r2(9, 1);
  PointSet with(5), without(5);
  LatticePoint start{1, 1, 1, 1, 1};
  LatticePoint end1 = accumulate_walk_range(with, 50, r1, start, true);
  LatticePoint end2 = accumulate_walk_range(without, 50, r2, start, false);
  CHECK(end1 == end2);  // same stream, same path
  CHECK(with.contains(start));
  CHECK(with.size() <= 51);
  CHECK(with.size() >= without.size());
  CHECK(with.contains(end1));

  CounterRng r3(9, 1);
  PointSet again(5);
  (void)accumulate_walk_range(again, 50, r3, start, true);
  CHECK(again.size() == with.size());  // determinism
  with.for_each([&](const Coord* c) { CHECK(again.contains(c)); });

  CounterRng r4(9, 2);
  PointSet dbl = double_sided_range(5, 30, 30, r4);
  CHECK(dbl.contains(LatticePoint::origin(5)));
  CHECK(dbl.size() <= 61);
  CHECK(dbl.size() > 30);  // d=5 walks rarely collapse below half

  CounterRng r5(9, 3);
  std::uint64_t taken = walk_visit(100, r5, LatticePoint::origin(5),
                                   [n = 0](const WalkCursor&) mutable { return ++n < 7; });
  CHECK(taken == 7);
}

}  // TEST_SUITE
