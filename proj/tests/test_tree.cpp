// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rwcap/bcap.hpp"
#include "rwcap/green.hpp"
#include "rwcap/mc.hpp"
#include "rwcap/sin_tree.hpp"
#include "rwcap/walk.hpp"

using namespace rwcap;

namespace {

// Exact total-progeny law of a Galton-Watson tree via the hitting-time
// (Otter-Dwass) identity P(T = n) = P(S_n = n - 1) / n with S_n an n-fold
// convolution of the offspring law.
std::vector<double> progeny_pmf(const OffspringLaw& law, int nmax) {
  const int K = 64;  // per-draw support cut; the omitted geometric mass is ~2^-64
  std::vector<double> base(K + 1);
  for (int k = 0; k <= K; ++k) base[std::size_t(k)] = law.pmf(k);
  std::vector<double> conv = {1.0};  // S_0
  std::vector<double> out(std::size_t(nmax) + 1, 0.0);
  for (int n = 1; n <= nmax; ++n) {
    std::vector<double> next(conv.size() + std::size_t(K), 0.0);
    for (std::size_t i = 0; i < conv.size(); ++i)
      for (int k = 0; k <= K; ++k) next[i + std::size_t(k)] += conv[i] * base[std::size_t(k)];
    conv.swap(next);
    if (std::size_t(n - 1) < conv.size()) out[std::size_t(n)] = conv[std::size_t(n - 1)] / n;
  }
  return out;
}

}  // namespace

TEST_SUITE("tree") {

TEST_CASE("total progeny follows the Otter-Dwass law (chi-square)") {
  for (auto kind :
       {OffspringKind::geometric_half, OffspringKind::binary, OffspringKind::poisson_trunc}) {
    OffspringLaw law = OffspringLaw::make(kind);
    const int nmax = 9, reps = 12000;
    auto pmf = progeny_pmf(law, nmax);
    double tailp = 1.0;
    for (int n = 1; n <= nmax; ++n) tailp -= pmf[std::size_t(n)];

    std::vector<double> cnt(std::size_t(nmax) + 2, 0.0);
    TreeLimits lim;
    lim.node_cap = 100000;  // capped giants still land in the pooled tail bin
    for (int r = 0; r < reps; ++r) {
      CounterRng rng(314159, std::uint64_t(r) + 1000 * std::uint64_t(kind));
      TreeStats st;
      (void)sample_critical_tree(5, law, LatticePoint::origin(5), rng, lim, &st);
      auto n = std::min<std::uint64_t>(st.nodes, std::uint64_t(nmax) + 1);
      cnt[std::size_t(n)] += 1.0;
    }
    CHECK(cnt[0] == 0.0);  // a tree always has its root
    double chi2 = 0.0, dof = 0.0;
    for (int n = 1; n <= nmax + 1; ++n) {
      double p = (n <= nmax) ? pmf[std::size_t(n)] : tailp;
      double e = p * reps;
      if (e < 5.0) {
        CHECK(cnt[std::size_t(n)] <= std::max(10.0, 6.0 * e + 12.0));
        continue;
      }
      chi2 += (cnt[std::size_t(n)] - e) * (cnt[std::size_t(n)] - e) / e;
      dof += 1.0;
    }
    CHECK(chi2 < chi2_quantile(0.999, std::max(1.0, dof - 1.0)));
  }
}

TEST_CASE("spine marginal is the simple walk (KS)") {
  const int L = 24, reps = 3000;
  auto pmf = srw_coord_pmf(5, L);
  PointSet far = make_point_set(5, {LatticePoint{500, 0, 0, 0, 0}});
  for (auto kind : {OffspringKind::binary, OffspringKind::delta_one}) {
    OffspringLaw law = OffspringLaw::make(kind);
    std::vector<int> xs;
    xs.reserve(reps);
    for (int r = 0; r < reps; ++r) {
      CounterRng rng(2718, std::uint64_t(r) + 100000 * std::uint64_t(kind));
      std::vector<LatticePoint> trace;
      TreeOutcome out = future_tree_hits(law, far, LatticePoint{2, 0, 0, 0, 0}, L, rng, {}, &trace);
      CHECK(!out.hit);
      if (out.stats.node_cap_hit) continue;  // cap is position blind, filter is unbiased
      REQUIRE(trace.size() == std::size_t(L) + 1);
      xs.push_back(trace.back()[0] - 2);
    }
    REQUIRE(xs.size() > 2500);
    std::sort(xs.begin(), xs.end());
    double dsup = 0.0, cdf = 0.0;
    for (int k = -L; k <= L; ++k) {
      cdf += pmf[std::size_t(k + L)];
      auto up = std::upper_bound(xs.begin(), xs.end(), k);
      double emp = double(up - xs.begin()) / double(xs.size());
      dsup = std::max(dsup, std::abs(emp - cdf));
    }
    CHECK(dsup < 1.95 / std::sqrt(double(xs.size())));
  }
}

TEST_CASE("degenerate law collapses the past tree to one walk") {
  OffspringLaw del = OffspringLaw::make(OffspringKind::delta_one);
  PointSet a = make_point_set(5, {LatticePoint::origin(5)});
  const int reps = 3000;
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(12345, std::uint64_t(r));
    TreeOutcome out =
        past_tree_hits(del, a, LatticePoint::origin(5), 4000, rng, {}, nullptr, false);
    hits += out.hit ? 1 : 0;
    CHECK(out.stats.nodes == out.stats.spine_nodes);  // no bushes at all
  }
  double p_return = 1.0 - 1.0 / green_origin(5);
  auto est = bernoulli_estimate(std::uint64_t(hits), reps);
  CHECK(std::abs(est.mean - p_return) <= 4.0 * est.se + 1e-3);
}

TEST_CASE("a root inside the target is an instant hit for hitting, not escape") {
  OffspringLaw law = OffspringLaw::make(OffspringKind::binary);
  PointSet a = make_point_set(5, {LatticePoint::origin(5)});
  CounterRng rng(7, 7);
  TreeOutcome hit = past_tree_hits(law, a, LatticePoint::origin(5), 10, rng);
  CHECK(hit.hit);
  int escapes = 0;
  for (int r = 0; r < 200; ++r) {
    CounterRng rr(8, std::uint64_t(r));
    TreeOutcome esc = past_tree_hits(law, a, LatticePoint::origin(5), 800, rr, {}, nullptr, false);
    escapes += esc.hit ? 0 : 1;
  }
  CHECK(escapes > 0);  // the root itself is exempt, escape is possible
  CHECK(escapes < 200);
}

TEST_CASE("tree prefixes nest along the canonical draw order") {
  OffspringLaw law = OffspringLaw::make(OffspringKind::geometric_half);
  CounterRng r1(55, 1), r2(55, 1);
  TreeStats s1, s2;
  PointSet small = sample_tree_prefix(5, law, LatticePoint::origin(5), 300, r1, &s1);
  PointSet big = sample_tree_prefix(5, law, LatticePoint::origin(5), 1200, r2, &s2);
  CHECK(s1.nodes == 300);  // the sin-tree never runs out of nodes
  CHECK(s2.nodes == 1200);
  CHECK(small.size() <= 300);
  CHECK(big.size() >= small.size());
  small.for_each([&](const Coord* c) { CHECK(big.contains(c)); });
}

TEST_CASE("pruning fires on far targets and reports zero-loss bounds") {
  OffspringLaw law = OffspringLaw::make(OffspringKind::geometric_half);
  PointSet far = make_point_set(5, {LatticePoint{400, 0, 0, 0, 0}});
  CounterRng rng(66, 3);
  TreeOutcome out = future_tree_hits(law, far, LatticePoint::origin(5), 60, rng);
  CHECK(!out.hit);
  CHECK(out.stats.skip_bias >= 0.0);
  CHECK(out.stats.skip_bias < 1e-2);  // far bushes carry tiny envelope mass
  CHECK(out.stats.end_bias >= 0.0);
}

TEST_CASE("tree hit normalizer is half the variance times G_2") {
  LatticePoint x{7, -3, 0, 0, 1};
  double g2 = green_table(5, 2).at(x);
  OffspringLaw geo = OffspringLaw::make(OffspringKind::geometric_half);
  OffspringLaw bin = OffspringLaw::make(OffspringKind::binary);
  CHECK(tree_hit_normalizer(5, geo, x) == doctest::Approx(1.0 * g2).epsilon(1e-12));
  CHECK(tree_hit_normalizer(5, bin, x) == doctest::Approx(0.5 * g2).epsilon(1e-12));
}

}  // TEST_SUITE
