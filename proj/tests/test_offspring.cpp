// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rwcap/mc.hpp"
#include "rwcap/offspring.hpp"

using namespace rwcap;

namespace {

const std::vector<OffspringKind> kAllKinds = {
    OffspringKind::geometric_half, OffspringKind::binary, OffspringKind::poisson_trunc,
    OffspringKind::delta_one};

// chi-square goodness of fit of `sampler` against `pmf` with pooled tail.
template <class Sampler, class Pmf>
void check_chi2(Sampler&& sampler, Pmf&& pmf, int kmax, int n, std::uint64_t seed_stream) {
  CounterRng rng(20240601, seed_stream);
  std::vector<double> cnt(std::size_t(kmax) + 2, 0.0);
  for (int i = 0; i < n; ++i) {
    int k = sampler(rng);
    REQUIRE(k >= 0);
    cnt[std::size_t(std::min(k, kmax + 1))] += 1.0;
  }
  double chi2 = 0.0, dof = 0.0, tailp = 1.0;
  for (int k = 0; k <= kmax; ++k) tailp -= pmf(k);
  for (int k = 0; k <= kmax + 1; ++k) {
    double p = (k <= kmax) ? pmf(k) : tailp;
    double e = p * n;
    if (e < 5.0) {  // pool ultra-rare cells into a pass-through check
      CHECK(cnt[std::size_t(k)] <= std::max(10.0, 6.0 * e + 12.0));
      continue;
    }
    chi2 += (cnt[std::size_t(k)] - e) * (cnt[std::size_t(k)] - e) / e;
    dof += 1.0;
  }
  CHECK(chi2 < chi2_quantile(0.999, std::max(1.0, dof - 1.0)));
}

}  // namespace

TEST_SUITE("offspring") {

TEST_CASE("pmfs are normalized, critical, and match the declared variance") {
  for (auto kind : kAllKinds) {
    OffspringLaw law = OffspringLaw::make(kind);
    double sum = 0.0, mean = 0.0, m2 = 0.0, sb_sum = 0.0, root_sum = 0.0;
    for (int k = 0; k <= 80; ++k) {
      double p = law.pmf(k);
      CHECK(p >= 0.0);
      sum += p;
      mean += k * p;
      m2 += double(k) * k * p;
      sb_sum += law.pmf_size_biased(k);
      root_sum += law.pmf_root(k);
      // size biasing of a mean-one law: mu_sb(k) = k mu(k)
      CHECK(law.pmf_size_biased(k) == doctest::Approx(k * p).epsilon(1e-12));
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sb_sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(root_sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(mean == doctest::Approx(law.mean()).epsilon(1e-10));
    CHECK(m2 - mean * mean == doctest::Approx(law.variance()).epsilon(1e-9));
  }
}

TEST_CASE("closed-form pmf values") {
  OffspringLaw geo = OffspringLaw::make(OffspringKind::geometric_half);
  for (int k = 0; k < 12; ++k) CHECK(geo.pmf(k) == doctest::Approx(std::pow(0.5, k + 1)));
  OffspringLaw bin = OffspringLaw::make(OffspringKind::binary);
  CHECK(bin.pmf(0) == doctest::Approx(0.5));
  CHECK(bin.pmf(1) == 0.0);
  CHECK(bin.pmf(2) == doctest::Approx(0.5));
  CHECK(bin.variance() == doctest::Approx(1.0));
  OffspringLaw del = OffspringLaw::make(OffspringKind::delta_one);
  CHECK(del.pmf(1) == 1.0);
  CHECK(del.variance() == 0.0);
  CHECK(del.degenerate());
  // delta keeps all three roles at delta_1 (bare spine on purpose)
  CHECK(del.pmf_root(1) == 1.0);
  CHECK(del.pmf_size_biased(1) == 1.0);
}

TEST_CASE("pgf matches the pmf series and ladder identity holds") {
  for (auto kind : kAllKinds) {
    OffspringLaw law = OffspringLaw::make(kind);
    for (double s : {0.0, 0.25, 0.5, 0.9, 0.99}) {
      double series = 0.0, pw = 1.0;
      for (int k = 0; k <= 200; ++k, pw *= s) series += law.pmf(k) * pw;
      CHECK(law.pgf(s) == doctest::Approx(series).epsilon(1e-10));
      CHECK(law.pgf_ladder(s) * (1.0 - s) == doctest::Approx(1.0 - law.pgf(s)).epsilon(1e-10));
    }
    // criticality makes the ladder mean exactly one at s = 1
    CHECK(law.pgf(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(law.pgf_ladder(1.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
  OffspringLaw geo = OffspringLaw::make(OffspringKind::geometric_half);
  CHECK(geo.pgf(0.5) == doctest::Approx(1.0 / 1.5));          // 1/(2-s)
  CHECK(geo.pgf_ladder(0.5) == doctest::Approx(1.0 / 1.5));   // same closed form
  OffspringLaw bin = OffspringLaw::make(OffspringKind::binary);
  CHECK(bin.pgf(0.5) == doctest::Approx(0.625));              // (1+s^2)/2
  CHECK(bin.pgf_ladder(0.5) == doctest::Approx(0.75));        // (1+s)/2
}

TEST_CASE("samplers follow their pmfs (chi-square, all roles)") {
  std::uint64_t stream = 0;
  for (auto kind : kAllKinds) {
    OffspringLaw law = OffspringLaw::make(kind);
    const int n = 20000;
    check_chi2([&](CounterRng& r) { return law.sample(r); },
               [&](int k) { return law.pmf(k); }, 12, n, stream++);
    check_chi2([&](CounterRng& r) { return law.sample_size_biased(r); },
               [&](int k) { return law.pmf_size_biased(k); }, 12, n, stream++);
    check_chi2([&](CounterRng& r) { return law.sample_root(r); },
               [&](int k) { return law.pmf_root(k); }, 12, n, stream++);
  }
}

TEST_CASE("parse round-trips names and rejects junk") {
  for (auto kind : kAllKinds) {
    OffspringLaw law = OffspringLaw::make(kind);
    CHECK(OffspringLaw::parse(law.name()).kind() == kind);
  }
  CHECK_THROWS(OffspringLaw::parse("no_such_law"));
}

}  // TEST_SUITE
