// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rwcap/capacity.hpp"
#include "rwcap/green.hpp"
#include "rwcap/kernel.hpp"
#include "rwcap/rng.hpp"

using namespace rwcap;

namespace {

PointSet random_set(int d, std::size_t size, Coord box, CounterRng& rng) {
  PointSet s(d, size);
  s.insert(LatticePoint::origin(d));  // anchored so sets overlap across draws
  while (s.size() < size) {
    LatticePoint p(d);
    for (int j = 0; j < d; ++j)
      p[j] = Coord(rng.uniform_int(std::uint32_t(2 * box + 1))) - box;
    s.insert(p);
  }
  return s;
}

// Exhaustive grid search for the minimal energy over the 3-simplex. With
// step 1/steps the quadratic form exceeds the true minimum by at most
// lambda_max * (2/steps^2) <= trace(K) * 2/steps^2.
double grid_min_energy3(const Eigen::MatrixXd& K, int steps) {
  REQUIRE(K.rows() == 3);
  double best = 1e300;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      double a = double(i) / steps, b = double(j) / steps, c = 1.0 - a - b;
      double e = a * a * K(0, 0) + b * b * K(1, 1) + c * c * K(2, 2) +
                 2 * (a * b * K(0, 1) + a * c * K(0, 2) + b * c * K(1, 2));
      best = std::min(best, e);
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("capacity") {

TEST_CASE("singletons and pairs have closed forms (green kernel)") {
  for (int d : {3, 5, 7}) {
    auto one = cap_green_exact(d, make_point_set(d, {LatticePoint::origin(d)}));
    CHECK(one.value == doctest::Approx(1.0 / green_origin(d)).epsilon(1e-9));
    CHECK(one.measure.size() == 1);
    CHECK(one.measure[0] == doctest::Approx(1.0));

    PointSet pair = make_point_set(d, {LatticePoint::origin(d), LatticePoint::unit(d, 0)});
    auto two = cap_green_exact(d, pair);
    double g0 = green_origin(d), g1 = g0 - 1.0;
    CHECK(two.value == doctest::Approx(2.0 / (g0 + g1)).epsilon(1e-9));
    CHECK(two.measure[0] == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("direct solve, QP and grid search agree on 3-point sets") {
  for (auto& pts : std::vector<std::vector<LatticePoint>>{
           {{0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}},
           {{0, 0, 0, 0, 0}, {2, 1, 0, 0, 0}, {-1, 0, 3, 0, 0}}}) {
    PointSet a = make_point_set(5, {pts[0], pts[1], pts[2]});
    KernelSpec spec = KernelSpec::green(5);
    auto km = kernel_matrix(spec, a);
    double e_grid = grid_min_energy3(km.K, 1200);
    double grid_gap = km.K.trace() * 2.0 / (1200.0 * 1200.0);

    auto exact = cap_green_exact(5, a);
    auto qp = cap_qp(spec, a, 1e-9);
    CHECK(std::abs(exact.value - qp.value) <= 1e-5 * exact.value);
    // grid energy brackets the true minimum from above
    CHECK(exact.energy <= e_grid + 1e-9);
    CHECK(exact.energy >= e_grid - grid_gap - 1e-9);
    CHECK(qp.gap <= 1e-8 * qp.energy + 1e-12);
    // equilibrium measure is a probability vector
    double sum = 0.0;
    for (double w : exact.measure) {
      CHECK(w >= -1e-12);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("radial kernel closed forms") {
  PointSet one = make_point_set(5, {LatticePoint::origin(5)});
  PointSet pair = make_point_set(5, {LatticePoint::origin(5), LatticePoint::unit(5, 0)});
  for (double gamma : {1.0, 2.0, 3.0}) {
    auto c1 = cap_gamma(5, gamma, one);
    CHECK(c1.value == doctest::Approx(1.0).epsilon(1e-10));
    auto c2 = cap_gamma(5, gamma, pair);
    CHECK(c2.value == doctest::Approx(2.0 / (1.0 + std::pow(2.0, -gamma))).epsilon(1e-7));
  }
  // grid oracle on a 3-point radial instance
  PointSet tri = make_point_set(
      5, {LatticePoint::origin(5), LatticePoint{3, 0, 0, 0, 0}, LatticePoint{0, 1, 1, 0, 0}});
  KernelSpec spec = KernelSpec::radial(5, 1.5);
  auto km = kernel_matrix(spec, tri);
  double e_grid = grid_min_energy3(km.K, 1200);
  double grid_gap = km.K.trace() * 2.0 / (1200.0 * 1200.0);
  auto qp = cap_qp(spec, tri, 1e-9);
  CHECK(qp.energy <= e_grid + 1e-9);
  CHECK(qp.energy >= e_grid - grid_gap - 1e-8 * qp.energy);
}

TEST_CASE("kernel spec values") {
  KernelSpec r = KernelSpec::radial(5, 2.0);
  CHECK(r.value(LatticePoint::origin(5)) == doctest::Approx(1.0));
  CHECK(r.value(LatticePoint{3, 4, 0, 0, 0}) == doctest::Approx(1.0 / 36.0));
  KernelSpec gspec = KernelSpec::green(5, 2);
  CHECK(gspec.value(LatticePoint{1, 1, 0, 0, 0}) ==
        doctest::Approx(green_table(5, 2).at(LatticePoint{1, 1, 0, 0, 0})));
}

TEST_CASE("kernel matrix rows follow lexicographic sites, not insert order") {
  PointSet a(5), b(5);
  std::vector<LatticePoint> pts = {{2, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {1, -1, 0, 0, 0}};
  for (const auto& p : pts) a.insert(p);
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) b.insert(*it);
  auto ka = kernel_matrix(KernelSpec::green(5), a);
  auto kb = kernel_matrix(KernelSpec::green(5), b);
  REQUIRE(ka.sites == kb.sites);
  CHECK(std::is_sorted(ka.sites.begin(), ka.sites.end()));
  CHECK((ka.K - kb.K).norm() == 0.0);
}

TEST_CASE("strong subadditivity and monotonicity hold exactly") {
  CounterRng rng(31, 5);
  for (int rep = 0; rep < 15; ++rep) {
    PointSet a = random_set(5, 2 + rng.uniform_int(5), 3, rng);
    PointSet b = random_set(5, 2 + rng.uniform_int(5), 3, rng);
    PointSet uni(5), inter(5);
    a.for_each([&](const Coord* c) {
      uni.insert(c);
      if (b.contains(c)) inter.insert(c);
    });
    b.for_each([&](const Coord* c) { uni.insert(c); });

    double ca = cap_green_exact(5, a).value;
    double cb = cap_green_exact(5, b).value;
    double cu = cap_green_exact(5, uni).value;
    double ci = inter.empty() ? 0.0 : cap_green_exact(5, inter).value;
    CHECK(cu + ci <= ca + cb + 1e-7);  // strong subadditivity
    CHECK(cu >= std::max(ca, cb) - 1e-7);  // monotonicity via the union
  }
}

TEST_CASE("escape sampling reproduces exact capacities (d=5)") {
  PointSet one = make_point_set(5, {LatticePoint::origin(5)});
  auto est = cap_escape_mc(5, one, 3000, 3000, SeedSpec{77, 0});
  double cap = 1.0 / green_origin(5);
  CHECK(est.bias_lo == 0.0);      // truncation only overcounts
  CHECK(est.bias_hi >= 0.0);
  CHECK(std::abs(est.mean - cap) <= 4.0 * est.se + est.bias_hi);

  PointSet pair = make_point_set(5, {LatticePoint::origin(5), LatticePoint::unit(5, 0)});
  double cap2 = 2.0 / (2.0 * green_origin(5) - 1.0);
  auto est2 = cap_escape_mc(5, pair, 3000, 3000, SeedSpec{78, 0});
  CHECK(std::abs(est2.mean - cap2) <= 4.0 * est2.se + est2.bias_hi);
  // site subsampling stays unbiased
  auto est3 = cap_escape_mc(5, pair, 6000, 3000, SeedSpec{79, 0}, 0.5);
  CHECK(std::abs(est3.mean - cap2) <= 4.0 * est3.se + est3.bias_hi);
}

TEST_CASE("argument validation") {
  PointSet empty(5);
  CHECK_THROWS(cap_green_exact(5, empty));
  PointSet mism = make_point_set(3, {LatticePoint::origin(3)});
  CHECK_THROWS(cap_green_exact(5, mism));
  CHECK_THROWS(cap_gamma(5, -1.0, make_point_set(5, {LatticePoint::origin(5)})));
}

}  // TEST_SUITE
