// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rwcap/green.hpp"
#include "rwcap/hitting.hpp"

using namespace rwcap;

TEST_SUITE("green") {

TEST_CASE("d=3 origin value matches the closed form") {
  // Watson's integral for the cubic lattice: g_3(0) =
  // (sqrt(6)/32 pi^3) Gamma(1/24) Gamma(5/24) Gamma(7/24) Gamma(11/24).
  CHECK(std::abs(green_origin(3) - 1.5163860591519780) < 1e-8);
}

TEST_CASE("harmonicity at the origin: g(e1) = g(0) - 1") {
  for (int d : {3, 4, 5, 7}) {
    const GreenTable& t = green_table(d);
    CHECK(t.at(LatticePoint::unit(d, 0)) ==
          doctest::Approx(t.at_origin() - 1.0).epsilon(1e-9));
  }
}

TEST_CASE("values are symmetric under coordinate permutations and signs") {
  const GreenTable& t = green_table(5);
  LatticePoint a{1, -2, 0, 0, 0}, b{0, 0, 2, 0, 1}, c{-1, 0, 0, -2, 0};
  CHECK(t.at(a) == t.at(b));
  CHECK(t.at(a) == t.at(c));
  const GreenTable& t2 = green_table(5, 2);
  CHECK(t2.at(a) == t2.at(b));
}

TEST_CASE("memoization hits the quadrature value and the registry is shared") {
  const GreenTable& t = green_table(5);
  CHECK(&green_table(5) == &t);
  LatticePoint x{2, 1, 0, -1, 0};
  CHECK(t.at(x) == doctest::Approx(t.quadrature_value(x.data())).epsilon(1e-9));
  CHECK(t.memo_size() >= 1);
}

TEST_CASE("far-field shortcut agrees with quadrature just past the crossover") {
  for (auto [d, N] : std::vector<std::pair<int, int>>{{5, 1}, {5, 2}, {7, 2}}) {
    const GreenTable& t = green_table(d, N);
    Coord x[kMaxDim] = {};
    x[0] = 31;
    x[1] = 7;  // |x| ~ 31.8, beyond the crossover radius 30
    double far = t.at_coords(x);
    double exact = t.quadrature_value(x);
    CHECK(std::abs(far / exact - 1.0) < 0.02);
    CHECK(t.far_field().rel_spread < 0.02);
    CHECK(t.far_field().c > 0.0);
  }
}

TEST_CASE("envelope dominates at moderate radii, the pruning regime") {
  // The one-sided pruning and truncation bounds lean on envelope(r, 0.5)
  // covering G_N from radius ~6 outward, i.e. before the asymptote is
  // reached; certify it pointwise on axis, diagonal and mixed directions.
  for (auto [d, N] : std::vector<std::pair<int, int>>{{5, 1}, {5, 2}, {7, 1}, {7, 2}}) {
    const GreenTable& t = green_table(d, N);
    std::vector<LatticePoint> pts;
    for (Coord r = 6; r <= 14; r += 2) {
      LatticePoint axis(d), diag(d), mixed(d);
      axis[0] = r;
      Coord a = Coord(std::lround(double(r) / std::sqrt(2.0)));
      diag[0] = a;
      diag[1] = a;
      mixed[0] = r - 2;
      mixed[1] = 2;
      mixed[d - 1] = -3;
      pts.push_back(axis);
      pts.push_back(diag);
      pts.push_back(mixed);
    }
    for (const auto& p : pts) {
      double v = t.at(p);
      double env = t.envelope(p.norm(), 0.5);
      CHECK(v <= env);
      CHECK(v >= 0.15 * env / 1.5);  // and the bound is not vacuous
    }
    // envelope clamps its argument at radius one
    CHECK(t.envelope(0.25) == doctest::Approx(t.envelope(1.0)));
  }
}

TEST_CASE("resolvent identity (I - P) G_{N+1} = G_N at probe points") {
  CHECK(resolvent_probe_dev(5, 1) < 1e-6);
  CHECK(resolvent_probe_dev(5, 2) < 1e-6);
  CHECK(resolvent_probe_dev(7, 1) < 1e-6);
}

TEST_CASE("resolvent identity at the origin itself") {
  // (I - P) G_2 (0) = g(0), evaluated with raw quadrature on both sides.
  const GreenTable& g2 = green_table(5, 2);
  Coord o[kMaxDim] = {};
  double lhs = g2.quadrature_value(o);
  Coord e[kMaxDim] = {};
  e[0] = 1;
  lhs -= g2.quadrature_value(e);  // all 2d neighbours share one class
  CHECK(lhs == doctest::Approx(green_origin(5)).epsilon(1e-8));
}

TEST_CASE("constructor rejects recurrent and infinite cases") {
  CHECK_THROWS(GreenTable(2, 1));
  CHECK_THROWS(GreenTable(4, 2));
  CHECK_THROWS(GreenTable(5, 0));
  CHECK_THROWS(GreenTable(5, 1, 0.0));
  CHECK_THROWS(green_table(5).at(LatticePoint{1, 2, 3}));  // dim mismatch
}

}  // TEST_SUITE
