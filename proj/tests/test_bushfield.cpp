// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "rwcap/bcap.hpp"
#include "rwcap/bushfield.hpp"
#include "rwcap/capacity.hpp"
#include "rwcap/green.hpp"

using namespace rwcap;

TEST_SUITE("bushfield") {

TEST_CASE("construction guards") {
  OffspringLaw geo = OffspringLaw::make(OffspringKind::geometric_half);
  CHECK_THROWS(BushField(geo, make_point_set(3, {LatticePoint::origin(3)})));
  CHECK_THROWS(BushField(geo, PointSet(5)));
  CHECK_THROWS(BushField(geo, make_point_set(5, {LatticePoint::origin(5)}), {.box_radius = 8}));
  // sites must fit well inside the box
  PointSet wide = make_point_set(5, {LatticePoint::origin(5), LatticePoint{8, 0, 0, 0, 0}});
  CHECK_THROWS(BushField(geo, wide, {.box_radius = 9}));
}

TEST_CASE("degenerate law reproduces the classical harmonic field") {
  // With delta_one offspring the bush-hit field solves the classical
  // Dirichlet problem, so v(x) = g(x)/g(0) and the boundary flux constant
  // equals the walk capacity of the set.
  OffspringLaw del = OffspringLaw::make(OffspringKind::delta_one);
  PointSet a = make_point_set(5, {LatticePoint::origin(5)});
  BushField f(del, a, {.box_radius = 9});
  const double g0 = green_origin(5);
  const double cap = 1.0 / g0;

  CHECK(f.dim() == 5);
  CHECK(f.box_radius() == 9);
  CHECK(f.sites().size() == 1);
  CHECK(f.law().kind() == OffspringKind::delta_one);
  CHECK(f.kappa() == doctest::Approx(cap).epsilon(0.015));
  CHECK(f.kappa_spread() < 0.02);
  CHECK(f.field_rel_error() < 0.05);
  CHECK(f.sweeps_used() >= 400);

  for (LatticePoint x : {LatticePoint{3, 0, 0, 0, 0}, LatticePoint{1, 1, 1, 0, 0},
                         LatticePoint{6, 2, 0, 0, 0}}) {
    double want = green_value(5, x) / g0;
    CHECK(f.hit_from(x.data()) == doctest::Approx(want).epsilon(0.015));
  }
  LatticePoint out{15, 0, 0, 0, 0};  // outside the box: closure takes over
  CHECK(f.hit_from(out.data()) == doctest::Approx(green_value(5, out) / g0).epsilon(0.03));

  // the target cell itself
  CHECK(f.hit_from(LatticePoint::origin(5).data()) == doctest::Approx(1.0));
  CHECK(f.in_target(LatticePoint::origin(5).data()));
  CHECK(!f.in_target(out.data()));

  // psi == 1 for the bare spine, 0 on the target
  CHECK(f.spine_factor(LatticePoint{4, 1, 0, 0, 0}.data()) == doctest::Approx(1.0));
  CHECK(f.spine_factor(out.data()) == doctest::Approx(1.0));
  CHECK(f.spine_factor(LatticePoint::origin(5).data()) == 0.0);

  // exact last-exit wiring: walk_hit = cap * g, and exactly 1 on the set
  LatticePoint w{9, 3, 0, 0, 0};
  CHECK(f.walk_hit(w.data()) == doctest::Approx(cap * green_value(5, w)).epsilon(1e-9));
  CHECK(f.walk_hit(LatticePoint::origin(5).data()) == doctest::Approx(1.0).epsilon(1e-9));

  // no variance, no spine tail
  CHECK(f.spine_tail_mass(w.data()) == 0.0);
}

TEST_CASE("degenerate spine escape equals the walk capacity, bias-free") {
  OffspringLaw del = OffspringLaw::make(OffspringKind::delta_one);
  PointSet a = make_point_set(5, {LatticePoint::origin(5)});
  BushField f(del, a, {.box_radius = 9});
  auto est = bcap_escape_spine(f, 2500, 2500, SeedSpec{1001, 0});
  CHECK(est.bias_lo == 0.0);
  CHECK(est.bias_hi == 0.0);
  CHECK(std::abs(est.mean - 1.0 / green_origin(5)) <= 4.0 * est.se);
}

TEST_CASE("spine and direct tree estimators agree (geometric law)") {
  OffspringLaw geo = OffspringLaw::make(OffspringKind::geometric_half);
  PointSet a = make_point_set(5, {LatticePoint::origin(5)});
  BushField f(geo, a, {.box_radius = 9});
  CHECK(f.field_rel_error() < 0.12);
  CHECK(f.kappa() > 0.2);
  CHECK(f.kappa() < 1.0);

  // escape sum: conditioned spine vs direct tree simulation
  auto spine = bcap_escape_spine(f, 2000, 2500, SeedSpec{1002, 0});
  auto direct = bcap_escape(geo, a, 2000, 1000, SeedSpec{1003, 0});
  double allow = 4.0 * std::hypot(spine.se, direct.se) + spine.bias_hi - spine.bias_lo +
                 std::abs(direct.bias_lo);
  CHECK(std::abs(spine.mean - direct.mean) <= allow);

  // spine tail mass is kappa-scaled G_2 and decays with distance
  LatticePoint w1{10, 0, 0, 0, 0}, w2{20, 0, 0, 0, 0};
  CHECK(f.spine_tail_mass(w1.data()) ==
        doctest::Approx(f.kappa() * green_table(5, 2).at(w1)).epsilon(1e-9));
  CHECK(f.spine_tail_mass(w1.data()) > f.spine_tail_mass(w2.data()));

  // hit probability from a moderate distance: two independent estimators
  LatticePoint x{3, 0, 0, 0, 0};
  auto tree_spine = tree_hit_prob_spine(f, x, 2000, 3000, SeedSpec{1004, 0});
  auto tree_direct = tree_hit_prob(geo, a, x, true, 2000, 1500, SeedSpec{1005, 0});
  double allow2 = 4.0 * std::hypot(tree_spine.se, tree_direct.prob.se) + tree_spine.bias_hi -
                  tree_spine.bias_lo + tree_direct.prob.bias_hi - tree_direct.prob.bias_lo;
  CHECK(std::abs(tree_spine.mean - tree_direct.prob.mean) <= allow2);
  CHECK(tree_spine.mean > 0.01);  // the probe actually carries signal
}

TEST_CASE("field construction is deterministic") {
  OffspringLaw geo = OffspringLaw::make(OffspringKind::geometric_half);
  PointSet a = make_point_set(5, {LatticePoint::origin(5), LatticePoint{1, 1, 0, 0, 0}});
  BushField f1(geo, a, {.box_radius = 9, .sweeps = 80});
  BushField f2(geo, a, {.box_radius = 9, .sweeps = 80});
  CHECK(f1.kappa() == f2.kappa());
  CHECK(f1.field_rel_error() == f2.field_rel_error());
  LatticePoint probe{4, -2, 1, 0, 0};
  CHECK(f1.hit_from(probe.data()) == f2.hit_from(probe.data()));
  CHECK(f1.spine_factor(probe.data()) == f2.spine_factor(probe.data()));
  CHECK(f1.sites().size() == 2);
}

TEST_CASE("estimator argument guards") {
  OffspringLaw geo = OffspringLaw::make(OffspringKind::geometric_half);
  PointSet a = make_point_set(5, {LatticePoint::origin(5)});
  BushField f(geo, a, {.box_radius = 9, .sweeps = 60});
  CHECK_THROWS(bcap_escape_spine(f, 0, 10, SeedSpec{1, 0}));
  CHECK_THROWS(tree_hit_prob_spine(f, LatticePoint::origin(3), 100, 10, SeedSpec{1, 0}));
}

}  // TEST_SUITE
