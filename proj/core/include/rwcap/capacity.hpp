// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwcap/kernel.hpp"
#include "rwcap/mc.hpp"
#include "rwcap/rng.hpp"

namespace rwcap {

// Capacity of a finite set A as the reciprocal of the minimal energy
// E(nu) = nu^T K nu over probability measures nu on A. The minimizing nu is
// the equilibrium measure.
struct CapacityResult {
  double value = 0.0;   // 1 / energy
  double energy = 0.0;  // minimal quadratic form
  std::vector<LatticePoint> sites;  // lexicographic
  std::vector<double> measure;      // equilibrium measure on `sites`
  bool clamped = false;   // negative direct-solve weights were clipped in `measure`
  double gap = 0.0;       // duality gap certificate of the QP route (0 = exact)
  std::uint64_t iterations = 0;
  double condition = 0.0;  // rough kernel condition estimate (direct route)
  std::string method;
};

// Direct route: solve K e = 1; capacity = sum(e). Exact up to linear solve
// error. The solver weights are mathematically nonnegative for the Green
// kernel; numerically negative entries are clipped (and flagged) in the
// reported measure without touching the capacity value.
CapacityResult cap_green_exact(int d, const PointSet& a, int N = 1);

// Iterative route: minimize nu^T K nu over the simplex by Frank-Wolfe with
// away steps, then polish the active set with a direct solve. Works for any
// positive definite kernel; stops at duality gap <= tol * energy.
CapacityResult cap_qp(const KernelSpec& spec, const PointSet& a, double tol = 1e-8,
                      std::uint64_t max_iter = 100000);

// Capacity for the radial kernel (1+|x-y|)^(-gamma).
CapacityResult cap_gamma(int d, double gamma, const PointSet& a, double tol = 1e-8,
                         std::uint64_t max_iter = 100000);

// One pass of escape sampling: for each site of A (independently kept with
// probability site_fraction), walk `horizon` steps and record whether A was
// ever revisited. sum estimates sum_a P_a(no return within horizon), i.e.
// the capacity up to horizon truncation; bias bounds the truncation excess
// (the estimate only overshoots), sampled on at most bias_sample escaped
// endpoints via the far-field envelope of g.
struct EscapeSum {
  double sum = 0.0;
  double bias = 0.0;
  std::uint64_t sites_tried = 0;
};
EscapeSum escape_sum_once(const PointSet& a, std::uint64_t horizon, double site_fraction,
                          CounterRng& rng, int bias_sample = 64);

// Monte Carlo route: capacity = sum_a P_a(walk never returns to A),
// estimated with per-replica escape passes. One-sided truncation bias is
// reported in the estimate's interval.
MCEstimate cap_escape_mc(int d, const PointSet& a, std::uint64_t replicas, std::uint64_t horizon,
                         SeedSpec seed, double site_fraction = 1.0, int workers = 0);

}  // namespace rwcap
