// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "rwcap/capacity.hpp"
#include "rwcap/lattice.hpp"
#include "rwcap/mc.hpp"
#include "rwcap/offspring.hpp"
#include "rwcap/sin_tree.hpp"

namespace rwcap {

// Sausage volume limits for sums of independent walk ranges (d > 2N):
//
//   |R^1_n + ... + R^N_n + A| / n^N  ->  f_N(A),
//
// where f_N has the escape-sum dual
//
//   f_N(A) = sum_{a in A} P( for every i:
//              (R^i(0,inf) + sum_{j>i} R^j(-inf,inf) + a) avoids A ),
//
// all walks independent, R(0,inf) open at time zero, double-sided ranges
// including time zero.  N = 1 recovers the classical capacity.

// LLN route: mean of |R^1_n + ... + R^N_n + A| / n^N.  The finite-n offset
// is the systematic error under study, so no bias interval is attached.
MCEstimate f_N_lln(int d, int N, const PointSet& a, std::uint64_t n, std::uint64_t replicas,
                   SeedSpec seed, int workers = 0, std::uint64_t fold_budget = 1000000000ull);

// Dual route for N in {1, 2}: per replica, the number of sites of A whose
// joint escape event holds on truncated walks.  horizon = 0 picks
// (20 (1 + diam(A u {0})))^2.  Truncation only overcounts escapes; the
// one-sided remainder bound uses the local CLT envelope
// sum_{s>T} sup_y p_s(y) <= 2 (d/2pi)^{d/2} T^{1-d/2} / (d/2-1).
MCEstimate f_N_dual(int d, int N, const PointSet& a, std::uint64_t replicas, SeedSpec seed,
                    std::uint64_t horizon = 0, int workers = 0);

// Classical-capacity rate table: f_1 LLN over an n grid.
struct RatePoint {
  std::uint64_t n = 0;
  MCEstimate rate;
};
std::vector<RatePoint> sausage_capacity_rate(int d, const PointSet& a,
                                             const std::vector<std::uint64_t>& ns,
                                             std::uint64_t replicas, SeedSpec seed,
                                             int workers = 0);

// One comparability chain for a set A at d = 5: branching capacity
// (escape route), the radial capacity with gamma = d-4, f_2 via walks
// (dual route), and the tree sausage LLN as the tree route to the same
// scale.  The three ratios are the payload; each is Theta(1) with
// law-dependent constants.
struct ChainParams {
  std::uint64_t escape_spine_len = 40000;
  std::uint64_t escape_replicas = 4000;
  std::uint64_t lln_n = 50000;
  std::uint64_t lln_replicas = 40;
  std::uint64_t dual_replicas = 4000;
  double qp_tol = 1e-8;
  TreeLimits limits;
};

struct ChainResult {
  MCEstimate bcap;          // escape route
  CapacityResult cap_low;   // radial kernel, gamma = d-4
  MCEstimate f2_walks;      // dual route
  MCEstimate f2_tree;       // tree sausage LLN route
  double ratio_bcap_cap = 0.0;
  double ratio_walks_cap = 0.0;
  double ratio_tree_walks = 0.0;
};

ChainResult tree_sausage_chain(const OffspringLaw& law, const PointSet& a,
                               const ChainParams& params, SeedSpec seed, int workers = 0);

}  // namespace rwcap
