// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "rwcap/lattice.hpp"
#include "rwcap/mc.hpp"
#include "rwcap/offspring.hpp"
#include "rwcap/sin_tree.hpp"

namespace rwcap {

// Branching capacity of a finite set A in Z^d (d >= 5):
//
//   BCap(A) = sum_{x in A} P(past sin-tree at x avoids A),
//
// where the past tree is the spine together with its one-sided bushes and
// the root node itself is exempt (its own brood belongs to the future).
// The convention is forced: a fresh point of the growing tree sausage is
// one whose strict predecessors miss it, and the strict past of a deep
// vertex is exactly its ancestor line with the bushes hanging on one side.
// Summing the complementary last-exit attribution instead gives the future
// tree with the root's brood but without the spine nodes; both sums agree
// (each counts every sausage point once), but mixing the two - testing the
// spine *and* attaching the root brood - undercounts the escape sum.  For
// the degenerate offspring law the past tree is one walk ray, so BCap
// collapses to the classical walk capacity.
//
// Two estimators: the escape sum with a truncated spine, and the tree
// sausage law of large numbers |T0_n + A| / n over prefixes.

// LLN route: mean of |T0_n + A| / n over independent prefix replicas.  No
// deterministic bias interval is attached; the finite-n offset is the
// systematic error under study.
MCEstimate bcap_lln(const OffspringLaw& law, const PointSet& a, std::uint64_t n,
                    std::uint64_t replicas, SeedSpec seed, int workers = 0);

// Escape route: per replica, the number of sites of A whose past sin-tree
// (spine truncated after spine_len steps, root node exempt) avoids A.
// Truncation and pruning can only overcount escapes, so the bias interval
// is one-sided below.
MCEstimate bcap_escape(const OffspringLaw& law, const PointSet& a, std::uint64_t spine_len,
                       std::uint64_t replicas, SeedSpec seed, const TreeLimits& limits = {},
                       int workers = 0);

// Hit probability of a target set for the sin-tree at x (past or future
// side), with exploration diagnostics averaged over replicas.
struct TreeHitSummary {
  MCEstimate prob;             // Bernoulli estimate; bias_hi holds lost mass
  std::uint64_t cap_hits = 0;  // replicas stopped by the node cap
  double mean_nodes = 0.0;
  double mean_spine_nodes = 0.0;
  double mean_skip_bias = 0.0;
  double mean_end_bias = 0.0;
};

TreeHitSummary tree_hit_prob(const OffspringLaw& law, const PointSet& targets,
                             const LatticePoint& x, bool past_side, std::uint64_t spine_len,
                             std::uint64_t replicas, SeedSpec seed, const TreeLimits& limits = {},
                             int workers = 0);

// (sigma^2/2) G_2(x): the factor that makes past-tree hit probabilities of
// a fixed set comparable across |x| shells.  Degenerate laws have no
// finite normalizer (sigma^2 = 0).
double tree_hit_normalizer(int d, const OffspringLaw& law, const LatticePoint& x);

}  // namespace rwcap
