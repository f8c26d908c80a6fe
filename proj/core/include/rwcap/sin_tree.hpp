// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "rwcap/lattice.hpp"
#include "rwcap/offspring.hpp"
#include "rwcap/rng.hpp"

namespace rwcap {

// Samplers for critical branching random walk trees and for the invariant
// sin-tree seen from a distinguished vertex x.
//
// Structure of the sin-tree at x: the spine is the ancestor line
// u_0 = x, u_1 = parent(x), u_2, ... with a fresh symmetric walk step per
// link.  The root draws mu~(k) = mu(k-1) offspring: one link is the parent
// (the spine), the other mu~ - 1 are x's own children, all on the future
// side.  Every other spine node draws a size-biased count Z ~ mu_sb with a
// uniformly placed successor index J in {0..Z-1}: siblings right of the
// successor (index > J) belong to the future tree, siblings left of it to
// the past tree, and each sibling carries an independent critical tree.
// Spine positions u_1, u_2, ... belong to both half-trees; the past tree
// also contains x itself, while the future tree never tests the root node
// (revisits of x's site by other nodes still count).
//
// Canonical draw order (what makes runs worker-count independent): at each
// node first the offspring count, then (spine nodes) the successor index,
// then the child walk steps in increasing sibling index; a sibling's whole
// subtree is explored depth-first before the next sibling; the spine step
// is drawn after all its node's bushes are done.  Bush children are pushed
// in reverse so pop order equals draw order.
//
// Pruning (hit tests only): a bush node's expansion is skipped when the
// envelope bound beta(y) = |targets| * g_env(dist(y, center) - radius) on
// its subtree's expected visits to the target set falls below
// prune_threshold; beta is accumulated as a one-sided upper bound on the
// lost hit mass.  Nodes within prune_min_radius of the set are never
// pruned.  The spine is never pruned.

struct TreeLimits {
  std::uint64_t node_cap = 10'000'000;  // hard cap on visited nodes
  bool prune = true;                    // spatial pruning for hit tests
  double prune_threshold = 1e-4;
  double prune_min_radius = 8.0;
};

struct TreeStats {
  std::uint64_t nodes = 0;        // nodes visited (root included)
  std::uint64_t spine_nodes = 0;  // spine nodes among them (root included)
  std::uint64_t pruned = 0;       // bush expansions skipped
  double skip_bias = 0.0;         // upper bound on hit mass lost to pruning
  double end_bias = 0.0;          // upper bound on mass beyond the spine cut
  bool node_cap_hit = false;
};

struct TreeOutcome {
  bool hit = false;
  TreeStats stats;
};

// Distinct positions of the critical tree rooted at root (a.s. finite;
// node_cap guards the heavy tail).  No pruning, no target.
PointSet sample_critical_tree(int d, const OffspringLaw& law,
                              const LatticePoint& root, CounterRng& rng,
                              const TreeLimits& limits = {},
                              TreeStats* stats = nullptr);

// Distinct positions of the first n nodes of the future sin-tree at root,
// in canonical order: root, root's own-children bushes, u_1, u_1's
// right-side bushes, u_2, ...  The node budget counts every visited node
// (repeat positions included), so the result is the n-node tree prefix.
PointSet sample_tree_prefix(int d, const OffspringLaw& law,
                            const LatticePoint& root, std::uint64_t n,
                            CounterRng& rng, TreeStats* stats = nullptr);

// Does the future sin-tree at root, with the spine truncated after
// spine_len steps, visit the target set?  The root node itself is not
// tested.  end_bias bounds the hit mass of the part beyond the cut,
// evaluated at the final spine position (needs d >= 5).
// spine_trace, when given, receives u_0..u_L for distribution tests.
TreeOutcome future_tree_hits(const OffspringLaw& law, const PointSet& targets,
                             const LatticePoint& root, std::uint64_t spine_len,
                             CounterRng& rng, const TreeLimits& limits = {},
                             std::vector<LatticePoint>* spine_trace = nullptr);

// Same for the past sin-tree at root: left-side bushes, no own-children
// bushes.  The root node x itself is tested by default (hitting from afar);
// escape events pass test_root = false, exempting the root node while
// revisits of its site by other nodes still count.
TreeOutcome past_tree_hits(const OffspringLaw& law, const PointSet& targets,
                           const LatticePoint& root, std::uint64_t spine_len,
                           CounterRng& rng, const TreeLimits& limits = {},
                           std::vector<LatticePoint>* spine_trace = nullptr,
                           bool test_root = true);

}  // namespace rwcap
