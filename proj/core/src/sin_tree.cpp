// SPDX-License-Identifier: Apache-2.0
#include "rwcap/sin_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "rwcap/green.hpp"

namespace rwcap {

namespace {

struct Node {
  Coord c[kMaxDim];
  KeyPacker::Key key;
};

class TreeEngine {
 public:
  TreeEngine(int d, const OffspringLaw& law, CounterRng& rng, const TreeLimits& lim)
      : packer_(d), d_(d), bound_(packer_.coord_bound()), law_(&law), rng_(&rng), lim_(lim) {}

  // collection mode
  PointSet* collect = nullptr;
  std::uint64_t budget = std::numeric_limits<std::uint64_t>::max();

  // hit mode
  const PointSet* targets = nullptr;
  std::vector<LatticePoint> target_sites;  // for the spine-cut tail bound
  Coord center[kMaxDim] = {};
  double target_radius = 0.0;
  double n_targets = 0.0;
  const GreenTable* g1 = nullptr;  // envelope for pruning and tail bounds
  const GreenTable* g2 = nullptr;  // second convolution power, d >= 5

  TreeStats stats;
  bool hit = false;

  Node make_node(const LatticePoint& p) const {
    Node n;
    std::memset(n.c, 0, sizeof n.c);
    for (int j = 0; j < d_; ++j) n.c[j] = p[j];
    n.key = packer_.pack(n.c);
    return n;
  }

  LatticePoint to_point(const Node& n) const { return LatticePoint(d_, n.c); }

  // One fresh uniform nearest-neighbour step off `from`.
  Node stepped(const Node& from) {
    std::uint32_t dir = rng_->uniform_int(2u * std::uint32_t(d_));
    int axis = int(dir >> 1);
    Node n = from;
    if (dir & 1u) {
      if (n.c[axis] >= bound_) throw std::out_of_range("tree left the packable box");
      ++n.c[axis];
      n.key += packer_.lane_unit(axis);
    } else {
      if (n.c[axis] <= -bound_) throw std::out_of_range("tree left the packable box");
      --n.c[axis];
      n.key -= packer_.lane_unit(axis);
    }
    return n;
  }

  // Records/tests one node; false stops the whole exploration.
  bool visit(const Node& n, bool test = true) {
    ++stats.nodes;
    if (collect) collect->insert_key(n.key);
    if (test && targets && targets->contains_key(n.key)) {
      hit = true;
      return false;
    }
    if (stats.nodes >= lim_.node_cap) {
      stats.node_cap_hit = true;
      return false;
    }
    return stats.nodes < budget;
  }

  // Envelope bound on the expected visits to the target set by a critical
  // tree rooted at n; a subtree whose bound is below the threshold is
  // dropped and the bound booked as one-sided bias.
  bool should_prune(const Node& n, double* beta_out) {
    if (!lim_.prune || !targets) return false;
    double s = 0.0;
    for (int j = 0; j < d_; ++j) {
      double t = double(n.c[j]) - double(center[j]);
      s += t * t;
    }
    double dr = std::sqrt(s) - target_radius;
    if (dr < lim_.prune_min_radius) return false;
    double beta = n_targets * g1->envelope(dr);
    if (beta >= lim_.prune_threshold) return false;
    *beta_out = beta;
    return true;
  }

  // Offspring of a bush node: count first, then all child steps in sibling
  // order; children go on the stack reversed so pop order equals draw order
  // and each subtree is finished before the next sibling starts.
  void expand(const Node& n) {
    double beta = 0.0;
    if (should_prune(n, &beta)) {
      ++stats.pruned;
      stats.skip_bias += beta;
      return;
    }
    int z = law_->sample(*rng_);
    if (z <= 0) return;
    std::size_t at = stack_.size();
    for (int i = 0; i < z; ++i) stack_.push_back(stepped(n));
    std::reverse(stack_.begin() + std::ptrdiff_t(at), stack_.end());
  }

  // Critical tree rooted at `root` (which is visited here), depth first.
  bool explore_bush(const Node& root) {
    if (!visit(root)) return false;
    const std::size_t base = stack_.size();
    expand(root);
    while (stack_.size() > base) {
      Node n = stack_.back();
      stack_.pop_back();
      if (!visit(n)) {
        stack_.resize(base);
        return false;
      }
      expand(n);
    }
    return true;
  }

  // `count` sibling bushes hanging off `u`: steps drawn in sibling order
  // first, then each subtree explored in full.
  bool bushes(const Node& u, int count) {
    roots_.clear();
    for (int i = 0; i < count; ++i) roots_.push_back(stepped(u));
    for (int i = 0; i < count; ++i)
      if (!explore_bush(roots_[std::size_t(i)])) return false;
    return true;
  }

  // The sin-tree walker. future: bushes right of the successor plus the
  // root's own children; past: bushes left of the successor only. The root
  // node is tested only on the past side.
  void run_sin(Node u, std::uint64_t spine_len, bool future, bool test_root,
               std::vector<LatticePoint>* trace) {
    stats.spine_nodes = 1;
    if (trace) trace->push_back(to_point(u));
    bool go = visit(u, test_root);
    if (go && future) {
      int own = law_->sample_root(*rng_) - 1;  // root brood minus the spine link
      if (own > 0) go = bushes(u, own);
    }
    if (go) {
      for (std::uint64_t i = 0; i < spine_len; ++i) {
        u = stepped(u);  // spine step, drawn after the previous node's bushes
        ++stats.spine_nodes;
        if (trace) trace->push_back(to_point(u));
        if (!visit(u)) break;
        int z = law_->sample_size_biased(*rng_);
        auto j = rng_->uniform_int(std::uint32_t(z));
        int count = future ? z - 1 - int(j) : int(j);
        if (count > 0 && !bushes(u, count)) break;
      }
    }
    finish_tail_bound(u);
  }

  // One-sided bound on the hit mass beyond the spine cut, evaluated at the
  // last spine position: remaining spine visits are bounded by g and the
  // bushes they carry by (sigma^2/2) G_2, site by site.
  void finish_tail_bound(const Node& u) {
    if (!targets || hit || !g2) return;
    const double half_var = 0.5 * law_->variance();
    double b = 0.0;
    for (const auto& a : target_sites) {
      double s = 0.0;
      for (int j = 0; j < d_; ++j) {
        double t = double(u.c[j]) - double(a[j]);
        s += t * t;
      }
      double r = std::max(1.0, std::sqrt(s));
      b += g1->envelope(r) + half_var * g2->envelope(r);
    }
    stats.end_bias = b;
  }

 private:
  KeyPacker packer_;
  int d_;
  Coord bound_;
  const OffspringLaw* law_;
  CounterRng* rng_;
  TreeLimits lim_;
  std::vector<Node> stack_;
  std::vector<Node> roots_;
};

TreeEngine make_hit_engine(int d, const OffspringLaw& law, const PointSet& targets,
                           CounterRng& rng, const TreeLimits& limits) {
  if (d < 5)
    throw std::invalid_argument("tree hit tests need d >= 5 for finite tail bounds");
  TreeEngine eng(d, law, rng, limits);
  eng.targets = &targets;
  eng.target_sites = targets.sorted_points();
  LatticePoint c = targets.centroid_rounded();
  for (int j = 0; j < d; ++j) eng.center[j] = c[j];
  eng.target_radius = targets.radius_about(c);
  eng.n_targets = double(targets.size());
  eng.g1 = &green_table(d, 1);
  eng.g2 = &green_table(d, 2);
  eng.g1->far_field();  // warm the fits before the hot loop
  eng.g2->far_field();
  return eng;
}

}  // namespace

PointSet sample_critical_tree(int d, const OffspringLaw& law, const LatticePoint& root,
                              CounterRng& rng, const TreeLimits& limits, TreeStats* stats) {
  check_dim(d);
  TreeLimits lim = limits;
  lim.prune = false;
  TreeEngine eng(d, law, rng, lim);
  PointSet out(d, 64);
  eng.collect = &out;
  eng.explore_bush(eng.make_node(root));
  if (stats) *stats = eng.stats;
  return out;
}

PointSet sample_tree_prefix(int d, const OffspringLaw& law, const LatticePoint& root,
                            std::uint64_t n, CounterRng& rng, TreeStats* stats) {
  check_dim(d);
  PointSet out(d, std::size_t(double(n) * 0.8) + 4);
  if (n == 0) {
    if (stats) *stats = TreeStats{};
    return out;
  }
  TreeLimits lim;
  lim.prune = false;
  lim.node_cap = std::numeric_limits<std::uint64_t>::max();
  TreeEngine eng(d, law, rng, lim);
  eng.collect = &out;
  eng.budget = n;
  eng.run_sin(eng.make_node(root), std::numeric_limits<std::uint64_t>::max(),
              /*future=*/true, /*test_root=*/false, nullptr);
  if (stats) *stats = eng.stats;
  return out;
}

TreeOutcome future_tree_hits(const OffspringLaw& law, const PointSet& targets,
                             const LatticePoint& root, std::uint64_t spine_len, CounterRng& rng,
                             const TreeLimits& limits, std::vector<LatticePoint>* spine_trace) {
  TreeEngine eng = make_hit_engine(targets.dim(), law, targets, rng, limits);
  eng.run_sin(eng.make_node(root), spine_len, /*future=*/true, /*test_root=*/false, spine_trace);
  return {eng.hit, eng.stats};
}

TreeOutcome past_tree_hits(const OffspringLaw& law, const PointSet& targets,
                           const LatticePoint& root, std::uint64_t spine_len, CounterRng& rng,
                           const TreeLimits& limits, std::vector<LatticePoint>* spine_trace,
                           bool test_root) {
  TreeEngine eng = make_hit_engine(targets.dim(), law, targets, rng, limits);
  eng.run_sin(eng.make_node(root), spine_len, /*future=*/false, test_root, spine_trace);
  return {eng.hit, eng.stats};
}

}  // namespace rwcap
