// SPDX-License-Identifier: Apache-2.0
#include "rwcap/bcap.hpp"

#include <stdexcept>

#include "rwcap/green.hpp"
#include "rwcap/minkowski.hpp"

namespace rwcap {

namespace {

void require_bcap_dim(int d) {
  if (d < 5) throw std::invalid_argument("branching capacity needs d >= 5");
}

}  // namespace

MCEstimate bcap_lln(const OffspringLaw& law, const PointSet& a, std::uint64_t n,
                    std::uint64_t replicas, SeedSpec seed, int workers) {
  require_bcap_dim(a.dim());
  if (a.empty()) throw std::invalid_argument("bcap_lln: empty set");
  if (n == 0) throw std::invalid_argument("bcap_lln: n must be >= 1");
  const int d = a.dim();
  auto vals = replicate<double>(
      replicas, seed,
      [&](std::uint64_t, CounterRng& rng) {
        PointSet prefix = sample_tree_prefix(d, law, LatticePoint::origin(d), n, rng);
        PointSet sausage(d, prefix.size() + a.size() * 8);
        minkowski_sum_into(sausage, prefix, a);
        return double(sausage.size()) / double(n);
      },
      workers);
  return estimate_from(vals);
}

MCEstimate bcap_escape(const OffspringLaw& law, const PointSet& a, std::uint64_t spine_len,
                       std::uint64_t replicas, SeedSpec seed, const TreeLimits& limits,
                       int workers) {
  require_bcap_dim(a.dim());
  if (a.empty()) throw std::invalid_argument("bcap_escape: empty set");
  const int d = a.dim();
  green_table(d, 1).far_field();  // warm fits outside the worker pool
  green_table(d, 2).far_field();
  const auto sites = a.sorted_points();

  struct Rep {
    double escapes = 0.0;
    double lost = 0.0;  // unexplored hit mass on the escaped sites
  };
  auto reps = replicate<Rep>(
      replicas, seed,
      [&](std::uint64_t, CounterRng& rng) {
        Rep r;
        for (const auto& x : sites) {
          TreeOutcome out = past_tree_hits(law, a, x, spine_len, rng, limits,
                                           /*spine_trace=*/nullptr, /*test_root=*/false);
          if (!out.hit) {
            r.escapes += 1.0;
            r.lost += out.stats.skip_bias + out.stats.end_bias;
          }
        }
        return r;
      },
      workers);

  std::vector<double> vals(reps.size());
  double lost = 0.0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    vals[i] = reps[i].escapes;
    lost += reps[i].lost;
  }
  lost /= double(reps.size());
  return estimate_from(vals, -lost, 0.0);
}

TreeHitSummary tree_hit_prob(const OffspringLaw& law, const PointSet& targets,
                             const LatticePoint& x, bool past_side, std::uint64_t spine_len,
                             std::uint64_t replicas, SeedSpec seed, const TreeLimits& limits,
                             int workers) {
  require_bcap_dim(targets.dim());
  if (targets.empty()) throw std::invalid_argument("tree_hit_prob: empty target set");
  green_table(targets.dim(), 1).far_field();
  green_table(targets.dim(), 2).far_field();

  struct Rep {
    bool hit = false;
    bool capped = false;
    double skip = 0.0;
    double end = 0.0;
    double nodes = 0.0;
    double spine_nodes = 0.0;
  };
  auto reps = replicate<Rep>(
      replicas, seed,
      [&](std::uint64_t, CounterRng& rng) {
        TreeOutcome out = past_side ? past_tree_hits(law, targets, x, spine_len, rng, limits)
                                    : future_tree_hits(law, targets, x, spine_len, rng, limits);
        Rep r;
        r.hit = out.hit;
        r.capped = out.stats.node_cap_hit;
        if (!out.hit) {  // only a miss leaves recoverable hit mass behind
          r.skip = out.stats.skip_bias;
          r.end = out.stats.end_bias;
        }
        r.nodes = double(out.stats.nodes);
        r.spine_nodes = double(out.stats.spine_nodes);
        return r;
      },
      workers);

  TreeHitSummary s;
  std::uint64_t hits = 0;
  for (const auto& r : reps) {
    hits += r.hit ? 1 : 0;
    s.cap_hits += r.capped ? 1 : 0;
    s.mean_nodes += r.nodes;
    s.mean_spine_nodes += r.spine_nodes;
    s.mean_skip_bias += r.skip;
    s.mean_end_bias += r.end;
  }
  const double n = double(reps.size());
  s.mean_nodes /= n;
  s.mean_spine_nodes /= n;
  s.mean_skip_bias /= n;
  s.mean_end_bias /= n;
  s.prob = bernoulli_estimate(hits, replicas, 0.0, s.mean_skip_bias + s.mean_end_bias);
  return s;
}

double tree_hit_normalizer(int d, const OffspringLaw& law, const LatticePoint& x) {
  require_bcap_dim(d);
  if (law.variance() <= 0.0)
    throw std::invalid_argument("tree_hit_normalizer: degenerate law has no finite normalizer");
  return 0.5 * law.variance() * green_table(d, 2).at(x);
}

}  // namespace rwcap
