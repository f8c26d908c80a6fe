// SPDX-License-Identifier: Apache-2.0
// Microbenchmarks for the hot paths: Green function evaluation, point-set
// churn, walk stepping, Minkowski folding, sin-tree generation and the
// conditioned-spine estimator.  Throughput counters report items/sec where
// the unit of work is obvious (steps, nodes, inserted points).
#include <benchmark/benchmark.h>

#include "rwcap/bcap.hpp"
#include "rwcap/bushfield.hpp"
#include "rwcap/capacity.hpp"
#include "rwcap/green.hpp"
#include "rwcap/lattice.hpp"
#include "rwcap/minkowski.hpp"
#include "rwcap/offspring.hpp"
#include "rwcap/rng.hpp"
#include "rwcap/sin_tree.hpp"
#include "rwcap/walk.hpp"

namespace {

using namespace rwcap;

const GreenTable& table51() {
  static GreenTable t(5, 1);
  return t;
}
const GreenTable& table52() {
  static GreenTable t(5, 2);
  return t;
}

void BM_GreenMemoNear(benchmark::State& state) {
  const GreenTable& t = table51();
  LatticePoint x(5, {3, -2, 1, 0, 4});
  t.at(x);  // warm the memo; steady state is a hash probe
  for (auto _ : state) benchmark::DoNotOptimize(t.at(x));
}
BENCHMARK(BM_GreenMemoNear);

void BM_GreenFar(benchmark::State& state) {
  const GreenTable& t = table52();
  LatticePoint x(5, {40, 17, -9, 3, 22});
  t.at(x);
  for (auto _ : state) benchmark::DoNotOptimize(t.at(x));
}
BENCHMARK(BM_GreenFar);

void BM_GreenQuadrature(benchmark::State& state) {
  const GreenTable& t = table51();
  Coord x[5] = {7, 3, 0, -2, 5};
  for (auto _ : state) benchmark::DoNotOptimize(t.quadrature_value(x));
}
BENCHMARK(BM_GreenQuadrature)->Unit(benchmark::kMicrosecond);

void BM_WalkSteps(benchmark::State& state) {
  const std::uint64_t steps = 1 << 14;
  CounterRng rng(7, 0);
  WalkCursor cur(LatticePoint::origin(5));
  for (auto _ : state)
    for (std::uint64_t i = 0; i < steps; ++i) {
      cur.step(rng);
      benchmark::DoNotOptimize(cur.key());
    }
  state.SetItemsProcessed(state.iterations() * std::int64_t(steps));
}
BENCHMARK(BM_WalkSteps);

void BM_RangeInsert(benchmark::State& state) {
  const std::uint64_t n = std::uint64_t(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    CounterRng rng(11, stream++);
    PointSet r = walk_range(5, n, rng);
    benchmark::DoNotOptimize(r.size());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(n));
}
BENCHMARK(BM_RangeInsert)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);

void BM_MinkowskiFold(benchmark::State& state) {
  const std::uint64_t n = std::uint64_t(state.range(0));
  CounterRng rng(13, 0);
  PointSet r1 = walk_range(5, n, rng);
  CounterRng rng2(13, 1);
  PointSet r2 = walk_range(5, n, rng2);
  PointSet a(5);
  a.insert(LatticePoint::origin(5));
  a.insert(LatticePoint(5, {1, 0, 0, 0, 0}));
  std::vector<const PointSet*> sets = {&r1, &r2, &a};
  for (auto _ : state) benchmark::DoNotOptimize(sausage_volume(sets));
  state.SetItemsProcessed(state.iterations() * std::int64_t(r1.size() * r2.size() * a.size()));
}
BENCHMARK(BM_MinkowskiFold)->Arg(1 << 8)->Arg(1 << 10)->Unit(benchmark::kMillisecond);

void BM_TreePrefix(benchmark::State& state) {
  OffspringLaw law = OffspringLaw::parse("geometric_half");
  const std::uint64_t n = 1 << 16;
  std::uint64_t stream = 0;
  for (auto _ : state) {
    CounterRng rng(17, stream++);
    TreeStats stats;
    PointSet t = sample_tree_prefix(5, law, LatticePoint::origin(5), n, rng, &stats);
    benchmark::DoNotOptimize(t.size());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(n));
  state.SetLabel("items = tree nodes");
}
BENCHMARK(BM_TreePrefix)->Unit(benchmark::kMillisecond);

void BM_PastTreeEscape(benchmark::State& state) {
  OffspringLaw law = OffspringLaw::parse("geometric_half");
  PointSet a(5);
  a.insert(LatticePoint::origin(5));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    CounterRng rng(19, stream++);
    auto out = past_tree_hits(law, a, LatticePoint::origin(5), 1000, rng, {}, nullptr, false);
    benchmark::DoNotOptimize(out.hit);
  }
}
BENCHMARK(BM_PastTreeEscape)->Unit(benchmark::kMicrosecond);

void BM_SpineEscape(benchmark::State& state) {
  OffspringLaw law = OffspringLaw::parse("geometric_half");
  PointSet a(5);
  a.insert(LatticePoint::origin(5));
  static BushField field(law, a, {.box_radius = 9, .sweeps = 120});
  const std::uint64_t spine_len = 500, replicas = 8;
  std::uint64_t stream = 0;
  for (auto _ : state) {
    auto e = bcap_escape_spine(field, spine_len, replicas, SeedSpec{23, stream}, 1);
    stream += replicas;
    benchmark::DoNotOptimize(e.mean);
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(spine_len * replicas));
  state.SetLabel("items = spine steps");
}
BENCHMARK(BM_SpineEscape)->Unit(benchmark::kMillisecond);

void BM_CapEscapeReplica(benchmark::State& state) {
  PointSet a(5);
  a.insert(LatticePoint::origin(5));
  a.insert(LatticePoint(5, {1, 0, 0, 0, 0}));
  a.insert(LatticePoint(5, {0, 2, 0, 0, 0}));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    CounterRng rng(29, stream++);
    auto s = escape_sum_once(a, 4000, 1.0, rng);
    benchmark::DoNotOptimize(s.sum);
  }
}
BENCHMARK(BM_CapEscapeReplica)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
