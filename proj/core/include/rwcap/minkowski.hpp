// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rwcap/lattice.hpp"

namespace rwcap {

// out := out with A (+) B added; A and B must share out's dimension.
inline void minkowski_sum_into(PointSet& out, const PointSet& a, const PointSet& b) {
  if (a.dim() != b.dim() || a.dim() != out.dim())
    throw std::invalid_argument("minkowski_sum: dimension mismatch");
  const int d = a.dim();
  // iterate the larger set in the inner loop so unpacking cost sits on the
  // smaller one
  const PointSet& outer = (a.size() <= b.size()) ? a : b;
  const PointSet& inner = (a.size() <= b.size()) ? b : a;
  auto outer_pts = outer.points();
  Coord buf[kMaxDim];
  for (const auto& p : outer_pts) {
    inner.for_each([&](const Coord* q) {
      for (int j = 0; j < d; ++j) buf[j] = p[j] + q[j];
      out.insert(buf);
    });
  }
}

inline PointSet minkowski_sum(const PointSet& a, const PointSet& b) {
  // additive reserve: thick sets overlap heavily, so |a||b| would vastly
  // overshoot the output size (and the allocation); the table grows on demand
  PointSet out(a.dim(), (a.size() + b.size()) * 4 + 16);
  minkowski_sum_into(out, a, b);
  return out;
}

// Cardinality of S_1 (+) S_2 (+) ... (+) S_k. Folds in descending size
// order so the smallest factor is applied last; the `budget` guard bounds
// the total number of point insertions (product of intermediate size and
// next factor size, summed) and throws before starting a fold that would
// exceed it.
inline std::uint64_t sausage_volume(const std::vector<const PointSet*>& sets,
                                    std::uint64_t budget = 1000000000ull) {
  if (sets.empty()) throw std::invalid_argument("sausage_volume: no sets");
  for (auto* s : sets) {
    if (!s) throw std::invalid_argument("sausage_volume: null set");
    if (s->dim() != sets[0]->dim())
      throw std::invalid_argument("sausage_volume: dimension mismatch");
    if (s->empty()) return 0;
  }
  if (sets.size() == 1) return sets[0]->size();
  std::vector<const PointSet*> order(sets);
  std::stable_sort(order.begin(), order.end(),
                   [](const PointSet* x, const PointSet* y) { return x->size() > y->size(); });
  std::uint64_t spent = 0;
  PointSet acc;
  const PointSet* accp = order[0];
  for (std::size_t i = 1; i < order.size(); ++i) {
    std::uint64_t cost = std::uint64_t(accp->size()) * order[i]->size();
    spent += cost;
    if (spent > budget)
      throw std::length_error("sausage_volume: insertion budget exceeded (" +
                              std::to_string(spent) + " > " + std::to_string(budget) + ")");
    PointSet next(accp->dim(), accp->size() + order[i]->size() * 4);
    minkowski_sum_into(next, *accp, *order[i]);
    acc = std::move(next);
    accp = &acc;
  }
  return acc.size();
}

}  // namespace rwcap
