// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rwcap/lattice.hpp"
#include "rwcap/rng.hpp"

namespace rwcap {

// Simple random walk position with an incrementally maintained packed key,
// so range accumulation costs one table probe per step instead of a repack.
class WalkCursor {
 public:
  explicit WalkCursor(const LatticePoint& start)
      : pk_(start.dim()), dim_(start.dim()), bound_(pk_.coord_bound()) {
    for (int j = 0; j < dim_; ++j) c_[j] = start[j];
    key_ = pk_.pack(c_);
  }

  int dim() const noexcept { return dim_; }
  const Coord* coords() const noexcept { return c_; }
  KeyPacker::Key key() const noexcept { return key_; }
  LatticePoint point() const { return LatticePoint(dim_, c_); }

  std::int64_t norm2() const noexcept {
    std::int64_t s = 0;
    for (int j = 0; j < dim_; ++j) s += std::int64_t(c_[j]) * c_[j];
    return s;
  }

  // One uniform nearest-neighbour step.
  void step(CounterRng& rng) {
    std::uint32_t dir = rng.uniform_int(2u * std::uint32_t(dim_));
    int axis = int(dir >> 1);
    if (dir & 1u) {
      if (c_[axis] >= bound_) throw std::out_of_range("walk left the packable box");
      ++c_[axis];
      key_ += pk_.lane_unit(axis);
    } else {
      if (c_[axis] <= -bound_) throw std::out_of_range("walk left the packable box");
      --c_[axis];
      key_ -= pk_.lane_unit(axis);
    }
  }

 private:
  KeyPacker pk_;
  Coord c_[kMaxDim];
  KeyPacker::Key key_ = 0;
  int dim_;
  Coord bound_;
};

// Inserts the range {X_a,...,X_n} of an n-step walk started at `start` into
// `out` (a=0 with include_start, a=1 without). Returns the endpoint X_n.
inline LatticePoint accumulate_walk_range(PointSet& out, std::uint64_t n, CounterRng& rng,
                                          const LatticePoint& start, bool include_start = true) {
  WalkCursor w(start);
  if (include_start) out.insert_key(w.key());
  for (std::uint64_t t = 0; t < n; ++t) {
    w.step(rng);
    out.insert_key(w.key());
  }
  return w.point();
}

inline LatticePoint accumulate_walk_occupation(PointCount& out, std::uint64_t n, CounterRng& rng,
                                               const LatticePoint& start,
                                               bool include_start = true) {
  WalkCursor w(start);
  if (include_start) out.add_key(w.key());
  for (std::uint64_t t = 0; t < n; ++t) {
    w.step(rng);
    out.add_key(w.key());
  }
  return w.point();
}

// Range of an n-step walk from the origin, start included.
inline PointSet walk_range(int d, std::uint64_t n, CounterRng& rng) {
  PointSet out(d, std::size_t(double(n) * 0.9) + 4);
  accumulate_walk_range(out, n, rng, LatticePoint::origin(d), true);
  return out;
}

// Range of a two-sided walk: `back` steps of one walk and `fwd` steps of an
// independent walk, glued at the origin (which is included). Step reversal
// is distribution-neutral here, so the backward half is just another walk.
// Draw order: backward half first, then forward, on the same stream.
inline PointSet double_sided_range(int d, std::uint64_t back, std::uint64_t fwd, CounterRng& rng) {
  PointSet out(d, std::size_t(double(back + fwd) * 0.9) + 4);
  accumulate_walk_range(out, back, rng, LatticePoint::origin(d), true);
  accumulate_walk_range(out, fwd, rng, LatticePoint::origin(d), false);
  return out;
}

// Calls visit(cursor) after every step; visit returns false to stop early.
// Returns the number of steps actually taken.
template <class F>
std::uint64_t walk_visit(std::uint64_t n, CounterRng& rng, const LatticePoint& start, F&& visit) {
  WalkCursor w(start);
  for (std::uint64_t t = 0; t < n; ++t) {
    w.step(rng);
    if (!visit(w)) return t + 1;
  }
  return n;
}

// Exact distribution of one coordinate of a d-dimensional walk after n
// steps: the coordinate moves -1/+1 with probability 1/(2d) each and holds
// otherwise. Returns a vector of size 2n+1; index k holds P(X_n(0) = k-n).
inline std::vector<double> srw_coord_pmf(int d, int n) {
  check_dim(d);
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  double pm = 1.0 / (2.0 * d);
  double ph = 1.0 - 2.0 * pm;
  std::vector<double> cur(std::size_t(2 * n + 1), 0.0), next(std::size_t(2 * n + 1), 0.0);
  cur[std::size_t(n)] = 1.0;
  for (int t = 0; t < n; ++t) {
    int lo = n - t - 1, hi = n + t + 1;
    for (int k = lo; k <= hi; ++k) {
      double v = ph * cur[std::size_t(k)];
      if (k > 0) v += pm * cur[std::size_t(k - 1)];
      if (k < 2 * n) v += pm * cur[std::size_t(k + 1)];
      next[std::size_t(k)] = v;
    }
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace rwcap
