// SPDX-License-Identifier: Apache-2.0
#include "rwcap/sausage_limits.hpp"

#include <cmath>
#include <stdexcept>

#include "rwcap/bcap.hpp"
#include "rwcap/green.hpp"
#include "rwcap/kernel.hpp"
#include "rwcap/minkowski.hpp"
#include "rwcap/walk.hpp"

namespace rwcap {

namespace {

void require_finite(int d, int N) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (d <= 2 * N)
    throw std::invalid_argument("the N-fold sausage limit is finite only for d > 2N");
}

// Largest pairwise distance within A u {0}.
double diam_with_origin(const PointSet& a) {
  auto pts = a.sorted_points();
  pts.push_back(LatticePoint::origin(a.dim()));
  double m = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double r = (pts[i] - pts[j]).norm();
      if (r > m) m = r;
    }
  return m;
}

std::uint64_t auto_horizon(const PointSet& a) {
  double s = 20.0 * (1.0 + diam_with_origin(a));
  return std::uint64_t(s * s) + 1;
}

// sum_{s>T} sup_y p_s(y) <= 2 (d/2pi)^{d/2} T^{1-d/2} / (d/2 - 1), with a
// 1.5x safety factor on the local CLT envelope.
double walk_tail_sup(int d, std::uint64_t T) {
  double half_d = 0.5 * double(d);
  double c = 2.0 * std::pow(double(d) / (2.0 * M_PI), half_d) / (half_d - 1.0);
  return 1.5 * c * std::pow(double(T), 1.0 - half_d);
}

}  // namespace

MCEstimate f_N_lln(int d, int N, const PointSet& a, std::uint64_t n, std::uint64_t replicas,
                   SeedSpec seed, int workers, std::uint64_t fold_budget) {
  require_finite(d, N);
  if (a.dim() != d) throw std::invalid_argument("f_N_lln: dimension mismatch");
  if (a.empty()) throw std::invalid_argument("f_N_lln: empty set");
  if (n == 0) throw std::invalid_argument("f_N_lln: n must be >= 1");
  const double scale = std::pow(double(n), double(N));
  auto vals = replicate<double>(
      replicas, seed,
      [&](std::uint64_t, CounterRng& rng) {
        std::vector<PointSet> ranges;
        ranges.reserve(std::size_t(N));
        for (int i = 0; i < N; ++i) ranges.push_back(walk_range(d, n, rng));
        std::vector<const PointSet*> sets;
        for (const auto& r : ranges) sets.push_back(&r);
        sets.push_back(&a);
        return double(sausage_volume(sets, fold_budget)) / scale;
      },
      workers);
  return estimate_from(vals);
}

MCEstimate f_N_dual(int d, int N, const PointSet& a, std::uint64_t replicas, SeedSpec seed,
                    std::uint64_t horizon, int workers) {
  require_finite(d, N);
  if (N > 2) throw std::invalid_argument("f_N_dual: implemented for N in {1,2}");
  if (a.dim() != d) throw std::invalid_argument("f_N_dual: dimension mismatch");
  if (a.empty()) throw std::invalid_argument("f_N_dual: empty set");
  const std::uint64_t T = horizon ? horizon : auto_horizon(a);
  const auto sites = a.sorted_points();
  const KeyPacker packer(d);
  const LatticePoint o = LatticePoint::origin(d);

  auto vals = replicate<double>(
      replicas, seed,
      [&](std::uint64_t, CounterRng& rng) {
        // ranges, in canonical draw order: walk 1 forward; then (N = 2)
        // walk 2 backward and forward.  Forward ranges are open at time 0.
        PointSet f1(d, std::size_t(T));
        accumulate_walk_range(f1, T, rng, o, /*include_start=*/false);
        PointSet d2, f2;
        if (N == 2) {
          d2 = PointSet(d, std::size_t(2 * T));
          f2 = PointSet(d, std::size_t(T));
          accumulate_walk_range(d2, T, rng, o, /*include_start=*/true);  // backward half + 0
          WalkCursor w(o);
          for (std::uint64_t t = 0; t < T; ++t) {
            w.step(rng);
            d2.insert_key(w.key());
            f2.insert_key(w.key());
          }
        }
        const auto front = f1.points();  // reused across sites of A

        double escaped = 0.0;
        Coord buf[kMaxDim];
        for (const auto& s : sites) {
          bool ok = true;
          if (N == 2) {
            // last walk first: (R^2(0,inf) + a) must avoid A
            for (const auto& al : sites) {
              if (f2.contains((al - s).data())) {
                ok = false;
                break;
              }
            }
            // then (R^1(0,inf) + D_2 + a) must avoid A
            if (ok) {
              for (const auto& p : front) {
                for (const auto& al : sites) {
                  for (int j = 0; j < d; ++j) buf[j] = al[j] - s[j] - p[j];
                  if (d2.contains(buf)) {
                    ok = false;
                    break;
                  }
                }
                if (!ok) break;
              }
            }
          } else {
            for (const auto& al : sites) {
              if (f1.contains((al - s).data())) {
                ok = false;
                break;
              }
            }
          }
          if (ok) escaped += 1.0;
        }
        return escaped;
      },
      workers);

  // Truncation can only fail to see a late visit, so the estimate is biased
  // up.  Per (a, alpha) pair: the single-walk tail costs at most tail_sup;
  // each convolution with a double-sided range adds a factor 2 g(0) and a
  // second tail term of the same form.
  const double tail = walk_tail_sup(d, T);
  const double g0 = green_origin(d);
  const double pairs = double(a.size()) * double(a.size());
  const double lo = (N == 2) ? -pairs * (1.0 + 4.0 * g0) * tail : -pairs * tail;
  MCEstimate e = estimate_from(vals, lo, 0.0);
  return e;
}

std::vector<RatePoint> sausage_capacity_rate(int d, const PointSet& a,
                                             const std::vector<std::uint64_t>& ns,
                                             std::uint64_t replicas, SeedSpec seed, int workers) {
  std::vector<RatePoint> out;
  out.reserve(ns.size());
  std::uint64_t offset = 0;
  for (std::uint64_t n : ns) {
    RatePoint p;
    p.n = n;
    p.rate = f_N_lln(d, 1, a, n, replicas, seed.at(offset), workers);
    out.push_back(p);
    offset += replicas;
  }
  return out;
}

ChainResult tree_sausage_chain(const OffspringLaw& law, const PointSet& a,
                               const ChainParams& params, SeedSpec seed, int workers) {
  const int d = a.dim();
  if (d < 5) throw std::invalid_argument("tree_sausage_chain needs d >= 5");
  ChainResult r;
  r.bcap = bcap_escape(law, a, params.escape_spine_len, params.escape_replicas, seed,
                       params.limits, workers);
  r.cap_low = cap_gamma(d, double(d - 4), a, params.qp_tol);
  r.f2_walks = f_N_dual(d, 2, a, params.dual_replicas, seed.at(params.escape_replicas), 0, workers);
  r.f2_tree = bcap_lln(law, a, params.lln_n, params.lln_replicas,
                       seed.at(params.escape_replicas + params.dual_replicas), workers);
  r.ratio_bcap_cap = r.bcap.mean / r.cap_low.value;
  r.ratio_walks_cap = r.f2_walks.mean / r.cap_low.value;
  r.ratio_tree_walks = r.f2_tree.mean / r.f2_walks.mean;
  return r;
}

}  // namespace rwcap
