// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "rwcap/lattice.hpp"
#include "rwcap/mc.hpp"
#include "rwcap/offspring.hpp"
#include "rwcap/sausage_limits.hpp"
#include "rwcap/sin_tree.hpp"

namespace rwcap {

// Hitting estimates for sums of walk ranges, local-time moment checks
// against Green predictions, and the deterministic apparatus behind the
// second-moment small-terms identity.

// ---- hitting probability of A by z + R^1[0,inf) + ... + R^N[0,inf) ----

struct WalkHitResult {
  MCEstimate prob;            // Bernoulli; bias_hi bounds the truncation loss
  std::uint64_t horizon = 0;  // per-walk step cap actually used
};

// horizon = 0 picks (10 |z|)^2.  N = 2 streams the second walk against the
// first walk's range (|A| probes per step, no stage set); N >= 3 builds the
// stage sets S_i = S_{i-1} - R^i and streams the last walk.  Truncation can
// only miss hits, so the bias interval is one-sided above.
WalkHitResult hit_prob_sum_walks(int d, int N, const PointSet& a, const LatticePoint& z,
                                 std::uint64_t replicas, SeedSpec seed, std::uint64_t horizon = 0,
                                 int workers = 0);

// ---- hitting ratio across |z| shells vs the low-order capacity ----

struct ShellHit {
  double shell = 0.0;  // |z| (z = shell * e_1)
  LatticePoint z;
  MCEstimate prob;
  double ratio = 0.0;  // |z| * prob / cap_low
  bool censored = false;  // zero hits observed
};

struct KsRatioResult {
  std::vector<ShellHit> rows;
  double cap_low = 0.0;       // Cap_{d-2N}(A), radial kernel route
  double slope = 0.0;         // LS slope of log prob vs log |z|
  double band_max_over_min = 0.0;  // over non-censored ratios
};

KsRatioResult ks_ratio_experiment(int d, int N, const PointSet& a,
                                  const std::vector<double>& shells,
                                  const std::vector<std::uint64_t>& replicas, SeedSpec seed,
                                  int workers = 0);

// ---- past-tree vs walk-pair hitting across shells (d = 5, N = 2) ----

struct EquivRow {
  double shell = 0.0;
  LatticePoint x;
  MCEstimate tree_prob;  // past sin-tree at x hits A
  MCEstimate walk_prob;  // x + R^1 + R^2 hits A
  double tree_norm = 0.0;  // (sigma^2/2) G_2(x), reported for scale
  double ratio = 0.0;      // tree_prob / walk_prob
  bool censored = false;   // no signal on either side
};

struct EquivResult {
  std::vector<EquivRow> rows;
  double band_max_over_min = 0.0;
  double field_rel_error = 0.0;  // declared accuracy of the bush field used
};

// The tree side is spine-conditioned (bushfield.hpp): bushes integrate out
// through the tabulated bush-hit field, so far shells keep their full hit
// mass instead of losing it to spatial pruning; per-shell accuracy is the
// field's declared error, booked in tree_prob's bias interval.  The spine
// is truncated after (spine_scale |x|)^2 steps and closed analytically.
EquivResult intersection_equivalence(const OffspringLaw& law, const PointSet& a,
                                     const std::vector<double>& shells,
                                     const std::vector<std::uint64_t>& tree_replicas,
                                     const std::vector<std::uint64_t>& walk_replicas,
                                     SeedSpec seed, double spine_scale = 5.0, int workers = 0);

// ---- local-time moments of the N-walk sum against Green predictions ----

struct MomentCheck {
  MCEstimate ell_a;  // E[l(a)], prediction G_N(a - z); bias_hi = tail bound
  MCEstimate ell_b;
  MCEstimate ell_ab;      // E[l(a) l(b)], raw
  double pred_a = 0.0;    // G_N(a - z)
  double pred_b = 0.0;
  double frame = 0.0;     // (G_N(z-a) + G_N(z-b)) G_N(a-b)
  double chat = 0.0;      // ell_ab.mean / frame
  double chat_se = 0.0;
  std::uint64_t horizon = 0;
};

// l(y) counts tuples (m_1..m_N) in [0,T]^N with z + sum_i X^i_{m_i} = y.
// horizon = 0 picks max(400, (5 |z|)^2) per walk.  N in {1, 2}.
MomentCheck local_time_moment_check(int d, int N, const LatticePoint& a, const LatticePoint& b,
                                    const LatticePoint& z, std::uint64_t replicas, SeedSpec seed,
                                    std::uint64_t horizon = 0, int workers = 0);

// ---- small-terms identity apparatus (deterministic) ----

// A nonnegative series truncation: the exact value lies in
// [value, value + tail].
struct TailedValue {
  double value = 0.0;
  double tail = 0.0;
};

// F_{k,l,m}(z,a,b) = sum_w G_k(z-b+w) G_l(w) G_m(a-b+w), summed over
// |w| <= radius with an analytic envelope bound on the rest.
TailedValue f_klm(int d, int k, int l, int m, const LatticePoint& z, const LatticePoint& a,
                  const LatticePoint& b, double radius);

// Max relative deviation of the discrete resolvent identity
// (I - P) G_{N+1} = G_N over probe points with |v| <= probe_radius.  This
// is the semigroup relation g * G_N = G_{N+1} in local form: it has no
// truncation tail, so it isolates quadrature error.
double resolvent_probe_dev(int d, int N, double probe_radius = 2.0);

// Exact check of the variable-change algebra behind the small-terms
// identity on compactly supported surrogate kernels in Z^3: both sides of
//   sum_{y,y'} [h(y)+h(y')] h(y-y') F^h(z, a+y, b+y')
//     = F^{hh,h}_{...} reorganized form
// are finite sums evaluated exactly; returns the max absolute deviation.
double surrogate_identity_dev();

struct SmalltermsCheck {
  double resolvent_dev_1 = 0.0;  // (I-P) G_2 = G_1
  double resolvent_dev_2 = 0.0;  // (I-P) G_3 = G_2
  double surrogate_dev = 0.0;
  TailedValue f_kp1_lp1_m;  // F_{k+1,l+1,m}(z,a,b)
  TailedValue f_kp1_l_mp1;  // F_{k+1,l,m+1}(z,a,b)
  double max_rel_tail = 0.0;  // worst F enclosure width / value
};

// Certifies the identity
//   sum_{y,y'} [g(y)+g(y')] g(y-y') F_{k,l,m}(z, a+y, b+y')
//     = F_{k+1,l+1,m}(z,a,b) + F_{k+1,l,m+1}(z,a,b)
// for k = l = m = 1 at one (z,a,b): semigroup content via resolvent
// probes, bookkeeping via the exact surrogate check, and the right side
// instantiated with enclosed tails (w-ball of radius |z| + 8).
SmalltermsCheck smallterms_identity_check(int d, const LatticePoint& z, const LatticePoint& a,
                                          const LatticePoint& b);

// ---- capacity-of-sausage characterizations ----

// E[Cap_{d-2(N-1)}(R_n + A)] / n over an n grid (radial-kernel capacity,
// QP route; d - 2(N-1) = 3 in the d = 5, N = 2 regime).
std::vector<RatePoint> charact_experiment(int d, int N, const PointSet& a,
                                          const std::vector<std::uint64_t>& ns,
                                          std::uint64_t replicas, SeedSpec seed,
                                          double qp_tol = 1e-8, int workers = 0);

// d = 4 log-corrected rate: (log n / n) * cap(R_n + A) with the capacity
// estimated by escape sampling on a site subsample.  The escape horizon
// truncation only inflates the estimate; its bound lands in bias_lo.
std::vector<RatePoint> d4_capacity_rate(const PointSet& a, const std::vector<std::uint64_t>& ns,
                                        std::uint64_t replicas, std::uint64_t horizon,
                                        double site_fraction, SeedSpec seed, int workers = 0);

}  // namespace rwcap
