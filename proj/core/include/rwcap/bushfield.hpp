// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "rwcap/lattice.hpp"
#include "rwcap/mc.hpp"
#include "rwcap/offspring.hpp"
#include "rwcap/rng.hpp"

namespace rwcap {

class GreenTable;

// Exact hit probabilities of one critical bush against a fixed finite set,
// tabulated on a centered box by the monotone generation recursion
//
//   v_{k+1}(y) = 1_A(y) + (1 - 1_A(y)) * (1 - phi(qbar_k(y))),
//   qbar_k(y)  = 1 - (1/2d) sum_e v_k(y + e),
//
// where phi is the offspring pgf: v_k(y) = P(bush from y reaches A within k
// generations) increases to v(y) = P(bush from y ever reaches A).  Lineages
// leaving the box are closed with the boundary field kappa * m(y), where
// m(y) = sum_i w_i g(y - a_i) is the equilibrium-weighted multipole profile
// (a single radial pole misses multi-site sets by order site-spread over
// radius): an absorbing first phase fits kappa on an interior shell, then
// boundary and fit are iterated (Aitken-accelerated) to their fixed point,
// since the harmonic deficit of a wrong ring bleeds well into the box.  The
// fit spread and the iteration residual are recorded, never hidden.
//
// The point of the field: conditionally on the spine, the bushes of a
// sin-tree are independent, so hit and escape probabilities collapse to
// product functionals of one random walk,
//
//   P(past tree at x avoids A)
//     = E[ prod_{i>=1} 1(u_i not in A) * psi(qbar(u_i)) ],
//
// with psi the ladder pgf (offspring.hpp) absorbing the uniformly split
// size-biased bush count.  Estimating the spine product by Monte Carlo
// needs no tree expansion at all, hence no pruning loss and no node cap;
// the part beyond the spine truncation is closed analytically.
struct BushFieldParams {
  int box_radius = 12;  // half-width of the solved box around the set center
  int sweeps = 0;       // absorbing-phase sweeps; 0 = auto (3 R^2, >= 400)
};

class BushField {
 public:
  BushField(const OffspringLaw& law, const PointSet& a, BushFieldParams params = {});

  int dim() const noexcept { return d_; }
  int box_radius() const noexcept { return r_; }
  const OffspringLaw& law() const noexcept { return law_; }
  const PointSet& target() const noexcept { return a_; }
  const std::vector<LatticePoint>& sites() const noexcept { return sites_; }
  const LatticePoint& center() const noexcept { return center_; }

  // P(one critical bush rooted at y reaches A): table inside the box,
  // kappa * m(y) outside, clamped to [0, 1].
  double hit_from(const Coord* y) const;

  // Per-spine-node avoidance factor 1(y not in A) * psi(qbar(y)); the
  // linearized closed form outside the box (the quadratic remainder there
  // is below field_rel_error()).
  double spine_factor(const Coord* y) const;

  // Is y a site of A (cheap far reject first)?
  bool in_target(const Coord* y) const;

  // Exact walk-hit closure P(simple walk from w ever visits A) through the
  // last-exit identity sum_a g(w - a) Es(a), equilibrium weights Es.
  double walk_hit(const Coord* w) const;

  // (sigma^2/2) kappa sum_i w_i G_2(w - a_i): expected bush-hit mass along
  // the entire remaining spine from w; the product's tail closure exponent.
  double spine_tail_mass(const Coord* w) const;

  double kappa() const noexcept { return kappa_; }
  double kappa_spread() const noexcept { return kappa_spread_; }
  double iteration_residual() const noexcept { return iter_resid_; }
  // Declared relative accuracy of the closed field; scales the deterministic
  // error terms the spine estimators book into their bias intervals.
  double field_rel_error() const noexcept { return field_rel_; }
  int sweeps_used() const noexcept { return sweeps_used_; }

 private:
  std::size_t index(const Coord* rel) const noexcept;
  double g1_value(const Coord* dy) const;
  double g2_value(const Coord* dy) const;
  double profile_exact(const Coord* rel) const;
  double profile_radial(const Coord* rel) const;
  void set_ring(std::vector<double>& cur, std::vector<double>& nxt, double boundary_kappa) const;
  void run_sweeps(std::vector<double>& cur, std::vector<double>& nxt,
                  const std::vector<std::uint8_t>& acell, int sweeps);
  double fit_kappa(const std::vector<double>& field, double* spread) const;

  int d_ = 0;
  int r_ = 0;
  int width_ = 0;  // 2 r + 3: interior plus one frozen closure ring
  OffspringLaw law_;
  PointSet a_;
  std::vector<LatticePoint> sites_;
  LatticePoint center_;
  Coord linf_radius_ = 0;
  std::vector<double> v_;    // final field on the box
  std::vector<double> psi_;  // spine factors on the interior
  std::vector<double> es_;     // equilibrium weights, aligned with sites_
  std::vector<double> wnorm_;  // normalized equilibrium measure (profile weights)
  std::vector<Coord> srel_;    // site offsets from the center, flattened
  std::vector<std::uint32_t> ring_idx_;  // closure ring cells
  std::vector<double> ring_g_;           // closure profile m at those cells
  std::size_t strides_[kMaxDim] = {};
  const GreenTable* g1_ = nullptr;
  const GreenTable* g2_ = nullptr;
  double kappa_ = 0.0;
  double kappa_spread_ = 0.0;
  double iter_resid_ = 0.0;
  double field_rel_ = 0.0;
  int sweeps_used_ = 0;
};

// Branching-capacity escape sum by spine conditioning: past convention
// (root node exempt, spine tested from u_1 on, one-sided bushes integrated
// out through the field).  The analytic closure error and the field's
// declared accuracy enter the bias interval, symmetrically.
MCEstimate bcap_escape_spine(const BushField& field, std::uint64_t spine_len,
                             std::uint64_t replicas, SeedSpec seed, int workers = 0);

// P(past sin-tree at x hits the field's set) by the same conditioning; x
// may be at any distance.  Mean of per-replica values in [0, 1], so the
// standard error stays meaningful deep in the small-probability regime.
MCEstimate tree_hit_prob_spine(const BushField& field, const LatticePoint& x,
                               std::uint64_t spine_len, std::uint64_t replicas, SeedSpec seed,
                               int workers = 0);

}  // namespace rwcap
