// SPDX-License-Identifier: Apache-2.0
#include "rwcap/bushfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <utility>

#include "rwcap/capacity.hpp"
#include "rwcap/green.hpp"

namespace rwcap {

namespace {

constexpr int kSiteMargin = 6;  // keep sites clear of the closure ring and fit shell

// One Jacobi sweep of the generation recursion on the interior, specialized
// on the map avg -> 1 - phi(1 - avg) so the hot loop stays a few flops.
// Tracking (last sweep only) reports the worst relative change over cells
// within the fit radius; corner cells are ring-dominated and excluded.
template <class PhiVal>
double sweep_once(const double* cur, double* nxt, const std::uint8_t* acell, int r, int width,
                  const std::size_t* strides, PhiVal phi_val, bool track) {
  const double inv2d = 1.0 / 10.0;  // d = 5
  const int span = width - 2;       // interior cells per axis
  const double track_r2 = double((r - 2) * (r - 2));
  double worst = 0.0;
  Coord rel[4];
  for (rel[0] = -Coord(r); rel[0] <= Coord(r); ++rel[0])
    for (rel[1] = -Coord(r); rel[1] <= Coord(r); ++rel[1])
      for (rel[2] = -Coord(r); rel[2] <= Coord(r); ++rel[2])
        for (rel[3] = -Coord(r); rel[3] <= Coord(r); ++rel[3]) {
          std::size_t idx = 0;
          for (int j = 0; j < 4; ++j)
            idx = idx * std::size_t(width) + std::size_t(rel[j] + r + 1);
          idx = idx * std::size_t(width) + 1;  // rel[4] = -r
          const std::size_t s0 = strides[0], s1 = strides[1], s2 = strides[2], s3 = strides[3];
          if (!track) {
            for (int k = 0; k < span; ++k, ++idx) {
              if (acell[idx]) {
                nxt[idx] = 1.0;
                continue;
              }
              double s = cur[idx - s0] + cur[idx + s0] + cur[idx - s1] + cur[idx + s1] +
                         cur[idx - s2] + cur[idx + s2] + cur[idx - s3] + cur[idx + s3] +
                         cur[idx - 1] + cur[idx + 1];
              nxt[idx] = phi_val(s * inv2d);
            }
          } else {
            double base_r2 = 0.0;
            for (int j = 0; j < 4; ++j) base_r2 += double(rel[j]) * double(rel[j]);
            for (int k = 0; k < span; ++k, ++idx) {
              if (acell[idx]) {
                nxt[idx] = 1.0;
                continue;
              }
              double s = cur[idx - s0] + cur[idx + s0] + cur[idx - s1] + cur[idx + s1] +
                         cur[idx - s2] + cur[idx + s2] + cur[idx - s3] + cur[idx + s3] +
                         cur[idx - 1] + cur[idx + 1];
              double val = phi_val(s * inv2d);
              nxt[idx] = val;
              double c4 = double(k - r);
              if (base_r2 + c4 * c4 <= track_r2 && val > 1e-9)
                worst = std::max(worst, std::abs(val - cur[idx]) / val);
            }
          }
        }
  return worst;
}

}  // namespace

std::size_t BushField::index(const Coord* rel) const noexcept {
  std::size_t idx = 0;
  for (int j = 0; j < d_; ++j) idx = idx * std::size_t(width_) + std::size_t(rel[j] + r_ + 1);
  return idx;
}

double BushField::g1_value(const Coord* dy) const {
  double r2 = 0.0;
  for (int j = 0; j < d_; ++j) r2 += double(dy[j]) * double(dy[j]);
  double cr = g1_->crossover_radius();
  if (r2 > cr * cr) return g1_->far_field().c / (r2 * std::sqrt(r2));  // d = 5: r^{-3}
  return g1_->at_coords(dy);
}

double BushField::g2_value(const Coord* dy) const {
  double r2 = 0.0;
  for (int j = 0; j < d_; ++j) r2 += double(dy[j]) * double(dy[j]);
  double cr = g2_->crossover_radius();
  if (r2 > cr * cr) return g2_->far_field().c / std::sqrt(r2);  // d = 5, N = 2: r^{-1}
  return g2_->at_coords(dy);
}

// Closure profile m(y) = sum_i w_i g(y - a_i), equilibrium-normalized: the
// harmonic shape a multi-site hit field actually has at shell radii, where
// a single radial pole would be off by order (site spread / radius).
double BushField::profile_exact(const Coord* rel) const {
  double m = 0.0;
  for (std::size_t i = 0; i < wnorm_.size(); ++i) {
    Coord dy[kMaxDim];
    for (int j = 0; j < d_; ++j) dy[j] = rel[j] - srel_[i * std::size_t(d_) + std::size_t(j)];
    m += wnorm_[i] * g1_value(dy);
  }
  return m;
}

double BushField::profile_radial(const Coord* rel) const {
  // Pure power-law poles: the one lock-free form the spine loop hammers;
  // the anisotropy of g beyond the box is far below field_rel_error.
  const double cfar = g1_->far_field().c;
  double m = 0.0;
  for (std::size_t i = 0; i < wnorm_.size(); ++i) {
    double r2 = 0.0;
    for (int j = 0; j < d_; ++j) {
      double dy = double(rel[j] - srel_[i * std::size_t(d_) + std::size_t(j)]);
      r2 += dy * dy;
    }
    m += wnorm_[i] * cfar / (r2 * std::sqrt(r2));
  }
  return m;
}

void BushField::set_ring(std::vector<double>& cur, std::vector<double>& nxt,
                         double boundary_kappa) const {
  for (std::size_t i = 0; i < ring_idx_.size(); ++i) {
    double val = boundary_kappa > 0.0 ? std::min(1.0, boundary_kappa * ring_g_[i]) : 0.0;
    cur[ring_idx_[i]] = val;
    nxt[ring_idx_[i]] = val;
  }
}

void BushField::run_sweeps(std::vector<double>& cur, std::vector<double>& nxt,
                           const std::vector<std::uint8_t>& acell, int sweeps) {
  auto dispatch = [&](auto phi_val) {
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      bool track = sweep + 1 == sweeps;
      double worst =
          sweep_once(cur.data(), nxt.data(), acell.data(), r_, width_, strides_, phi_val, track);
      cur.swap(nxt);
      if (track) iter_resid_ = worst;
    }
  };
  switch (law_.kind()) {
    case OffspringKind::geometric_half:
      dispatch([](double a) { return a / (1.0 + a); });
      break;
    case OffspringKind::binary:
      dispatch([](double a) { return a * (1.0 - 0.5 * a); });
      break;
    case OffspringKind::delta_one:
      dispatch([](double a) { return a; });
      break;
    case OffspringKind::poisson_trunc:
      dispatch([this](double a) { return 1.0 - law_.pgf(1.0 - a); });
      break;
  }
  sweeps_used_ += sweeps;
}

BushField::BushField(const OffspringLaw& law, const PointSet& a, BushFieldParams params)
    : d_(a.dim()), law_(law), a_(a) {
  if (d_ != 5) throw std::invalid_argument("BushField: dense box solve is d = 5 only");
  if (a_.size() == 0) throw std::invalid_argument("BushField: empty target set");
  r_ = params.box_radius;
  if (r_ < kSiteMargin + 3) throw std::invalid_argument("BushField: box_radius too small");
  width_ = 2 * r_ + 3;

  g1_ = &green_table(d_, 1);
  g2_ = &green_table(d_, 2);
  (void)g1_->far_field();
  (void)g2_->far_field();

  // Equilibrium weights come from the exact capacity solve; its site order
  // is the order we keep.
  CapacityResult cr = cap_green_exact(d_, a_, 1);
  sites_ = cr.sites;
  es_.resize(sites_.size());
  wnorm_ = cr.measure;
  for (std::size_t i = 0; i < sites_.size(); ++i) es_[i] = cr.value * cr.measure[i];

  center_ = a_.centroid_rounded();
  linf_radius_ = 0;
  srel_.resize(sites_.size() * std::size_t(d_));
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    for (int j = 0; j < d_; ++j) {
      Coord off = sites_[i][j] - center_[j];
      srel_[i * std::size_t(d_) + std::size_t(j)] = off;
      Coord mag = off < 0 ? -off : off;
      linf_radius_ = std::max(linf_radius_, mag);
      if (mag > Coord(r_ - kSiteMargin))
        throw std::invalid_argument("BushField: set too wide for box_radius; raise it");
    }
  }

  {
    std::size_t s = 1;
    for (int j = d_ - 1; j >= 0; --j) {
      strides_[j] = s;
      s *= std::size_t(width_);
    }
  }
  const std::size_t n = strides_[0] * std::size_t(width_);

  // Closure ring: indices and exact g values, computed once.
  {
    Coord rel[kMaxDim];
    const Coord b = Coord(r_ + 1);
    for (rel[0] = -b; rel[0] <= b; ++rel[0])
      for (rel[1] = -b; rel[1] <= b; ++rel[1])
        for (rel[2] = -b; rel[2] <= b; ++rel[2])
          for (rel[3] = -b; rel[3] <= b; ++rel[3])
            for (rel[4] = -b; rel[4] <= b; ++rel[4]) {
              bool ring = false;
              for (int j = 0; j < d_; ++j) ring = ring || rel[j] == b || rel[j] == -b;
              if (!ring) continue;
              ring_idx_.push_back(std::uint32_t(index(rel)));
              ring_g_.push_back(profile_exact(rel));
            }
  }

  std::vector<std::uint8_t> acell(n, 0);
  std::vector<double> cur(n, 0.0), nxt(n, 0.0);
  for (const LatticePoint& s : sites_) {
    Coord rel[kMaxDim];
    for (int j = 0; j < d_; ++j) rel[j] = s[j] - center_[j];
    std::size_t idx = index(rel);
    acell[idx] = 1;
    cur[idx] = 1.0;
  }

  // Phase 1: absorbing ring, pure generation recursion; the sweep count is
  // what truncates bush generations, so it carries the k^{-3/2} leak bound.
  int sweeps1 = params.sweeps > 0 ? params.sweeps : std::max(400, 3 * r_ * r_);
  sweeps_used_ = 0;
  set_ring(cur, nxt, 0.0);
  run_sweeps(cur, nxt, acell, sweeps1);
  double kap = fit_kappa(cur, nullptr);

  // Phase 2: iterate ring <- kappa * g to the self-consistent fixed point.
  // The map kappa -> fit is affine to high accuracy (the recursion is
  // near-linear away from A), so Aitken extrapolation on the raw fits
  // collapses the geometric transient.
  double prev2 = 0.0, prev1 = 0.0;
  int have = 0;
  for (int round = 0; round < 12; ++round) {
    set_ring(cur, nxt, kap);
    run_sweeps(cur, nxt, acell, 120);
    double raw = fit_kappa(cur, nullptr);
    double next = raw;
    if (have >= 2) {
      double den = (raw - prev1) - (prev1 - prev2);
      if (std::abs(den) > 1e-14) {
        double cand = raw - (raw - prev1) * (raw - prev1) / den;
        if (cand > 0.25 * raw && cand < 4.0 * raw) {
          next = cand;
          have = -1;  // restart the raw history after a jump
        }
      }
    }
    prev2 = prev1;
    prev1 = raw;
    ++have;
    double relstep = std::abs(next - kap) / std::max(next, 1e-300);
    kap = next;
    if (relstep <= 0.003) break;
  }

  // Quiet tail at the frozen closure; final fit gives kappa and its honest
  // directional/radial spread, the residual comes from the last sweep.
  set_ring(cur, nxt, kap);
  run_sweeps(cur, nxt, acell, 60);
  double spread = 0.0;
  kappa_ = fit_kappa(cur, &spread);
  kappa_spread_ = spread + std::abs(kappa_ - kap) / std::max(kappa_, 1e-300);
  field_rel_ = kappa_spread_ + 10.0 * iter_resid_ + 0.01;

  // Spine factors on the interior; the ring keeps 1 and is never read.
  v_ = std::move(cur);
  psi_ = std::move(nxt);
  std::fill(psi_.begin(), psi_.end(), 1.0);
  const double inv2d = 1.0 / double(2 * d_);
  Coord rel[kMaxDim];
  for (rel[0] = -Coord(r_); rel[0] <= Coord(r_); ++rel[0])
    for (rel[1] = -Coord(r_); rel[1] <= Coord(r_); ++rel[1])
      for (rel[2] = -Coord(r_); rel[2] <= Coord(r_); ++rel[2])
        for (rel[3] = -Coord(r_); rel[3] <= Coord(r_); ++rel[3]) {
          rel[4] = -Coord(r_);
          std::size_t idx = index(rel);
          for (int k = 0; k < width_ - 2; ++k, ++idx) {
            if (acell[idx]) {
              psi_[idx] = 0.0;
              continue;
            }
            double s = 0.0;
            for (int j = 0; j < d_; ++j) s += v_[idx - strides_[j]] + v_[idx + strides_[j]];
            psi_[idx] = law_.pgf_ladder(1.0 - s * inv2d);
          }
        }
}

double BushField::fit_kappa(const std::vector<double>& field, double* spread) const {
  // Ratio v / g on an interior shell clear of both the set and the closure
  // ring; its spread over the shell is the honest inhomogeneity measure for
  // the radial continuation used outside the box.
  double site_rad = 0.0;
  for (const LatticePoint& s : sites_) {
    double r2 = 0.0;
    for (int j = 0; j < d_; ++j) {
      double off = double(s[j] - center_[j]);
      r2 += off * off;
    }
    site_rad = std::max(site_rad, std::sqrt(r2));
  }
  double lo = std::max(double(r_ - 5), site_rad + 3.0);
  double hi = double(r_ - 2);
  if (lo > hi - 1.0)
    throw std::invalid_argument("BushField: no fit shell left; raise box_radius");
  const double lo2 = lo * lo, hi2 = hi * hi;

  double sum = 0.0, mn = 0.0, mx = 0.0;
  std::size_t count = 0;
  Coord rel[kMaxDim];
  for (rel[0] = -Coord(r_); rel[0] <= Coord(r_); ++rel[0])
    for (rel[1] = -Coord(r_); rel[1] <= Coord(r_); ++rel[1])
      for (rel[2] = -Coord(r_); rel[2] <= Coord(r_); ++rel[2])
        for (rel[3] = -Coord(r_); rel[3] <= Coord(r_); ++rel[3])
          for (rel[4] = -Coord(r_); rel[4] <= Coord(r_); ++rel[4]) {
            double r2 = 0.0;
            for (int j = 0; j < d_; ++j) r2 += double(rel[j]) * double(rel[j]);
            if (r2 < lo2 || r2 > hi2) continue;
            double ratio = field[index(rel)] / profile_exact(rel);
            if (count == 0) {
              mn = mx = ratio;
            } else {
              mn = std::min(mn, ratio);
              mx = std::max(mx, ratio);
            }
            sum += ratio;
            ++count;
          }
  if (count == 0) throw std::logic_error("BushField: empty fit shell");
  double mean = sum / double(count);
  if (spread) *spread = mean > 0.0 ? (mx - mn) / mean : 0.0;
  return mean;
}

double BushField::hit_from(const Coord* y) const {
  Coord rel[kMaxDim];
  Coord m = 0;
  for (int j = 0; j < d_; ++j) {
    rel[j] = y[j] - center_[j];
    Coord mag = rel[j] < 0 ? -rel[j] : rel[j];
    m = std::max(m, mag);
  }
  if (m <= Coord(r_ + 1)) return v_[index(rel)];
  return std::min(1.0, kappa_ * profile_exact(rel));
}

double BushField::spine_factor(const Coord* y) const {
  Coord rel[kMaxDim];
  Coord m = 0;
  for (int j = 0; j < d_; ++j) {
    rel[j] = y[j] - center_[j];
    Coord mag = rel[j] < 0 ? -rel[j] : rel[j];
    m = std::max(m, mag);
  }
  if (m <= Coord(r_)) return psi_[index(rel)];
  // Outside the box 1 - qbar = kappa m(y) is far below 1e-3, where the
  // ladder pgf is its tangent 1 - (sigma^2/2)(1 - qbar) to quadratic
  // accuracy.
  double vout = kappa_ * profile_radial(rel);
  return 1.0 - 0.5 * law_.variance() * vout;
}

bool BushField::in_target(const Coord* y) const {
  for (int j = 0; j < d_; ++j) {
    Coord off = y[j] - center_[j];
    Coord mag = off < 0 ? -off : off;
    if (mag > linf_radius_) return false;
  }
  return a_.contains(y);
}

double BushField::walk_hit(const Coord* w) const {
  double p = 0.0;
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    Coord dy[kMaxDim];
    for (int j = 0; j < d_; ++j) dy[j] = w[j] - sites_[i][j];
    p += es_[i] * g1_value(dy);
  }
  return std::clamp(p, 0.0, 1.0);
}

double BushField::spine_tail_mass(const Coord* w) const {
  // g * g(x) = G_2(x) exactly, so the expected bush-hit mass along the whole
  // remaining spine from w is kappa-weighted G_2 summed over the poles.
  double m = 0.0;
  for (std::size_t i = 0; i < wnorm_.size(); ++i) {
    Coord dy[kMaxDim];
    for (int j = 0; j < d_; ++j)
      dy[j] = w[j] - center_[j] - srel_[i * std::size_t(d_) + std::size_t(j)];
    m += wnorm_[i] * g2_value(dy);
  }
  return 0.5 * law_.variance() * kappa_ * m;
}

namespace {

struct SpineProduct {
  double survive = 0.0;  // P(past tree avoids A | spine), closed beyond the cut
  double err = 0.0;      // deterministic error booked for this path
};

// One spine from `start`: step, test membership, multiply the bush-avoidance
// factor, close the product analytically at the cut. The start itself is
// tested only when `test_start` (hitting convention); the escape convention
// exempts it because the root's own brood belongs to the future tree.
SpineProduct run_spine(const BushField& f, const Coord* start, bool test_start,
                       std::uint64_t spine_len, CounterRng& rng) {
  Coord u[kMaxDim];
  const int d = f.dim();
  for (int j = 0; j < d; ++j) u[j] = start[j];
  if (test_start && f.in_target(u)) return {0.0, 0.0};
  const std::uint32_t dirs = std::uint32_t(2 * d);
  double prod = 1.0;
  double seen = 0.0;
  for (std::uint64_t i = 0; i < spine_len; ++i) {
    std::uint32_t dir = rng.uniform_int(dirs);
    u[dir >> 1] += (dir & 1u) ? Coord(1) : Coord(-1);
    if (f.in_target(u)) return {0.0, 0.0};
    double fac = f.spine_factor(u);
    prod *= fac;
    seen += 1.0 - fac;
  }
  double tail = f.spine_tail_mass(u);
  double pw = f.walk_hit(u);
  // exp(-tail): bushes beyond the cut; (1 - pw): the spine itself beyond the
  // cut, exact by the last-exit identity. Their correlation and the field's
  // declared accuracy go into the error budget, not under the rug.
  double err = prod * (tail * tail + pw * tail + f.field_rel_error() * (seen + tail));
  prod *= std::exp(-tail) * std::max(0.0, 1.0 - pw);
  return {prod, err};
}

struct ValErr {
  double val = 0.0;
  double err = 0.0;
};

}  // namespace

MCEstimate bcap_escape_spine(const BushField& field, std::uint64_t spine_len,
                             std::uint64_t replicas, SeedSpec seed, int workers) {
  if (spine_len == 0) throw std::invalid_argument("bcap_escape_spine: spine_len >= 1");
  const auto& sites = field.sites();
  std::vector<ValErr> out = replicate<ValErr>(
      replicas, seed,
      [&](std::uint64_t, CounterRng& rng) {
        ValErr ve;
        Coord start[kMaxDim];
        for (const LatticePoint& s : sites) {
          for (int j = 0; j < field.dim(); ++j) start[j] = s[j];
          SpineProduct sp = run_spine(field, start, /*test_start=*/false, spine_len, rng);
          ve.val += sp.survive;
          ve.err += sp.err;
        }
        return ve;
      },
      workers);
  std::vector<double> vals(out.size());
  double err = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    vals[i] = out[i].val;
    err += out[i].err;
  }
  err /= double(out.empty() ? 1 : out.size());
  return estimate_from(vals, -err, err);
}

MCEstimate tree_hit_prob_spine(const BushField& field, const LatticePoint& x,
                               std::uint64_t spine_len, std::uint64_t replicas, SeedSpec seed,
                               int workers) {
  if (spine_len == 0) throw std::invalid_argument("tree_hit_prob_spine: spine_len >= 1");
  if (x.dim() != field.dim()) throw std::invalid_argument("tree_hit_prob_spine: dim mismatch");
  Coord start[kMaxDim];
  for (int j = 0; j < field.dim(); ++j) start[j] = x[j];
  std::vector<ValErr> out = replicate<ValErr>(
      replicas, seed,
      [&](std::uint64_t, CounterRng& rng) {
        SpineProduct sp = run_spine(field, start, /*test_start=*/true, spine_len, rng);
        return ValErr{1.0 - sp.survive, sp.err};
      },
      workers);
  std::vector<double> vals(out.size());
  double err = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    vals[i] = out[i].val;
    err += out[i].err;
  }
  err /= double(out.empty() ? 1 : out.size());
  return estimate_from(vals, -err, err);
}

}  // namespace rwcap
