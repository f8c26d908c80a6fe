// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "rwcap/lattice.hpp"

namespace rwcap {

// Lattice Green's function of the simple random walk on Z^d and its
// convolution powers:
//
//   G_N(x) = sum_{m>=0} binom(m+N-1, N-1) p_m(x),   G_1 = g,
//
// finite iff d > 2N. Values come from a one-dimensional integral
//
//   G_N(x) = 1/(N-1)! Int_0^inf t^{N-1} prod_j e^{-t/d} I_{|x_j|}(t/d) dt,
//
// evaluated with adaptive panel Gauss-Legendre quadrature on scaled Bessel
// products; the t -> T/u^2 change of variables makes the tail a smooth
// integral on (0,1]. Far values (|x| > crossover) use the power law
// c * |x|^{2N-d} with c fitted at runtime on a shell inside the exact
// region; the fit residual spread is reported, never hidden.
//
// Evaluation is memoized per symmetry class (sorted absolute coordinates)
// and is thread safe.
class GreenTable {
 public:
  GreenTable(int d, int N = 1, double tol = 1e-10);

  int d() const noexcept { return d_; }
  int order() const noexcept { return N_; }
  double tol() const noexcept { return tol_; }

  double at(const LatticePoint& x) const;
  double at_coords(const Coord* x) const;
  double at_origin() const { return at_coords(origin_); }

  // Exact quadrature at any point, bypassing the far-field shortcut.
  double quadrature_value(const Coord* x) const;

  struct FarField {
    double c = 0.0;        // G_N ~ c |x|^(2N-d)
    double fit_lo = 0.0;   // shell used for the fit
    double fit_hi = 0.0;
    double rel_spread = 0.0;  // (max-min)/mean of c over fit points
  };
  const FarField& far_field() const;

  // Convenience bound c*(1+safety) * r^(2N-d), clamped at r >= 1; valid
  // envelope for all far points once safety covers the fit spread.
  double envelope(double r, double safety = 0.5) const;

  double crossover_radius() const noexcept { return 30.0; }
  std::size_t memo_size() const;

 private:
  bool memoable(const Coord* x) const noexcept;
  std::uint64_t class_key(const Coord* x) const noexcept;

  int d_;
  int N_;
  double tol_;
  Coord origin_[kMaxDim] = {};

  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::uint64_t, double> memo_;

  mutable std::once_flag far_once_;
  mutable FarField far_;
};

// Shared per-process registry of tables, keyed by (d, N).
const GreenTable& green_table(int d, int N = 1);

inline double green_value(int d, const LatticePoint& x) { return green_table(d).at(x); }
inline double green_origin(int d) { return green_table(d).at_origin(); }

}  // namespace rwcap
