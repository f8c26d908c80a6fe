// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rwcap/rng.hpp"

namespace rwcap {

enum class OffspringKind { geometric_half, binary, poisson_trunc, delta_one };

// A critical (mean one) offspring law mu together with its size-biased
// variant mu_sb(k) = k mu(k) and the root law mu~(k) = mu(k-1), i.e. one
// guaranteed continuation child plus an independent mu brood.
//
// delta_one deviates from the mu~ formula on purpose: the formula would
// hand the root a second deterministic infinite limb, while the degenerate
// law is meant to collapse the whole tree to a bare spine (one walk). All
// three roles are delta_1 for it.
class OffspringLaw {
 public:
  static OffspringLaw make(OffspringKind kind);
  static OffspringLaw parse(std::string_view name);

  OffspringKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double mean() const noexcept { return 1.0; }
  double variance() const noexcept { return sigma2_; }
  bool degenerate() const noexcept { return kind_ == OffspringKind::delta_one; }

  // pmf accessors (exact for the table laws, closed form for geometric)
  double pmf(int k) const;
  double pmf_size_biased(int k) const;
  double pmf_root(int k) const;

  // generating functions on s in [0, 1]:
  //   pgf(s) = E[s^Z],
  //   pgf_ladder(s) = E[1 + s + ... + s^(Z-1)] = (1 - pgf(s)) / (1 - s),
  // the second evaluated in series form so it is exact at s = 1 (value 1 by
  // criticality). pgf_ladder is the per-spine-node avoidance factor when
  // one bush avoids the target with probability s: averaging the uniform
  // successor index against the size-biased count collapses to it.
  double pgf(double s) const;
  double pgf_ladder(double s) const;

  // canonical sampling: each call consumes a documented number of draws
  // from rng (geometric: one coin per trial; tables: one unit01)
  int sample(CounterRng& rng) const;             // mu
  int sample_size_biased(CounterRng& rng) const; // mu_sb
  int sample_root(CounterRng& rng) const;        // mu~

 private:
  OffspringLaw() = default;

  static int sample_table(const std::vector<double>& pmf, CounterRng& rng);

  OffspringKind kind_ = OffspringKind::delta_one;
  std::string name_;
  double sigma2_ = 0.0;
  // poisson_trunc tables (empty otherwise)
  std::vector<double> tab_mu_, tab_sb_, tab_root_;
};

}  // namespace rwcap
