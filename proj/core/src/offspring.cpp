// SPDX-License-Identifier: Apache-2.0
#include "rwcap/offspring.hpp"

#include <cmath>
#include <stdexcept>

namespace rwcap {

namespace {

constexpr int kPoissonCut = 30;

std::vector<double> poisson1_table() {
  std::vector<double> t(kPoissonCut + 1);
  double term = std::exp(-1.0);  // e^{-1} / 0!
  double sum = 0.0;
  for (int k = 0; k <= kPoissonCut; ++k) {
    t[k] = term;
    sum += term;
    term /= static_cast<double>(k + 1);
  }
  // renormalize; the cut mass (~1e-34) is below double resolution, so the
  // mean stays 1 to machine precision and no recentering is needed
  for (double& v : t) v /= sum;
  return t;
}

std::vector<double> size_biased(const std::vector<double>& pmf) {
  std::vector<double> t(pmf.size(), 0.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    t[k] = static_cast<double>(k) * pmf[k];
    sum += t[k];
  }
  for (double& v : t) v /= sum;
  return t;
}

std::vector<double> shifted_up(const std::vector<double>& pmf) {
  std::vector<double> t(pmf.size() + 1, 0.0);
  for (std::size_t k = 0; k < pmf.size(); ++k) t[k + 1] = pmf[k];
  return t;
}

double table_at(const std::vector<double>& t, int k) {
  if (k < 0 || static_cast<std::size_t>(k) >= t.size()) return 0.0;
  return t[static_cast<std::size_t>(k)];
}

}  // namespace

OffspringLaw OffspringLaw::make(OffspringKind kind) {
  OffspringLaw law;
  law.kind_ = kind;
  switch (kind) {
    case OffspringKind::geometric_half:
      law.name_ = "geometric_half";
      law.sigma2_ = 2.0;
      break;
    case OffspringKind::binary:
      law.name_ = "binary";
      law.sigma2_ = 1.0;
      break;
    case OffspringKind::poisson_trunc:
      law.name_ = "poisson_trunc";
      law.sigma2_ = 1.0;
      law.tab_mu_ = poisson1_table();
      law.tab_sb_ = size_biased(law.tab_mu_);
      law.tab_root_ = shifted_up(law.tab_mu_);
      break;
    case OffspringKind::delta_one:
      law.name_ = "delta_one";
      law.sigma2_ = 0.0;
      break;
  }
  return law;
}

OffspringLaw OffspringLaw::parse(std::string_view name) {
  if (name == "geometric_half") return make(OffspringKind::geometric_half);
  if (name == "binary") return make(OffspringKind::binary);
  if (name == "poisson_trunc") return make(OffspringKind::poisson_trunc);
  if (name == "delta_one") return make(OffspringKind::delta_one);
  throw std::invalid_argument("unknown offspring law: " + std::string(name));
}

double OffspringLaw::pmf(int k) const {
  if (k < 0) return 0.0;
  switch (kind_) {
    case OffspringKind::geometric_half:
      return std::ldexp(1.0, -(k + 1));
    case OffspringKind::binary:
      return (k == 0 || k == 2) ? 0.5 : 0.0;
    case OffspringKind::poisson_trunc:
      return table_at(tab_mu_, k);
    case OffspringKind::delta_one:
      return k == 1 ? 1.0 : 0.0;
  }
  return 0.0;
}

double OffspringLaw::pmf_size_biased(int k) const {
  switch (kind_) {
    case OffspringKind::geometric_half:
      return k >= 1 ? static_cast<double>(k) * std::ldexp(1.0, -(k + 1)) : 0.0;
    case OffspringKind::binary:
      return k == 2 ? 1.0 : 0.0;
    case OffspringKind::poisson_trunc:
      return table_at(tab_sb_, k);
    case OffspringKind::delta_one:
      return k == 1 ? 1.0 : 0.0;
  }
  return 0.0;
}

double OffspringLaw::pmf_root(int k) const {
  if (kind_ == OffspringKind::delta_one) return k == 1 ? 1.0 : 0.0;
  if (kind_ == OffspringKind::poisson_trunc) return table_at(tab_root_, k);
  return pmf(k - 1);
}

double OffspringLaw::pgf(double s) const {
  switch (kind_) {
    case OffspringKind::geometric_half:
      return 1.0 / (2.0 - s);
    case OffspringKind::binary:
      return 0.5 * (1.0 + s * s);
    case OffspringKind::poisson_trunc: {
      double acc = 0.0;  // Horner on the pmf polynomial
      for (std::size_t k = tab_mu_.size(); k-- > 0;) acc = acc * s + tab_mu_[k];
      return acc;
    }
    case OffspringKind::delta_one:
      return s;
  }
  return s;
}

double OffspringLaw::pgf_ladder(double s) const {
  switch (kind_) {
    case OffspringKind::geometric_half:
      return 1.0 / (2.0 - s);  // coincides with the pgf for this law
    case OffspringKind::binary:
      return 0.5 * (1.0 + s);
    case OffspringKind::poisson_trunc: {
      // sum_k mu(k) (1 + s + ... + s^(k-1)), stable through s = 1
      double acc = 0.0, run = 0.0, pw = 1.0;
      for (std::size_t k = 0; k < tab_mu_.size(); ++k) {
        acc += tab_mu_[k] * run;
        run += pw;
        pw *= s;
      }
      return acc;
    }
    case OffspringKind::delta_one:
      return 1.0;
  }
  return 1.0;
}

int OffspringLaw::sample(CounterRng& rng) const {
  switch (kind_) {
    case OffspringKind::geometric_half: {
      int k = 0;
      while (rng.unit01() < 0.5) ++k;
      return k;
    }
    case OffspringKind::binary:
      return rng.unit01() < 0.5 ? 0 : 2;
    case OffspringKind::poisson_trunc:
      return sample_table(tab_mu_, rng);
    case OffspringKind::delta_one:
      return 1;
  }
  return 1;
}

int OffspringLaw::sample_size_biased(CounterRng& rng) const {
  switch (kind_) {
    case OffspringKind::geometric_half: {
      // 1 + Geom(1/2) + Geom(1/2) realizes k 2^{-(k+1)} on k >= 1
      int k = 1;
      while (rng.unit01() < 0.5) ++k;
      while (rng.unit01() < 0.5) ++k;
      return k;
    }
    case OffspringKind::binary:
      return 2;  // deterministic, consumes no draws
    case OffspringKind::poisson_trunc:
      return sample_table(tab_sb_, rng);
    case OffspringKind::delta_one:
      return 1;
  }
  return 1;
}

int OffspringLaw::sample_root(CounterRng& rng) const {
  switch (kind_) {
    case OffspringKind::geometric_half: {
      int k = 1;
      while (rng.unit01() < 0.5) ++k;
      return k;
    }
    case OffspringKind::binary:
      return rng.unit01() < 0.5 ? 1 : 3;
    case OffspringKind::poisson_trunc:
      return sample_table(tab_root_, rng);
    case OffspringKind::delta_one:
      return 1;
  }
  return 1;
}

int OffspringLaw::sample_table(const std::vector<double>& pmf, CounterRng& rng) {
  const double u = rng.unit01();
  double acc = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    acc += pmf[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(pmf.size()) - 1;
}

}  // namespace rwcap
