// SPDX-License-Identifier: Apache-2.0
#include "rwcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwcap/green.hpp"
#include "rwcap/walk.hpp"

namespace rwcap {

namespace {

constexpr std::size_t kDenseLimit = 4000;

double power_iteration_cond(const Eigen::MatrixXd& k, const Eigen::LDLT<Eigen::MatrixXd>& ldlt) {
  auto n = k.rows();
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 1e-3 * double((i * 2654435761u) % 97);
  v.normalize();
  double lmax = 0.0;
  for (int it = 0; it < 25; ++it) {
    v = k * v;
    lmax = v.norm();
    if (lmax == 0.0) return 0.0;
    v /= lmax;
  }
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = 1.0 + 1e-3 * double((i * 40503u) % 89);
  w.normalize();
  double inv_lmin = 0.0;
  for (int it = 0; it < 25; ++it) {
    w = ldlt.solve(w);
    inv_lmin = w.norm();
    if (inv_lmin == 0.0) return 0.0;
    w /= inv_lmin;
  }
  return lmax * inv_lmin;
}

}  // namespace

CapacityResult cap_green_exact(int d, const PointSet& a, int N) {
  if (a.empty()) throw std::invalid_argument("cap_green_exact: empty set");
  if (a.size() > kDenseLimit)
    throw std::invalid_argument("cap_green_exact: set too large for the dense solver (" +
                                std::to_string(a.size()) + " > " + std::to_string(kDenseLimit) +
                                ")");
  KernelMatrix m = kernel_matrix(KernelSpec::green(d, N), a);
  auto n = m.K.rows();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m.K);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("cap_green_exact: factorization failed");
  Eigen::VectorXd e = ldlt.solve(Eigen::VectorXd::Ones(n));

  CapacityResult r;
  r.method = "direct";
  r.sites = std::move(m.sites);
  r.value = e.sum();
  r.energy = 1.0 / r.value;
  r.condition = power_iteration_cond(m.K, ldlt);

  double pos = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (e(i) < 0.0) r.clamped = true;
    pos += std::max(e(i), 0.0);
  }
  r.measure.resize(std::size_t(n));
  for (Eigen::Index i = 0; i < n; ++i) r.measure[std::size_t(i)] = std::max(e(i), 0.0) / pos;
  return r;
}

CapacityResult cap_qp(const KernelSpec& spec, const PointSet& a, double tol,
                      std::uint64_t max_iter) {
  if (a.empty()) throw std::invalid_argument("cap_qp: empty set");
  if (a.size() > kDenseLimit)
    throw std::invalid_argument("cap_qp: set too large for the dense matrix (" +
                                std::to_string(a.size()) + ")");
  if (!(tol > 0)) throw std::invalid_argument("cap_qp: tol must be positive");
  KernelMatrix m = kernel_matrix(spec, a);
  const Eigen::MatrixXd& k = m.K;
  const auto n = k.rows();

  CapacityResult r;
  r.method = "fw";
  r.sites = std::move(m.sites);

  Eigen::VectorXd nu = Eigen::VectorXd::Constant(n, 1.0 / double(n));
  Eigen::VectorXd q = k * nu;
  double energy = nu.dot(q);
  double gap = 0.0;

  std::uint64_t it = 0;
  for (; it < max_iter; ++it) {
    Eigen::Index s = 0, v = -1;
    double qs = q(0), qv = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (q(i) < qs) {
        qs = q(i);
        s = i;
      }
      if (nu(i) > 0.0 && q(i) > qv) {
        qv = q(i);
        v = i;
      }
    }
    gap = 2.0 * (energy - qs);
    if (gap <= tol * energy) break;

    bool away = (v >= 0) && (qv - energy > energy - qs) && (nu(v) < 1.0);
    if (away) {
      double denom = energy - 2.0 * qv + k(v, v);
      double gmax = nu(v) / (1.0 - nu(v));
      double g = denom > 0 ? (qv - energy) / denom : gmax;
      bool drop = g >= gmax;
      if (drop) g = gmax;
      energy = (1.0 + g) * (1.0 + g) * energy - 2.0 * g * (1.0 + g) * qv + g * g * k(v, v);
      q = (1.0 + g) * q - g * k.col(v);
      nu *= (1.0 + g);
      nu(v) -= g;
      if (drop || nu(v) < 0.0) nu(v) = 0.0;
    } else {
      double denom = energy - 2.0 * qs + k(s, s);
      double g = denom > 0 ? (energy - qs) / denom : 1.0;
      g = std::clamp(g, 0.0, 1.0);
      energy = (1.0 - g) * (1.0 - g) * energy + 2.0 * g * (1.0 - g) * qs + g * g * k(s, s);
      q = (1.0 - g) * q + g * k.col(s);
      nu *= (1.0 - g);
      nu(s) += g;
    }
    if ((it & 0xfffu) == 0xfffu) {
      // periodic exact refresh against incremental drift
      q = k * nu;
      energy = nu.dot(q);
    }
  }
  r.iterations = it;

  // active-set polish: equality-constrained solve on the support
  std::vector<Eigen::Index> sup;
  for (Eigen::Index i = 0; i < n; ++i)
    if (nu(i) > 1e-10) sup.push_back(i);
  if (!sup.empty()) {
    auto ns = Eigen::Index(sup.size());
    Eigen::MatrixXd ks(ns, ns);
    for (Eigen::Index i = 0; i < ns; ++i)
      for (Eigen::Index j = 0; j < ns; ++j) ks(i, j) = k(sup[std::size_t(i)], sup[std::size_t(j)]);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(ks);
    if (ldlt.info() == Eigen::Success) {
      Eigen::VectorXd e = ldlt.solve(Eigen::VectorXd::Ones(ns));
      double s = e.sum();
      if (s > 0.0 && e.minCoeff() >= 0.0) {
        Eigen::VectorXd cand = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < ns; ++i) cand(sup[std::size_t(i)]) = e(i) / s;
        Eigen::VectorXd qc = k * cand;
        double ec = cand.dot(qc);
        double gc = 2.0 * (ec - qc.minCoeff());
        if (ec <= energy * (1.0 + 1e-12) && gc <= std::max(gap, tol * ec)) {
          nu = cand;
          q = qc;
          energy = ec;
          gap = std::max(gc, 0.0);
        }
      }
    }
  }

  r.energy = energy;
  r.value = 1.0 / energy;
  r.gap = gap;
  r.measure.assign(nu.data(), nu.data() + n);
  return r;
}

CapacityResult cap_gamma(int d, double gamma, const PointSet& a, double tol,
                         std::uint64_t max_iter) {
  return cap_qp(KernelSpec::radial(d, gamma), a, tol, max_iter);
}

EscapeSum escape_sum_once(const PointSet& a, std::uint64_t horizon, double site_fraction,
                          CounterRng& rng, int bias_sample) {
  if (a.empty()) throw std::invalid_argument("escape_sum_once: empty set");
  if (!(site_fraction > 0.0 && site_fraction <= 1.0))
    throw std::invalid_argument("escape_sum_once: site_fraction in (0,1]");
  const int d = a.dim();
  const GreenTable& gt = green_table(d);
  const double g0 = gt.at_origin();
  auto sites = a.sorted_points();

  // sparse envelope sample of A for endpoint bias bounds on big sets
  std::vector<LatticePoint> bias_sites;
  std::size_t stride = sites.size() <= 64 ? 1 : sites.size() / 64;
  for (std::size_t i = 0; i < sites.size(); i += stride) bias_sites.push_back(sites[i]);
  double bias_scale = double(sites.size()) / double(bias_sites.size());

  EscapeSum out;
  int bias_evals = 0;
  std::uint64_t escapes = 0;
  double bias_acc = 0.0;
  for (const auto& start : sites) {
    if (site_fraction < 1.0 && rng.unit01() >= site_fraction) continue;
    ++out.sites_tried;
    WalkCursor w(start);
    bool returned = false;
    for (std::uint64_t t = 0; t < horizon; ++t) {
      w.step(rng);
      if (a.contains_key(w.key())) {
        returned = true;
        break;
      }
    }
    if (!returned) {
      out.sum += 1.0 / site_fraction;
      ++escapes;
      if (bias_evals < bias_sample) {
        // P(later return) <= sum_a g(end - a) / g(0), bounded via envelope
        double s = 0.0;
        LatticePoint end = w.point();
        for (const auto& b : bias_sites) s += gt.envelope((end - b).norm());
        bias_acc += std::min(1.0, s * bias_scale / g0);
        ++bias_evals;
      }
    }
  }
  if (bias_evals > 0)
    out.bias = bias_acc / double(bias_evals) * double(escapes) / site_fraction;
  return out;
}

MCEstimate cap_escape_mc(int d, const PointSet& a, std::uint64_t replicas, std::uint64_t horizon,
                         SeedSpec seed, double site_fraction, int workers) {
  if (a.dim() != d) throw std::invalid_argument("cap_escape_mc: dimension mismatch");
  if (replicas < 2) throw std::invalid_argument("cap_escape_mc: need >= 2 replicas");
  green_table(d).far_field();  // fit once before worker threads race on it
  auto vals = replicate<std::pair<double, double>>(
      replicas, seed,
      [&](std::uint64_t, CounterRng& rng) {
        EscapeSum s = escape_sum_once(a, horizon, site_fraction, rng);
        return std::make_pair(s.sum, s.bias);
      },
      workers);
  std::vector<double> sums;
  sums.reserve(vals.size());
  double bias = 0.0;
  for (const auto& [s, b] : vals) {
    sums.push_back(s);
    bias += b;
  }
  bias /= double(vals.size());
  return estimate_from(sums, -bias, 0.0);
}

}  // namespace rwcap
