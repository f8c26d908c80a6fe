// SPDX-License-Identifier: Apache-2.0
#include "rwcap/mc.hpp"

#include <cstdlib>
#include <sstream>

namespace rwcap {

std::string MCEstimate::to_string() const {
  std::ostringstream os;
  os.precision(10);
  os << mean << " +- " << se << " (R=" << replicas;
  if (bias_lo != 0.0 || bias_hi != 0.0) os << ", bias [" << bias_lo << "," << bias_hi << "]";
  os << ")";
  return os.str();
}

MCEstimate estimate_from(const std::vector<double>& values, double bias_lo, double bias_hi) {
  if (values.size() < 2) throw std::invalid_argument("estimate_from needs >= 2 replicas");
  double n = double(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) {
    double d = v - mean;
    ss += d * d;
  }
  MCEstimate e;
  e.mean = mean;
  e.se = std::sqrt(ss / (n - 1.0) / n);
  e.replicas = values.size();
  e.bias_lo = bias_lo;
  e.bias_hi = bias_hi;
  return e;
}

MCEstimate bernoulli_estimate(std::uint64_t hits, std::uint64_t n, double bias_lo,
                              double bias_hi) {
  if (n == 0) throw std::invalid_argument("bernoulli_estimate needs >= 1 trial");
  MCEstimate e;
  e.mean = double(hits) / double(n);
  e.se = std::sqrt(e.mean * (1.0 - e.mean) / double(n));
  e.replicas = n;
  e.bias_lo = bias_lo;
  e.bias_hi = bias_hi;
  return e;
}

int default_workers() {
  static const int n = [] {
    if (const char* env = std::getenv("RWCAP_WORKERS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
  }();
  return n;
}

namespace detail {

void run_indexed(std::uint64_t count, int workers,
                 const std::function<void(std::uint64_t)>& body) {
  if (count == 0) return;
  if (workers <= 1 || count == 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  if (std::uint64_t(workers) > count) workers = int(count);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) break;
        try {
          body(i);
        } catch (...) {
          failed.store(true, std::memory_order_relaxed);
          break;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error("replicate: a replica threw");
}

}  // namespace detail

double chi2_quantile(double p, double dof) {
  if (p <= 0.0 || p >= 1.0 || dof <= 0.0) throw std::invalid_argument("chi2_quantile domain");
  // Wilson-Hilferty: X/k approx Normal(1-2/(9k), 2/(9k))^3
  // inverse normal via Acklam-style rational approximation
  auto norm_quantile = [](double q) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (q < plow) {
      double u = std::sqrt(-2 * std::log(q));
      x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
          ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1);
    } else if (q <= phigh) {
      double u = q - 0.5, r = u * u;
      x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
          (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
      double u = std::sqrt(-2 * std::log(1 - q));
      x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
          ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1);
    }
    return x;
  };
  double z = norm_quantile(p);
  double t = 2.0 / (9.0 * dof);
  double v = 1.0 - t + z * std::sqrt(t);
  return dof * v * v * v;
}

double ks_critical(double alpha, std::uint64_t n) {
  if (alpha <= 0.0 || alpha >= 1.0 || n == 0) throw std::invalid_argument("ks_critical domain");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(double(n));
}

double binomial_upper95(std::uint64_t k, std::uint64_t n) {
  if (n == 0) return 1.0;
  if (k == 0) return std::min(1.0, 3.0 / double(n));
  // Wilson score upper bound, z = 1.645 one-sided
  double z = 1.6448536269514722;
  double p = double(k) / double(n), z2 = z * z, nn = double(n);
  double denom = 1.0 + z2 / nn;
  double center = p + z2 / (2 * nn);
  double rad = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return std::min(1.0, (center + rad) / denom);
}

}  // namespace rwcap
