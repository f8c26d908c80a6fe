// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rwcap/rng.hpp"

namespace rwcap {

// Monte Carlo estimate with a standard error and a deterministic bias
// interval: the estimand is guaranteed to lie in
// [mean + bias_lo, mean + bias_hi] up to sampling noise. Truncation and
// pruning produce one-sided intervals.
struct MCEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t replicas = 0;
  double bias_lo = 0.0;
  double bias_hi = 0.0;

  double lo3() const noexcept { return mean + bias_lo - 3.0 * se; }
  double hi3() const noexcept { return mean + bias_hi + 3.0 * se; }
  std::string to_string() const;
};

MCEstimate estimate_from(const std::vector<double>& values, double bias_lo = 0.0,
                         double bias_hi = 0.0);

// Estimate of a probability from `hits` successes in `n` trials with the
// exact binomial standard error sqrt(p(1-p)/n) <= 1/(2 sqrt(n)).
MCEstimate bernoulli_estimate(std::uint64_t hits, std::uint64_t n, double bias_lo = 0.0,
                              double bias_hi = 0.0);

// Worker count used by replicate(): RWCAP_WORKERS if set, else the hardware
// concurrency. Always >= 1.
int default_workers();

namespace detail {

void run_indexed(std::uint64_t count, int workers, const std::function<void(std::uint64_t)>& body);

}  // namespace detail

// Runs fn(replica_index, rng) for each replica, where rng is an independent
// stream seed.at(replica_index). Results land in a pre-sized vector by
// index, so the outcome is byte-identical for any worker count.
template <class T, class Fn>
std::vector<T> replicate(std::uint64_t replicas, SeedSpec seed, Fn&& fn, int workers = 0) {
  std::vector<T> out(replicas);
  if (workers <= 0) workers = default_workers();
  detail::run_indexed(replicas, workers, [&](std::uint64_t i) {
    CounterRng rng = seed.at(i).rng();
    out[i] = fn(i, rng);
  });
  return out;
}

// ---- small statistics helpers used by the verification suites ----

// Upper quantile of the chi-square distribution (Wilson-Hilferty).
double chi2_quantile(double p, double dof);

// Two-sided Kolmogorov-Smirnov critical value at level alpha for n samples
// against a fully specified distribution (asymptotic form).
double ks_critical(double alpha, std::uint64_t n);

// 95% upper confidence bound for a probability when k successes were seen
// in n trials; exact rule-of-three style bound for k = 0.
double binomial_upper95(std::uint64_t k, std::uint64_t n);

}  // namespace rwcap
