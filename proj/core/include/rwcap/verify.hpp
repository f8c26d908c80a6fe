// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rwcap {

// One verification check: a named gate with a pass flag and a one-line
// numeric account of what was measured against what.
struct CheckResult {
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_pass() const noexcept {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Full verification sweep: all registered criteria at their registered
// scales and replica counts (3-sigma gates, no reruns). `ids` selects a
// subset of criteria 1..12; empty means all. Expect roughly an hour on a
// few cores, dominated by the d = 4 rate study.
VerifyReport run_full(std::uint64_t master_seed = 1, int workers = 0,
                      const std::vector<int>& ids = {});

// Reduced-scale smoke sweep: closed forms, exact invariants, resolvent and
// surrogate probes, and downscaled stochastic cores. Minutes, not hours.
// Gates are the same formulas as the full sweep at the smaller scales.
VerifyReport run_fast(std::uint64_t master_seed = 1, int workers = 0);

}  // namespace rwcap
