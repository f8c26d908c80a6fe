// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: runs every registered verification criterion and prints
// one PASS/FAIL line per criterion. Exit code 0 iff all pass.
//
// Usage: rwcap_acceptance [--seed S] [--workers W] [--ids 1,2,5] [--fast]
//   --fast runs the reduced smoke suite instead of the full criteria.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "rwcap/verify.hpp"

namespace {

std::vector<int> parse_ids(const std::string& s) {
  std::vector<int> ids;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    ids.push_back(std::atoi(s.substr(pos, comma - pos).c_str()));
    pos = comma + 1;
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  int workers = 0;
  std::vector<int> ids;
  bool fast = false;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    auto need = [&](const char* flag) -> const char* {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "missing value for %s\n", flag);
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--seed") {
      seed = std::strtoull(need("--seed"), nullptr, 10);
    } else if (arg == "--workers") {
      workers = std::atoi(need("--workers"));
    } else if (arg == "--ids") {
      ids = parse_ids(need("--ids"));
    } else if (arg == "--fast") {
      fast = true;
    } else if (arg == "--help" || arg == "-h") {
      std::printf("usage: %s [--seed S] [--workers W] [--ids 1,2,5] [--fast]\n", argv[0]);
      return 0;
    } else {
      std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
      return 2;
    }
  }

  std::vector<rwcap::CheckResult> checks;
  auto show = [&](const rwcap::VerifyReport& rep) {
    for (const auto& c : rep.checks) {
      std::printf("%s %-44s %8.1fs  %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.seconds,
                  c.detail.c_str());
      std::fflush(stdout);
      checks.push_back(c);
    }
  };

  if (fast) {
    show(rwcap::run_fast(seed, workers));
  } else {
    // one criterion at a time so each line lands as soon as it is decided
    if (ids.empty())
      for (int i = 1; i <= 12; ++i) ids.push_back(i);
    for (int id : ids) show(rwcap::run_full(seed, workers, {id}));
  }

  int passed = 0;
  for (const auto& c : checks) passed += c.pass ? 1 : 0;
  bool all = passed == int(checks.size()) && !checks.empty();
  std::printf("%s: %d/%zu criteria passed (seed %llu)\n",
              all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", passed, checks.size(),
              static_cast<unsigned long long>(seed));
  return all ? 0 : 1;
}
