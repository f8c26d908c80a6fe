// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace rwcap {

// Counter-based stream RNG. A (master seed, stream id) pair names an
// independent stream; draws depend only on that pair and the number of
// values consumed, never on which thread consumes them. This is what makes
// replica-level parallelism reproducible: replica r always owns stream
// base + r and sees the same sequence regardless of scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : state_(mix(master_seed + mix(stream_id + kGolden))) {}

  // Raw 64 uniform bits.
  std::uint64_t u64() noexcept {
    state_ += kGolden;
    return mix(state_);
  }

  // Uniform double in [0,1) with 53-bit resolution.
  double unit01() noexcept { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  bool coin() noexcept { return (u64() >> 63) != 0; }

  // Unbiased uniform draw from {0,...,n-1}; n >= 1.
  std::uint32_t uniform_int(std::uint32_t n) noexcept {
    std::uint64_t x = u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - std::uint64_t(n)) % n;
      while (lo < t) {
        x = u64();
        m = static_cast<unsigned __int128>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 64);
  }

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t state_;
};

// Names one stream of one master seed; arithmetic on the stream id is how
// estimators carve out per-replica and per-walk substreams.
struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  SeedSpec at(std::uint64_t offset) const noexcept { return {master, stream + offset}; }
  CounterRng rng() const noexcept { return CounterRng(master, stream); }
};

}  // namespace rwcap
