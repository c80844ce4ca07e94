#pragma once

#include <cstdint>

namespace skewnum {

namespace detail {

/// splitmix64 finalizer: bijective avalanche mix of a 64-bit word.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based generator: draw i of stream s under seed q is a pure
/// function of (q, s, i). Streams can be evaluated in any order or on any
/// thread and still produce identical values, which keeps multi-restart
/// searches deterministic regardless of scheduling.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(detail::splitmix64(detail::splitmix64(seed) ^ (stream + 0x632BE59BD9B4E019ULL))) {}

    /// 64 uniform bits for the given counter.
    std::uint64_t bits(std::uint64_t counter) const {
        return detail::splitmix64(key_ + counter * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform double in [0,1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo,hi).
    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform(counter);
    }

  private:
    std::uint64_t key_;
};

}  // namespace skewnum
