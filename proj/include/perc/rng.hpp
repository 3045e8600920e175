#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace perc {

// SplitMix64 output finaliser (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-subtask seed: master seed XOR a hash of the task index.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return seed ^ mix64(index + 0x9e3779b97f4a7c15ULL);
}

// Counter-based stream keyed by (seed, stream id): the k-th draw is
// mix64(key + (k+1) * golden), so any (seed, id, k) is addressable without
// touching other streams.
class Stream {
  public:
    using result_type = std::uint64_t;

    explicit constexpr Stream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
        : key_(mix64(derive_seed(seed, stream_id))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        counter_ += 1;
        return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Standard normal, Box-Muller (no cached second variate, so draw counts
    // stay fixed at two uniforms per call).
    double normal() noexcept {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::uint64_t position() const noexcept { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace perc
