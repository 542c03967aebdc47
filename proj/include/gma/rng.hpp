#pragma once

#include <cmath>
#include <cstdint>

#include "gma/common.hpp"

namespace gma {

namespace detail {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based generator: draw i from stream (seed, stream_id) is a pure
/// function of (seed, stream_id, i), so independent streams can be handed to
/// parallel trials and reproduce the serial results exactly.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0)
        : key_(detail::mix64(detail::mix64(seed + detail::kGamma) ^
                             detail::mix64(stream_id + 0x5851F42D4C957F2DULL))) {}

    /// Deterministic child seed; use to fan out per-trial or per-stage streams.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) {
        return detail::mix64(detail::mix64(seed + detail::kGamma) ^
                             detail::mix64(stream_id + 0x5851F42D4C957F2DULL));
    }

    std::uint64_t next_u64() { return detail::mix64(key_ + (++counter_) * detail::kGamma); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        require(n > 0, "CounterRng::index: n must be positive");
        return static_cast<std::size_t>(next_u64() % n);
    }

    /// +1 or -1 with equal probability.
    double sign() { return (next_u64() & 1) ? 1.0 : -1.0; }

    /// Standard normal via Box-Muller; the spare deviate is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] keeps the log finite
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace gma
