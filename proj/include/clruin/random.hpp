#pragma once

#include <cmath>
#include <cstdint>

namespace clruin {

// SplitMix64 stream. Splittable: substream(seed, i) derives an independent
// stream per index, so parallel consumers can draw without coordination and
// results do not depend on scheduling order.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : state_(mix(seed)) {}

    static RandomStream substream(std::uint64_t seed, std::uint64_t index) {
        RandomStream rs(0);
        rs.state_ = mix(mix(seed) + (index + 1) * kGamma);
        return rs;
    }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix(state_);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_exponential(double rate) {
        // -log1p(-u) maps u in [0,1) to (0, inf) without ever taking log(0)
        return -std::log1p(-next_uniform()) / rate;
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace clruin
