#pragma once

// SplitMix64 (Steele, Lea, Flood 2014). Per-stream seeds are derived with the
// same finalizer, so stream i of base b is independent of thread scheduling.

#include <cstdint>
#include <string_view>

namespace cvrp {

inline constexpr std::string_view kRngId = "splitmix64";

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(base ^ mix64(index + 0x9E3779B97F4A7C15ULL));
}

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    constexpr result_type operator()() { return next(); }
    constexpr std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }
    // Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace cvrp
