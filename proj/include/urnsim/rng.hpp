// Counter-based random streams for reproducible parallel Monte Carlo.
//
// Every stream is a pure function of a 64-bit key and a draw counter, so the
// n-th draw of a stream never depends on thread scheduling or on how many
// draws a sibling stream consumed. Substreams are derived by hashing
// (key, tag); a simulation keys its streams as
//   master seed -> path index -> step index
// which makes paths, continuations and individual steps replayable in
// isolation.

#ifndef URNSIM_RNG_HPP
#define URNSIM_RNG_HPP

#include <cstdint>

namespace urnsim {

// SplitMix64 finalizer (Stafford mix13). Bijective, full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Reserved substream tags. Per-step tags are the raw step index, which in
// practice stays far below either constant.
namespace stream_tag {
inline constexpr std::uint64_t barrier = ~0ull;            // barrier draw at time 0
inline constexpr std::uint64_t continuation = 1ull << 63;  // + continuation index
}  // namespace stream_tag

class RandomStream {
public:
    RandomStream() = default;
    explicit RandomStream(std::uint64_t key) : key_(key) {}

    // Entry point for user-facing seeds; scrambles so that small seeds
    // (0, 1, 2, ...) land on unrelated keys.
    static RandomStream from_seed(std::uint64_t seed) {
        return RandomStream(mix64(seed ^ 0x7c6e8a2d5f3b1909ull));
    }

    // Independent substream. Chaining child() calls derives the
    // (seed, path, step) hierarchy.
    RandomStream child(std::uint64_t tag) const {
        return RandomStream(mix64(key_ ^ mix64(tag + 0xA24BAED4963EE407ull)));
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

    // Draw n of a stream is mix64(key ^ mix64(n + salt)): two finalizer
    // rounds so distinct streams cannot share counter-shifted sequences.
    std::uint64_t at(std::uint64_t n) const {
        return mix64(key_ ^ mix64(n + 0x9E3779B97F4A7C15ull));
    }

    std::uint64_t next_u64() { return at(counter_++); }

    // Uniform on [0,1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1]; safe under log().
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_unit() < p; }

    double uniform(double a, double b) { return a + next_unit() * (b - a); }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace urnsim

#endif  // URNSIM_RNG_HPP
