#ifndef QPCLAB_RNG_HPP
#define QPCLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace qpclab {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (master seed, stream index).
/// Pure function, so trial i's randomness never depends on trial order.
inline constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(~stream));
}

/// Seeded random source. All sampling goes through this wrapper so that
/// identical seeds give identical byte-level results on every platform
/// (std::mt19937_64 output is standardized; the distributions here are
/// hand-rolled because the std ones are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    int bit() { return static_cast<int>(engine_() >> 63); }

    /// Uniform integer in [0, bound), bias-free via rejection sampling.
    std::uint64_t uniform(std::uint64_t bound) {
        const std::uint64_t reject_below = (-bound) % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r < reject_below);
        return r % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

} // namespace qpclab

#endif // QPCLAB_RNG_HPP
