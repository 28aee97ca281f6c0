#ifndef QPCLAB_BITPAIR_HPP
#define QPCLAB_BITPAIR_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace qpclab {

/// A two-bit classical word (hi, lo). This is the universal currency of the
/// protocol: data groups, key words, measurement outcomes and announcements
/// are all BitPairs, combined with XOR.
struct BitPair {
    std::uint8_t value = 0; // (hi << 1) | lo, always in {0,1,2,3}

    constexpr BitPair() = default;
    constexpr explicit BitPair(unsigned v) : value(static_cast<std::uint8_t>(v)) {
        if (v > 3) throw std::invalid_argument("BitPair: value out of {0,1,2,3}");
    }

    static constexpr BitPair from_bits(int hi, int lo) {
        return BitPair(static_cast<unsigned>((hi & 1) << 1 | (lo & 1)));
    }

    constexpr int hi() const { return (value >> 1) & 1; }
    constexpr int lo() const { return value & 1; }
    constexpr int popcount() const { return ((value >> 1) & 1) + (value & 1); }

    friend constexpr BitPair operator^(BitPair a, BitPair b) {
        return BitPair(static_cast<unsigned>(a.value ^ b.value));
    }
    friend constexpr bool operator==(BitPair a, BitPair b) = default;

    std::string str() const { return {char('0' + hi()), char('0' + lo())}; }
};

/// Total number of 1-bits across a sequence of pairs.
inline long long bit_sum(std::span<const BitPair> pairs) {
    long long sum = 0;
    for (BitPair p : pairs) sum += p.popcount();
    return sum;
}

} // namespace qpclab

#endif // QPCLAB_BITPAIR_HPP
