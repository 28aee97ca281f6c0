#ifndef QPCLAB_ENCODING_HPP
#define QPCLAB_ENCODING_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qpclab/bitpair.hpp"

namespace qpclab {

/// A party's secret: a non-negative integer below 2^n_bits.
/// Bit j (1-based) is the coefficient of 2^(j-1), so bit 1 is the least
/// significant bit.
struct SecretInput {
    std::uint64_t value = 0;
    int n_bits = 1;

    SecretInput() = default;
    SecretInput(std::uint64_t v, int bits) : value(v), n_bits(bits) {
        if (bits < 1 || bits > 62) throw std::invalid_argument("SecretInput: n_bits must be in [1, 62]");
        if (v >> bits) throw std::invalid_argument("SecretInput: value does not fit in n_bits");
    }
};

inline std::size_t group_count(int n_bits) {
    if (n_bits < 1) throw std::invalid_argument("group_count: n_bits must be >= 1");
    return static_cast<std::size_t>((n_bits + 1) / 2);
}

/// The secret split into ceil(N/2) two-bit groups. Group i holds bits
/// (2i-1, 2i) of the secret with the odd-position bit as hi; an odd N is
/// padded with a trailing 0.
struct GroupSequence {
    std::vector<BitPair> groups;
    int n_bits = 1;
};

inline GroupSequence to_groups(const SecretInput& input) {
    GroupSequence out;
    out.n_bits = input.n_bits;
    const std::size_t count = group_count(input.n_bits);
    out.groups.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const int hi = static_cast<int>(input.value >> (2 * i)) & 1;
        const int lo = static_cast<int>(input.value >> (2 * i + 1)) & 1;
        out.groups.push_back(BitPair::from_bits(hi, lo));
    }
    return out;
}

inline SecretInput from_groups(const GroupSequence& seq) {
    if (seq.groups.size() != group_count(seq.n_bits))
        throw std::invalid_argument("from_groups: group count does not match n_bits");
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < seq.groups.size(); ++i) {
        value |= static_cast<std::uint64_t>(seq.groups[i].hi()) << (2 * i);
        value |= static_cast<std::uint64_t>(seq.groups[i].lo()) << (2 * i + 1);
    }
    if (seq.n_bits % 2 == 1 && seq.groups.back().lo() != 0)
        throw std::invalid_argument("from_groups: padding bit of the last group must be 0");
    return SecretInput(value, seq.n_bits);
}

} // namespace qpclab

#endif // QPCLAB_ENCODING_HPP
