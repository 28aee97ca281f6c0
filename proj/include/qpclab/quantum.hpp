#ifndef QPCLAB_QUANTUM_HPP
#define QPCLAB_QUANTUM_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "qpclab/bitpair.hpp"
#include "qpclab/rng.hpp"

namespace qpclab {

using cplx = std::complex<double>;

enum class Basis { Z, X };

inline constexpr std::string_view basis_name(Basis b) { return b == Basis::Z ? "Z" : "X"; }

/// The four Bell states of a qubit pair: phi± = (|00> ± |11>)/√2,
/// psi± = (|01> ± |10>)/√2.
enum class BellCode { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

inline constexpr std::string_view bell_name(BellCode c) {
    switch (c) {
    case BellCode::PhiPlus: return "phi+";
    case BellCode::PhiMinus: return "phi-";
    case BellCode::PsiPlus: return "psi+";
    case BellCode::PsiMinus: return "psi-";
    }
    return "?";
}

/// Agreed two-bit coding of the Bell states: phi+ <-> 00, psi+ <-> 01,
/// psi- <-> 10, phi- <-> 11.
inline constexpr BitPair bell_code_bits(BellCode c) {
    switch (c) {
    case BellCode::PhiPlus: return BitPair::from_bits(0, 0);
    case BellCode::PsiPlus: return BitPair::from_bits(0, 1);
    case BellCode::PsiMinus: return BitPair::from_bits(1, 0);
    case BellCode::PhiMinus: return BitPair::from_bits(1, 1);
    }
    return BitPair{};
}

/// A single-particle decoy, prepared in one of |0>, |1>, |+>, |->.
/// Decoys are product states, so they are tracked as classical records
/// (basis, bit) instead of extra statevector qubits.
struct DecoyPhoton {
    Basis basis = Basis::Z;
    int bit = 0; // Z: 0=|0>, 1=|1>;  X: 0=|+>, 1=|->

    friend constexpr bool operator==(DecoyPhoton, DecoyPhoton) = default;
};

inline DecoyPhoton new_decoy(Rng& rng) {
    const auto v = rng.uniform(4);
    return DecoyPhoton{(v & 2) ? Basis::X : Basis::Z, static_cast<int>(v & 1)};
}

/// Measures a decoy in the given basis. A matched basis reproduces the
/// prepared bit deterministically; a mismatched basis yields a fair coin.
inline int measure_decoy(const DecoyPhoton& photon, Basis basis, Rng& rng) {
    if (basis == photon.basis) return photon.bit;
    return rng.bit();
}

/// Pure state of `num_qubits` qubits. Index convention: qubit 0 is the
/// leftmost ket symbol and the most significant bit of the amplitude index.
class StateVector {
public:
    explicit StateVector(int num_qubits)
        : num_qubits_(check_qubits(num_qubits)),
          amps_(std::size_t{1} << num_qubits, cplx{0.0, 0.0}) {
        amps_[0] = cplx{1.0, 0.0};
    }

    StateVector(int num_qubits, std::vector<cplx> amplitudes)
        : num_qubits_(check_qubits(num_qubits)), amps_(std::move(amplitudes)) {
        if (amps_.size() != (std::size_t{1} << num_qubits_))
            throw std::invalid_argument("StateVector: amplitude count must be 2^num_qubits");
        if (std::abs(norm_squared() - 1.0) > 1e-9)
            throw std::invalid_argument("StateVector: state is not normalized");
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx amplitude(std::size_t index) const { return amps_.at(index); }

    double norm_squared() const {
        double s = 0.0;
        for (const cplx& a : amps_) s += std::norm(a);
        return s;
    }

    bool is_normalized(double tol = 1e-9) const { return std::abs(norm_squared() - 1.0) <= tol; }

    /// Bit of `index` belonging to `qubit` under the msb-first convention.
    int bit_at(std::size_t index, int qubit) const {
        return static_cast<int>((index >> (num_qubits_ - 1 - qubit)) & 1u);
    }

private:
    static int check_qubits(int n) {
        if (n < 1 || n > 24) throw std::invalid_argument("StateVector: unsupported qubit count");
        return n;
    }

    int num_qubits_;
    std::vector<cplx> amps_;
};

// --- the six-qubit carrier state ---
//
// 32 equally weighted kets, amplitude ±1/sqrt(32). The split into a
// positive block of 20 and a negative block of 12 is what produces the
// Bell-block structure used by the protocol.
inline constexpr std::array<std::string_view, 20> kCarrierPlusKets = {
    "000000", "111111", "000011", "111100", "000101", "111010", "000110",
    "111001", "001001", "110110", "001111", "110000", "010001", "101110",
    "010010", "101101", "011000", "100111", "011101", "100010",
};
inline constexpr std::array<std::string_view, 12> kCarrierMinusKets = {
    "010100", "101011", "010111", "101000", "011011", "100100",
    "001010", "110101", "001100", "110011", "011110", "100001",
};

inline std::size_t ket_index(std::string_view ket) {
    std::size_t idx = 0;
    for (char c : ket) {
        if (c != '0' && c != '1') throw std::invalid_argument("ket_index: not a bit string");
        idx = idx << 1 | static_cast<std::size_t>(c - '0');
    }
    return idx;
}

/// Builds the six-qubit entangled carrier state |Y>.
inline StateVector build_upsilon() {
    static const StateVector cached = [] {
        std::vector<cplx> amps(64, cplx{0.0, 0.0});
        const double mag = 1.0 / std::sqrt(32.0);
        for (std::string_view ket : kCarrierPlusKets) amps[ket_index(ket)] = cplx{mag, 0.0};
        for (std::string_view ket : kCarrierMinusKets) amps[ket_index(ket)] = cplx{-mag, 0.0};
        return StateVector(6, std::move(amps));
    }();
    return cached;
}

namespace detail {

inline void check_pair(const StateVector& state, int q_hi, int q_lo) {
    const int n = state.num_qubits();
    if (q_hi < 0 || q_hi >= n || q_lo < 0 || q_lo >= n)
        throw std::invalid_argument("measurement: qubit index out of range");
    if (q_hi == q_lo) throw std::invalid_argument("measurement: duplicate qubit index");
}

/// Samples an index from a probability vector that sums to ~1.
template <std::size_t N>
int sample_outcome(const std::array<double, N>& probs, Rng& rng) {
    const double r = rng.real();
    double cumulative = 0.0;
    int last_possible = -1;
    for (std::size_t i = 0; i < N; ++i) {
        if (probs[i] <= 0.0) continue;
        last_possible = static_cast<int>(i);
        cumulative += probs[i];
        if (r < cumulative) return static_cast<int>(i);
    }
    if (last_possible < 0) throw std::runtime_error("sample_outcome: all outcomes have zero probability");
    return last_possible; // floating-point remainder fell past the last bucket
}

inline StateVector renormalized(int num_qubits, std::vector<cplx> amps) {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    if (s < 1e-12)
        throw std::runtime_error("measurement: collapse onto a zero-probability branch (broken state)");
    const double scale = 1.0 / std::sqrt(s);
    for (cplx& a : amps) a *= scale;
    return StateVector(num_qubits, std::move(amps));
}

} // namespace detail

/// Exact Born probabilities of the four Z outcomes (hi,lo) of a qubit pair,
/// marginalized over all other qubits. Index = (hi << 1) | lo.
inline std::array<double, 4> pair_marginals_z(const StateVector& state, int q_hi, int q_lo) {
    detail::check_pair(state, q_hi, q_lo);
    std::array<double, 4> probs{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const int outcome = state.bit_at(i, q_hi) << 1 | state.bit_at(i, q_lo);
        probs[static_cast<std::size_t>(outcome)] += std::norm(state.amplitude(i));
    }
    return probs;
}

/// Exact Born probabilities of the four Bell outcomes of a qubit pair.
/// Index = static_cast<int>(BellCode).
inline std::array<double, 4> pair_marginals_bell(const StateVector& state, int q_hi, int q_lo) {
    detail::check_pair(state, q_hi, q_lo);
    const int n = state.num_qubits();
    const std::size_t mask_hi = std::size_t{1} << (n - 1 - q_hi);
    const std::size_t mask_lo = std::size_t{1} << (n - 1 - q_lo);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::array<double, 4> probs{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if ((i & mask_hi) || (i & mask_lo)) continue; // visit each rest-pattern once
        const cplx a00 = state.amplitude(i);
        const cplx a01 = state.amplitude(i | mask_lo);
        const cplx a10 = state.amplitude(i | mask_hi);
        const cplx a11 = state.amplitude(i | mask_hi | mask_lo);
        probs[static_cast<int>(BellCode::PhiPlus)] += std::norm((a00 + a11) * inv_sqrt2);
        probs[static_cast<int>(BellCode::PhiMinus)] += std::norm((a00 - a11) * inv_sqrt2);
        probs[static_cast<int>(BellCode::PsiPlus)] += std::norm((a01 + a10) * inv_sqrt2);
        probs[static_cast<int>(BellCode::PsiMinus)] += std::norm((a01 - a10) * inv_sqrt2);
    }
    return probs;
}

struct ZPairResult {
    BitPair outcome; // hi bit = q_hi's result, lo bit = q_lo's
    StateVector collapsed;
};

/// Projective Z-basis measurement of two qubits, with collapse.
inline ZPairResult z_measure_pair(const StateVector& state, int q_hi, int q_lo, Rng& rng) {
    const auto probs = pair_marginals_z(state, q_hi, q_lo);
    const int outcome = detail::sample_outcome(probs, rng);
    std::vector<cplx> amps(state.amplitudes());
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const int pattern = state.bit_at(i, q_hi) << 1 | state.bit_at(i, q_lo);
        if (pattern != outcome) amps[i] = cplx{0.0, 0.0};
    }
    return {BitPair(static_cast<unsigned>(outcome)),
            detail::renormalized(state.num_qubits(), std::move(amps))};
}

struct BellPairResult {
    BellCode outcome;
    StateVector collapsed;
};

/// Projective measurement of two qubits in the Bell basis, with collapse.
inline BellPairResult bell_measure_pair(const StateVector& state, int q_hi, int q_lo, Rng& rng) {
    const auto probs = pair_marginals_bell(state, q_hi, q_lo);
    const auto code = static_cast<BellCode>(detail::sample_outcome(probs, rng));

    const int n = state.num_qubits();
    const std::size_t mask_hi = std::size_t{1} << (n - 1 - q_hi);
    const std::size_t mask_lo = std::size_t{1} << (n - 1 - q_lo);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<cplx> amps(state.dim(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if ((i & mask_hi) || (i & mask_lo)) continue;
        const cplx a00 = state.amplitude(i);
        const cplx a01 = state.amplitude(i | mask_lo);
        const cplx a10 = state.amplitude(i | mask_hi);
        const cplx a11 = state.amplitude(i | mask_hi | mask_lo);
        switch (code) {
        case BellCode::PhiPlus: {
            const cplx o = (a00 + a11) * inv_sqrt2;
            amps[i] = o * inv_sqrt2;
            amps[i | mask_hi | mask_lo] = o * inv_sqrt2;
            break;
        }
        case BellCode::PhiMinus: {
            const cplx o = (a00 - a11) * inv_sqrt2;
            amps[i] = o * inv_sqrt2;
            amps[i | mask_hi | mask_lo] = -o * inv_sqrt2;
            break;
        }
        case BellCode::PsiPlus: {
            const cplx o = (a01 + a10) * inv_sqrt2;
            amps[i | mask_lo] = o * inv_sqrt2;
            amps[i | mask_hi] = o * inv_sqrt2;
            break;
        }
        case BellCode::PsiMinus: {
            const cplx o = (a01 - a10) * inv_sqrt2;
            amps[i | mask_lo] = o * inv_sqrt2;
            amps[i | mask_hi] = -o * inv_sqrt2;
            break;
        }
        }
    }
    return {code, detail::renormalized(n, std::move(amps))};
}

struct SingleResult {
    int bit;
    StateVector collapsed;
};

/// Projective single-qubit measurement in the Z or X basis, with collapse.
/// X outcomes use the decoy coding: 0 = |+>, 1 = |->.
inline SingleResult measure_single(const StateVector& state, int qubit, Basis basis, Rng& rng) {
    const int n = state.num_qubits();
    if (qubit < 0 || qubit >= n) throw std::invalid_argument("measure_single: qubit out of range");
    const std::size_t mask = std::size_t{1} << (n - 1 - qubit);

    if (basis == Basis::Z) {
        std::array<double, 2> probs{0.0, 0.0};
        for (std::size_t i = 0; i < state.dim(); ++i)
            probs[(i & mask) ? 1 : 0] += std::norm(state.amplitude(i));
        const int bit = detail::sample_outcome(probs, rng);
        std::vector<cplx> amps(state.amplitudes());
        for (std::size_t i = 0; i < amps.size(); ++i)
            if (static_cast<int>((i & mask) ? 1 : 0) != bit) amps[i] = cplx{0.0, 0.0};
        return {bit, detail::renormalized(n, std::move(amps))};
    }

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::array<double, 2> probs{0.0, 0.0};
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & mask) continue;
        const cplx a0 = state.amplitude(i);
        const cplx a1 = state.amplitude(i | mask);
        probs[0] += std::norm((a0 + a1) * inv_sqrt2);
        probs[1] += std::norm((a0 - a1) * inv_sqrt2);
    }
    const int bit = detail::sample_outcome(probs, rng);
    const double sign = bit == 0 ? 1.0 : -1.0;
    std::vector<cplx> amps(state.dim(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & mask) continue;
        const cplx o = (state.amplitude(i) + sign * state.amplitude(i | mask)) * inv_sqrt2;
        amps[i] = o * inv_sqrt2;
        amps[i | mask] = sign * o * inv_sqrt2;
    }
    return {bit, detail::renormalized(n, std::move(amps))};
}

// --- shared quantum medium ---

/// The pool of entangled states alive during one protocol run.
using QuantumRegister = std::vector<StateVector>;

/// Names one particle: qubit `qubit` of register state `state_index`.
struct ParticleRef {
    std::size_t state_index = 0;
    int qubit = 0;

    friend constexpr bool operator==(ParticleRef, ParticleRef) = default;
};

inline BitPair z_measure_ref_pair(QuantumRegister& reg, ParticleRef hi, ParticleRef lo, Rng& rng) {
    if (hi.state_index != lo.state_index)
        throw std::invalid_argument("z_measure_ref_pair: particles live in different states");
    auto& state = reg.at(hi.state_index);
    auto [outcome, collapsed] = z_measure_pair(state, hi.qubit, lo.qubit, rng);
    state = std::move(collapsed);
    return outcome;
}

inline BellCode bell_measure_ref_pair(QuantumRegister& reg, ParticleRef hi, ParticleRef lo, Rng& rng) {
    if (hi.state_index != lo.state_index)
        throw std::invalid_argument("bell_measure_ref_pair: particles live in different states");
    auto& state = reg.at(hi.state_index);
    auto [outcome, collapsed] = bell_measure_pair(state, hi.qubit, lo.qubit, rng);
    state = std::move(collapsed);
    return outcome;
}

inline int measure_ref_single(QuantumRegister& reg, ParticleRef p, Basis basis, Rng& rng) {
    auto& state = reg.at(p.state_index);
    auto [bit, collapsed] = measure_single(state, p.qubit, basis, rng);
    state = std::move(collapsed);
    return bit;
}

} // namespace qpclab

#endif // QPCLAB_QUANTUM_HPP
