#ifndef QPCLAB_KEYS_HPP
#define QPCLAB_KEYS_HPP

#include <stdexcept>
#include <vector>

#include "qpclab/bitpair.hpp"
#include "qpclab/party.hpp"
#include "qpclab/rng.hpp"

namespace qpclab {

/// The four shared key sequences established before a run. k_a and k_b are
/// both Alice<->Bob keys; k_ac is Alice<->TP and k_bc is Bob<->TP. QKD is
/// modeled as an oracle handing identical uniform randomness to both ends,
/// and keys are generated fresh for every run (one-time-pad discipline).
struct KeyRing {
    std::vector<BitPair> k_a, k_b, k_ac, k_bc;

    std::size_t length() const { return k_a.size(); }
};

inline KeyRing simulate_qkd(std::size_t length, Rng& rng) {
    if (length == 0) throw std::invalid_argument("simulate_qkd: length must be >= 1");
    KeyRing ring;
    auto fill = [&](std::vector<BitPair>& seq) {
        seq.reserve(length);
        for (std::size_t i = 0; i < length; ++i)
            seq.push_back(BitPair(static_cast<unsigned>(rng.uniform(4))));
    };
    fill(ring.k_a);
    fill(ring.k_b);
    fill(ring.k_ac);
    fill(ring.k_bc);
    return ring;
}

/// What Alice or Bob legitimately holds: both Alice<->Bob keys plus that
/// party's own key with TP. The other participant's TP key is absent by
/// construction.
struct ParticipantKeyView {
    Party who = Party::Alice;
    std::vector<BitPair> k_a, k_b;
    std::vector<BitPair> k_tp; // k_ac for Alice, k_bc for Bob
};

/// What TP legitimately holds. No k_a or k_b field exists here, so TP-side
/// code cannot read the participants' pad keys even by accident.
struct TpKeyView {
    std::vector<BitPair> k_ac, k_bc;
};

inline ParticipantKeyView participant_view(const KeyRing& ring, Party who) {
    if (who == Party::TP) throw std::invalid_argument("participant_view: TP has no participant view");
    return ParticipantKeyView{who, ring.k_a, ring.k_b, who == Party::Alice ? ring.k_ac : ring.k_bc};
}

inline TpKeyView tp_view(const KeyRing& ring) { return TpKeyView{ring.k_ac, ring.k_bc}; }

} // namespace qpclab

#endif // QPCLAB_KEYS_HPP
