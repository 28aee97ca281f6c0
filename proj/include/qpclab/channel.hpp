#ifndef QPCLAB_CHANNEL_HPP
#define QPCLAB_CHANNEL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qpclab/bitpair.hpp"
#include "qpclab/party.hpp"
#include "qpclab/quantum.hpp"
#include "qpclab/rng.hpp"

namespace qpclab {

// --- quantum channel ---

/// One wire slot: either a payload particle or a decoy photon.
using Slot = std::variant<ParticleRef, DecoyPhoton>;

/// What actually travels on the quantum channel. Deliberately carries no
/// hint of which slots are decoys; that knowledge stays in the sender's
/// DecoyRecord until the check announcement.
struct QuantumMessage {
    std::vector<Slot> slots;
};

/// Sender-private record of where the decoys sit and how they were prepared.
struct DecoyRecord {
    std::vector<std::size_t> positions;
    std::vector<DecoyPhoton> prepared;

    std::size_t count() const { return positions.size(); }
    bool empty() const { return positions.empty(); }
};

struct InsertResult {
    QuantumMessage message;
    DecoyRecord record;
};

/// Inserts `count` fresh decoys at uniformly random positions among the
/// payload slots. Payload order is preserved.
inline InsertResult insert_decoys(const std::vector<ParticleRef>& payload, std::size_t count,
                                  Rng& rng) {
    InsertResult out;
    out.message.slots.reserve(payload.size() + count);
    for (const ParticleRef& p : payload) out.message.slots.emplace_back(p);

    for (std::size_t k = 0; k < count; ++k) {
        const DecoyPhoton photon = new_decoy(rng);
        const std::size_t pos = rng.uniform(out.message.slots.size() + 1);
        out.message.slots.insert(out.message.slots.begin() + static_cast<std::ptrdiff_t>(pos),
                                 Slot{photon});
        for (std::size_t& existing : out.record.positions)
            if (existing >= pos) ++existing;
        out.record.positions.push_back(pos);
        out.record.prepared.push_back(photon);
    }

    // canonical order: record sorted by final position
    std::vector<std::size_t> order(out.record.positions.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.record.positions[a] < out.record.positions[b];
    });
    DecoyRecord sorted;
    for (std::size_t i : order) {
        sorted.positions.push_back(out.record.positions[i]);
        sorted.prepared.push_back(out.record.prepared[i]);
    }
    out.record = std::move(sorted);
    return out;
}

/// Drops the slots at `decoy_positions` and returns the payload refs in
/// their original order.
inline std::vector<ParticleRef> remove_decoys(const QuantumMessage& msg,
                                              const std::vector<std::size_t>& decoy_positions) {
    std::vector<bool> is_decoy(msg.slots.size(), false);
    for (std::size_t pos : decoy_positions) {
        if (pos >= msg.slots.size()) throw std::invalid_argument("remove_decoys: position out of range");
        is_decoy[pos] = true;
    }
    std::vector<ParticleRef> payload;
    payload.reserve(msg.slots.size() - decoy_positions.size());
    for (std::size_t i = 0; i < msg.slots.size(); ++i) {
        if (is_decoy[i]) continue;
        const ParticleRef* ref = std::get_if<ParticleRef>(&msg.slots[i]);
        if (ref == nullptr) throw std::runtime_error("remove_decoys: unannounced decoy in payload slot");
        payload.push_back(*ref);
    }
    return payload;
}

// --- classical channel ---

/// Public, reliable, and unauthenticated: claimed_sender is whatever the
/// author of the message wrote into it.
struct ClassicalMessage {
    enum class Kind { Ack, PairAnnouncement, SumAnnouncement };

    Party claimed_sender = Party::Alice;
    Party receiver = Party::TP;
    Kind kind = Kind::Ack;
    std::string label;          // "R_A", "R_B", "R", "S"
    std::vector<BitPair> pairs; // PairAnnouncement body
    long long sum = 0;          // SumAnnouncement body
};

// --- eavesdropper models ---

struct EveModel {
    enum class Kind { None, InterceptResendRandomBasis, Custom };

    Kind kind = Kind::None;
    std::function<QuantumMessage(QuantumMessage, QuantumRegister&, Rng&)> quantum_hook;
    std::function<ClassicalMessage(ClassicalMessage)> classical_hook;

    static EveModel none() { return EveModel{}; }
    static EveModel intercept_resend() { return EveModel{Kind::InterceptResendRandomBasis, {}, {}}; }
    static EveModel custom(std::function<QuantumMessage(QuantumMessage, QuantumRegister&, Rng&)> q,
                           std::function<ClassicalMessage(ClassicalMessage)> c) {
        return EveModel{Kind::Custom, std::move(q), std::move(c)};
    }
};

/// Passes a quantum message through the channel. Intercept-resend measures
/// every slot in a fresh random basis and forwards the observed state:
/// decoys are re-prepared as classical records, payload particles collapse
/// in the shared register.
inline QuantumMessage transmit(QuantumMessage msg, const EveModel& eve, QuantumRegister& reg,
                               Rng& rng) {
    switch (eve.kind) {
    case EveModel::Kind::None:
        return msg;
    case EveModel::Kind::InterceptResendRandomBasis:
        for (Slot& slot : msg.slots) {
            const Basis basis = rng.bit() ? Basis::X : Basis::Z;
            if (DecoyPhoton* decoy = std::get_if<DecoyPhoton>(&slot)) {
                const int observed = measure_decoy(*decoy, basis, rng);
                *decoy = DecoyPhoton{basis, observed};
            } else {
                measure_ref_single(reg, std::get<ParticleRef>(slot), basis, rng);
            }
        }
        return msg;
    case EveModel::Kind::Custom:
        return eve.quantum_hook ? eve.quantum_hook(std::move(msg), reg, rng) : msg;
    }
    return msg;
}

inline ClassicalMessage transmit(ClassicalMessage msg, const EveModel& eve) {
    if (eve.kind == EveModel::Kind::Custom && eve.classical_hook)
        return eve.classical_hook(std::move(msg));
    return msg;
}

// --- eavesdropping check ---

/// Sent by the sender once receipt is confirmed: which slots are decoys and
/// in which basis each was prepared. The prepared bits stay private.
struct CheckAnnouncement {
    std::vector<std::size_t> positions;
    std::vector<Basis> bases;
};

inline CheckAnnouncement announce_check(const DecoyRecord& record) {
    CheckAnnouncement ann;
    ann.positions = record.positions;
    ann.bases.reserve(record.prepared.size());
    for (const DecoyPhoton& p : record.prepared) ann.bases.push_back(p.basis);
    return ann;
}

/// Receiver side: measure each announced decoy in the announced basis.
inline std::vector<int> respond_check(const QuantumMessage& delivered, const CheckAnnouncement& ann,
                                      Rng& rng) {
    if (ann.positions.size() != ann.bases.size())
        throw std::invalid_argument("respond_check: malformed announcement");
    std::vector<int> outcomes;
    outcomes.reserve(ann.positions.size());
    for (std::size_t i = 0; i < ann.positions.size(); ++i) {
        const std::size_t pos = ann.positions[i];
        if (pos >= delivered.slots.size())
            throw std::invalid_argument("respond_check: position out of range");
        const DecoyPhoton* decoy = std::get_if<DecoyPhoton>(&delivered.slots[pos]);
        if (decoy == nullptr) throw std::runtime_error("respond_check: announced slot is not a decoy");
        outcomes.push_back(measure_decoy(*decoy, ann.bases[i], rng));
    }
    return outcomes;
}

struct CheckOutcome {
    std::string link;
    std::size_t decoys = 0;
    std::size_t errors = 0;
    double error_rate = 0.0;
    bool passed = true;
};

/// Sender side: compare reported outcomes against the prepared bits.
inline CheckOutcome grade_check(const DecoyRecord& record, const std::vector<int>& outcomes,
                                double threshold) {
    if (record.empty()) throw std::invalid_argument("grade_check: no decoys to check");
    if (outcomes.size() != record.count())
        throw std::invalid_argument("grade_check: outcome count mismatch");
    CheckOutcome res;
    res.decoys = record.count();
    for (std::size_t i = 0; i < outcomes.size(); ++i)
        if (outcomes[i] != record.prepared[i].bit) ++res.errors;
    res.error_rate = static_cast<double>(res.errors) / static_cast<double>(res.decoys);
    res.passed = res.error_rate <= threshold;
    return res;
}

/// Full check: announce positions and bases, measure on the receiver side,
/// grade against the prepared bits. Exceeding the threshold terminates the
/// run.
inline CheckOutcome run_check(const DecoyRecord& record, const QuantumMessage& delivered,
                              double threshold, Rng& rng) {
    if (record.empty()) throw std::invalid_argument("run_check: decoy count is zero");
    const CheckAnnouncement ann = announce_check(record);
    const std::vector<int> outcomes = respond_check(delivered, ann, rng);
    return grade_check(record, outcomes, threshold);
}

// --- link interception ---

/// A man-in-the-middle sitting on one directed quantum link. It impersonates
/// the legitimate receiver toward the sender and the legitimate sender toward
/// the receiver. It never sees the sender's DecoyRecord; it learns decoy
/// positions the same way the receiver would, from the check announcement.
class QuantumLinkInterceptor {
public:
    virtual ~QuantumLinkInterceptor() = default;

    /// The in-flight message is now in the interceptor's hands.
    virtual void capture(const QuantumMessage& in_flight) = 0;

    /// Complete the upstream check in the receiver's role.
    virtual std::vector<int> check_outcomes(const CheckAnnouncement& ann, QuantumRegister& reg,
                                            Rng& rng) = 0;

    /// Produce the message forwarded to the real receiver, wrapped with the
    /// interceptor's own fresh decoys.
    virtual QuantumMessage reissue(QuantumRegister& reg, Rng& rng) = 0;

    /// Decoy record of the reissued message (the interceptor grades the
    /// downstream check with it).
    virtual const DecoyRecord& forwarded_record() const = 0;
};

} // namespace qpclab

#endif // QPCLAB_CHANNEL_HPP
