#ifndef QPCLAB_ATTACKS_HPP
#define QPCLAB_ATTACKS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qpclab/protocol.hpp"

namespace qpclab {

enum class AttackKind { Passive, Active };

inline constexpr std::string_view attack_name(AttackKind k) {
    return k == AttackKind::Passive ? "passive" : "active";
}

/// What an adversary recovered and how it compares to the truth.
struct AttackReport {
    AttackKind kind = AttackKind::Passive;
    Party attacker = Party::Bob;
    bool applicable = true; // false when the variant exposes no usable announcement
    GroupSequence recovered_groups;
    std::uint64_t recovered_secret = 0;
    std::uint64_t ground_truth = 0;
    bool success = false;
    bool detected = false;
    std::vector<BitPair> m_ab; // active attack only: Bob's mid-flight measurements
};

/// Everything one participant legitimately holds after a run: the public
/// announcements plus that party's own keys, groups and measurements.
/// Attack code consumes only this view, never the full transcript.
struct ParticipantTranscriptView {
    Variant variant = Variant::Original;
    Party who = Party::Alice;
    std::vector<BitPair> r_public;      // TP's R announcement (original variant)
    std::optional<long long> s_public;  // TP's S announcement (fixed variant)
    ParticipantKeyView keys;
    SecretInput own_secret;
    GroupSequence own_groups;
    std::vector<BitPair> own_measured;
    std::vector<BitPair> own_announced;
};

inline ParticipantTranscriptView view_for(const Transcript& t, Party who) {
    if (who == Party::TP) throw std::invalid_argument("view_for: TP is not a participant");
    ParticipantTranscriptView view;
    view.variant = t.config.variant;
    view.who = who;
    for (const ClassicalMessage& msg : t.announcements) {
        if (msg.claimed_sender != Party::TP) continue;
        if (msg.kind == ClassicalMessage::Kind::PairAnnouncement && view.r_public.empty())
            view.r_public = msg.pairs;
        if (msg.kind == ClassicalMessage::Kind::SumAnnouncement && !view.s_public)
            view.s_public = msg.sum;
    }
    view.keys = participant_view(t.keys, who);
    const ParticipantRecord& rec = who == Party::Alice ? t.alice : t.bob;
    view.own_secret = rec.secret;
    view.own_groups = rec.groups;
    view.own_measured = rec.measured;
    view.own_announced = rec.announced;
    return view;
}

/// The post-hoc attack: with the original variant, R'_i = R_i xor K_A^i xor
/// K_B^i equals G_A^i xor G_B^i, so XORing in the attacker's own group
/// yields the other party's group exactly. Against the fixed variant only S
/// is public and the computation is undefined, reported as not applicable.
inline AttackReport passive_attack(const ParticipantTranscriptView& view,
                                   const SecretInput& ground_truth) {
    AttackReport report;
    report.kind = AttackKind::Passive;
    report.attacker = view.who;
    report.ground_truth = ground_truth.value;
    report.detected = false;

    if (view.variant != Variant::Original || view.r_public.empty()) {
        report.applicable = false;
        return report;
    }
    if (view.r_public.size() != view.own_groups.groups.size())
        throw std::invalid_argument("passive_attack: announcement length mismatch");

    report.recovered_groups.n_bits = view.own_groups.n_bits;
    for (std::size_t i = 0; i < view.r_public.size(); ++i) {
        const BitPair r_prime = view.r_public[i] ^ view.keys.k_a[i] ^ view.keys.k_b[i];
        report.recovered_groups.groups.push_back(r_prime ^ view.own_groups.groups[i]);
    }
    report.recovered_secret = from_groups(report.recovered_groups).value;
    report.success = report.recovered_secret == ground_truth.value;
    return report;
}

/// M_C from Bob's hijacked measurement and his own: the carrier state forces
/// M_A xor M_B xor M_C = 00 on every copy, and M_A = M_AB after Bob's
/// mid-flight collapse, so M_C = M_AB xor M_B.
inline BitPair deduce_mc(BitPair m_ab, BitPair m_b) { return m_ab ^ m_b; }

namespace detail {

/// Bob's man-in-the-middle front on the TP->Alice link. Holds the captured
/// message, completes TP's check in Alice's role, measures the payload in
/// the Z basis, and forwards it to Alice under a fresh decoy layer.
class BobInterceptor final : public QuantumLinkInterceptor {
public:
    explicit BobInterceptor(std::size_t decoy_count) : decoy_count_(decoy_count) {}

    void capture(const QuantumMessage& in_flight) override { captured_ = in_flight; }

    std::vector<int> check_outcomes(const CheckAnnouncement& ann, QuantumRegister& /*reg*/,
                                    Rng& rng) override {
        upstream_positions_ = ann.positions;
        return respond_check(captured_, ann, rng);
    }

    QuantumMessage reissue(QuantumRegister& reg, Rng& rng) override {
        const std::vector<ParticleRef> payload = remove_decoys(captured_, upstream_positions_);
        m_ab_.clear();
        for (std::size_t i = 0; 2 * i + 1 < payload.size(); ++i)
            m_ab_.push_back(z_measure_ref_pair(reg, payload[2 * i], payload[2 * i + 1], rng));
        InsertResult wrapped = insert_decoys(payload, decoy_count_, rng);
        record_ = std::move(wrapped.record);
        return std::move(wrapped.message);
    }

    const DecoyRecord& forwarded_record() const override { return record_; }

    const std::vector<BitPair>& m_ab() const { return m_ab_; }

private:
    std::size_t decoy_count_;
    QuantumMessage captured_;
    std::vector<std::size_t> upstream_positions_;
    std::vector<BitPair> m_ab_;
    DecoyRecord record_;
};

} // namespace detail

struct ActiveAttackResult {
    Transcript transcript;
    AttackReport report;
};

/// The man-in-the-middle attack: Bob intercepts S_A*, completes TP's check
/// as "Alice", Z-measures the payload (M_AB), re-wraps it with his own
/// decoys and passes TP's check toward Alice as "TP". Alice's measurement
/// then reproduces M_AB, and once TP publishes R_i Bob unmasks G_A^i as
/// R_i xor K_BC^i xor M_C^i xor R_B^i xor K_A^i xor M_AB^i.
inline ActiveAttackResult active_attack(const SecretInput& x, const SecretInput& y,
                                        const ProtocolConfig& config) {
    const std::size_t decoys =
        config.decoy_count.value_or(2 * group_count(config.n_bits));
    detail::BobInterceptor bob(decoys);
    AdversaryHooks hooks;
    hooks.tp_to_alice = &bob;

    ActiveAttackResult out;
    out.transcript = run_protocol(x, y, config, EveModel::none(), hooks);

    AttackReport& report = out.report;
    report.kind = AttackKind::Active;
    report.attacker = Party::Bob;
    report.ground_truth = x.value;
    report.detected = out.transcript.any_check_failed();
    report.m_ab = bob.m_ab();

    const bool usable = config.variant == Variant::Original &&
                        out.transcript.verdict.kind != Verdict::Kind::Aborted;
    if (!usable) {
        report.applicable = false;
        return out;
    }

    const ParticipantTranscriptView view = view_for(out.transcript, Party::Bob);
    report.recovered_groups.n_bits = config.n_bits;
    for (std::size_t i = 0; i < view.r_public.size(); ++i) {
        const BitPair m_c = deduce_mc(report.m_ab[i], view.own_measured[i]);
        report.recovered_groups.groups.push_back(view.r_public[i] ^ view.keys.k_tp[i] ^ m_c ^
                                                 view.own_announced[i] ^ view.keys.k_a[i] ^
                                                 report.m_ab[i]);
    }
    report.recovered_secret = from_groups(report.recovered_groups).value;
    report.applicable = true;
    report.success = report.recovered_secret == x.value;
    return out;
}

} // namespace qpclab

#endif // QPCLAB_ATTACKS_HPP
