#ifndef QPCLAB_PROTOCOL_HPP
#define QPCLAB_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpclab/channel.hpp"
#include "qpclab/encoding.hpp"
#include "qpclab/keys.hpp"
#include "qpclab/quantum.hpp"

namespace qpclab {

enum class Variant { Original, Fixed };

inline constexpr std::string_view variant_name(Variant v) {
    return v == Variant::Original ? "original" : "fixed";
}

struct ProtocolConfig {
    Variant variant = Variant::Original;
    int n_bits = 1;
    std::optional<std::size_t> decoy_count; // default: one decoy per payload particle
    double threshold = 0.0;
    std::uint64_t seed = 0;
};

struct Verdict {
    enum class Kind { Equal, NotEqual, Aborted };

    Kind kind = Kind::Equal;
    std::string reason; // set when aborted

    static Verdict equal() { return {Kind::Equal, {}}; }
    static Verdict not_equal() { return {Kind::NotEqual, {}}; }
    static Verdict aborted(std::string why) { return {Kind::Aborted, std::move(why)}; }

    friend bool operator==(const Verdict& a, const Verdict& b) {
        return a.kind == b.kind && a.reason == b.reason;
    }
};

inline constexpr std::string_view verdict_name(Verdict::Kind k) {
    switch (k) {
    case Verdict::Kind::Equal: return "equal";
    case Verdict::Kind::NotEqual: return "not_equal";
    case Verdict::Kind::Aborted: return "aborted";
    }
    return "?";
}

// --- per-step operations (the algebra of the protocol) ---

/// TP's preparation: `count` copies of the carrier state, with the particle
/// sequences S_A (qubits 1,2 of each copy), S_B (3,4) and S_C (5,6).
struct PreparedStates {
    QuantumRegister states;
    std::vector<ParticleRef> s_a, s_b, s_c;
};

inline PreparedStates tp_prepare(std::size_t count) {
    if (count == 0) throw std::invalid_argument("tp_prepare: count must be >= 1");
    PreparedStates prep;
    prep.states.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        prep.states.push_back(build_upsilon());
        prep.s_a.push_back(ParticleRef{i, 0});
        prep.s_a.push_back(ParticleRef{i, 1});
        prep.s_b.push_back(ParticleRef{i, 2});
        prep.s_b.push_back(ParticleRef{i, 3});
        prep.s_c.push_back(ParticleRef{i, 4});
        prep.s_c.push_back(ParticleRef{i, 5});
    }
    return prep;
}

/// R = G xor M xor K_tp xor K_peer, the masked word a participant announces.
inline BitPair participant_announce(BitPair g, BitPair m, BitPair k_tp, BitPair k_peer) {
    return g ^ m ^ k_tp ^ k_peer;
}

/// TP's per-group combination in the original variant.
inline BitPair tp_combine_original(BitPair r_a, BitPair r_b, BitPair k_ac, BitPair k_bc,
                                   BitPair m_c) {
    return r_a ^ r_b ^ k_ac ^ k_bc ^ m_c;
}

/// Participants' final step in the original variant: R'_i = R_i xor K_A^i
/// xor K_B^i, equal iff every R'_i is 00.
inline std::pair<std::vector<BitPair>, Verdict>
verdict_original(const std::vector<BitPair>& r_seq, const std::vector<BitPair>& k_a_seq,
                 const std::vector<BitPair>& k_b_seq) {
    if (r_seq.empty()) throw std::invalid_argument("verdict_original: empty announcement");
    if (r_seq.size() != k_a_seq.size() || r_seq.size() != k_b_seq.size())
        throw std::invalid_argument("verdict_original: length mismatch");
    std::vector<BitPair> r_prime;
    r_prime.reserve(r_seq.size());
    bool all_zero = true;
    for (std::size_t i = 0; i < r_seq.size(); ++i) {
        r_prime.push_back(r_seq[i] ^ k_a_seq[i] ^ k_b_seq[i]);
        all_zero = all_zero && r_prime.back() == BitPair{};
    }
    return {std::move(r_prime), all_zero ? Verdict::equal() : Verdict::not_equal()};
}

/// TP's combination in the fixed variant: the same five-term XOR per group,
/// then the total count of 1-bits is published instead of the words.
struct FixedCombineResult {
    std::vector<BitPair> a_seq;
    long long s = 0;
};

inline FixedCombineResult tp_combine_fixed(const std::vector<BitPair>& r_a_seq,
                                           const std::vector<BitPair>& r_b_seq,
                                           const std::vector<BitPair>& k_ac_seq,
                                           const std::vector<BitPair>& k_bc_seq,
                                           const std::vector<BitPair>& m_c_seq) {
    const std::size_t n = r_a_seq.size();
    if (r_b_seq.size() != n || k_ac_seq.size() != n || k_bc_seq.size() != n || m_c_seq.size() != n)
        throw std::invalid_argument("tp_combine_fixed: length mismatch");
    FixedCombineResult out;
    out.a_seq.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.a_seq.push_back(tp_combine_original(r_a_seq[i], r_b_seq[i], k_ac_seq[i], k_bc_seq[i],
                                                m_c_seq[i]));
    out.s = bit_sum(out.a_seq);
    return out;
}

/// Participants' final step in the fixed variant: S' = bit count of
/// K_A xor K_B, equal iff S = S'.
inline std::pair<long long, Verdict> verdict_fixed(long long s, const std::vector<BitPair>& k_a_seq,
                                                   const std::vector<BitPair>& k_b_seq) {
    if (k_a_seq.size() != k_b_seq.size())
        throw std::invalid_argument("verdict_fixed: length mismatch");
    std::vector<BitPair> b_seq;
    b_seq.reserve(k_a_seq.size());
    for (std::size_t i = 0; i < k_a_seq.size(); ++i) b_seq.push_back(k_a_seq[i] ^ k_b_seq[i]);
    const long long s_prime = bit_sum(b_seq);
    return {s_prime, s == s_prime ? Verdict::equal() : Verdict::not_equal()};
}

// --- transcript ---

struct ParticipantRecord {
    SecretInput secret;
    GroupSequence groups;
    std::vector<BitPair> measured;    // M_A^i or M_B^i
    std::vector<BitPair> announced;   // R_A^i or R_B^i
    std::vector<BitPair> r_prime;     // original variant only
    std::optional<long long> s_prime; // fixed variant only
};

struct TpRecord {
    std::vector<BellCode> bell_outcomes;
    std::vector<BitPair> m_c;
    std::vector<BitPair> combined; // R_i (original) or a_i (fixed)
    std::optional<long long> s;    // fixed variant only
};

/// Full record of one run: wire traffic, per-party private state, checks and
/// the verdict. Deterministic function of (inputs, config, seed).
struct Transcript {
    ProtocolConfig config;
    std::size_t decoy_count = 0; // resolved value actually used
    KeyRing keys;
    std::vector<CheckOutcome> checks;
    std::vector<ClassicalMessage> announcements;
    ParticipantRecord alice, bob;
    TpRecord tp;
    Verdict verdict;

    bool any_check_failed() const {
        for (const CheckOutcome& c : checks)
            if (!c.passed) return true;
        return false;
    }
};

/// Adversary capabilities installed into a run. The only modeled capability
/// is a man-in-the-middle on the TP->Alice quantum link, which is what the
/// active attack needs.
struct AdversaryHooks {
    QuantumLinkInterceptor* tp_to_alice = nullptr; // non-owning
};

// --- full choreography ---

inline Transcript run_protocol(const SecretInput& x, const SecretInput& y,
                               const ProtocolConfig& config, const EveModel& eve = EveModel::none(),
                               const AdversaryHooks& hooks = {}) {
    if (config.n_bits < 1) throw std::invalid_argument("run_protocol: n_bits must be >= 1");
    if (x.n_bits != config.n_bits || y.n_bits != config.n_bits)
        throw std::invalid_argument("run_protocol: secret widths must equal config.n_bits");

    Rng rng(config.seed);
    const std::size_t groups = group_count(config.n_bits);

    Transcript t;
    t.config = config;
    t.alice.secret = x;
    t.alice.groups = to_groups(x);
    t.bob.secret = y;
    t.bob.groups = to_groups(y);

    t.keys = simulate_qkd(groups, rng);
    const ParticipantKeyView alice_keys = participant_view(t.keys, Party::Alice);
    const ParticipantKeyView bob_keys = participant_view(t.keys, Party::Bob);
    const TpKeyView tp_keys = tp_view(t.keys);

    PreparedStates prep = tp_prepare(groups);
    t.decoy_count = config.decoy_count.value_or(prep.s_a.size());

    auto [msg_a, rec_a] = insert_decoys(prep.s_a, t.decoy_count, rng);
    auto [msg_b, rec_b] = insert_decoys(prep.s_b, t.decoy_count, rng);

    // The configured eavesdropper taps the TP->Alice transmission; the
    // TP->Bob link stays clean so detection statistics match a single
    // exposed channel.
    QuantumMessage wire_a = transmit(std::move(msg_a), eve, prep.states, rng);
    QuantumMessage wire_b = transmit(std::move(msg_b), EveModel::none(), prep.states, rng);

    auto push_ack = [&t](Party from, Party to) {
        t.announcements.push_back(ClassicalMessage{from, to, ClassicalMessage::Kind::Ack, "", {}, 0});
    };

    bool check_failed = false;
    std::vector<ParticleRef> payload_a;

    if (hooks.tp_to_alice != nullptr) {
        QuantumLinkInterceptor& mitm = *hooks.tp_to_alice;
        mitm.capture(wire_a);
        push_ack(Party::Alice, Party::TP); // forged: the interceptor confirms receipt as "Alice"
        if (t.decoy_count > 0) {
            const CheckAnnouncement ann = announce_check(rec_a);
            const std::vector<int> outcomes = mitm.check_outcomes(ann, prep.states, rng);
            CheckOutcome res = grade_check(rec_a, outcomes, config.threshold);
            res.link = "tp->alice";
            t.checks.push_back(res);
            check_failed = check_failed || !res.passed;
        }
        if (!check_failed) {
            QuantumMessage fwd = mitm.reissue(prep.states, rng);
            push_ack(Party::Alice, Party::TP); // genuine ack, addressed to "TP"
            const DecoyRecord& rec_fwd = mitm.forwarded_record();
            if (!rec_fwd.empty()) {
                const CheckAnnouncement ann = announce_check(rec_fwd);
                const std::vector<int> outcomes = respond_check(fwd, ann, rng);
                CheckOutcome res = grade_check(rec_fwd, outcomes, config.threshold);
                res.link = "tp->alice";
                t.checks.push_back(res);
                check_failed = check_failed || !res.passed;
            }
            if (!check_failed) payload_a = remove_decoys(fwd, rec_fwd.positions);
        }
    } else {
        push_ack(Party::Alice, Party::TP);
        if (t.decoy_count > 0) {
            CheckOutcome res = run_check(rec_a, wire_a, config.threshold, rng);
            res.link = "tp->alice";
            t.checks.push_back(res);
            check_failed = check_failed || !res.passed;
        }
        if (!check_failed) payload_a = remove_decoys(wire_a, rec_a.positions);
    }

    push_ack(Party::Bob, Party::TP);
    std::vector<ParticleRef> payload_b;
    if (t.decoy_count > 0) {
        CheckOutcome res = run_check(rec_b, wire_b, config.threshold, rng);
        res.link = "tp->bob";
        t.checks.push_back(res);
        check_failed = check_failed || !res.passed;
    }
    if (!check_failed) payload_b = remove_decoys(wire_b, rec_b.positions);

    if (check_failed) {
        t.verdict = Verdict::aborted("eavesdropping check failed");
        return t;
    }

    // Z measurements, Alice then Bob (disjoint qubits, order fixed for
    // reproducible transcripts)
    auto measure_groups = [&](const std::vector<ParticleRef>& payload) {
        std::vector<BitPair> m;
        m.reserve(groups);
        for (std::size_t i = 0; i < groups; ++i)
            m.push_back(z_measure_ref_pair(prep.states, payload[2 * i], payload[2 * i + 1], rng));
        return m;
    };
    t.alice.measured = measure_groups(payload_a);
    t.bob.measured = measure_groups(payload_b);

    for (std::size_t i = 0; i < groups; ++i) {
        t.alice.announced.push_back(participant_announce(
            t.alice.groups.groups[i], t.alice.measured[i], alice_keys.k_tp[i], alice_keys.k_a[i]));
        t.bob.announced.push_back(participant_announce(
            t.bob.groups.groups[i], t.bob.measured[i], bob_keys.k_tp[i], bob_keys.k_b[i]));
    }
    t.announcements.push_back(ClassicalMessage{Party::Alice, Party::TP,
                                               ClassicalMessage::Kind::PairAnnouncement, "R_A",
                                               t.alice.announced, 0});
    t.announcements.push_back(ClassicalMessage{Party::Bob, Party::TP,
                                               ClassicalMessage::Kind::PairAnnouncement, "R_B",
                                               t.bob.announced, 0});

    // TP's Bell measurements on S_C
    for (std::size_t i = 0; i < groups; ++i) {
        const BellCode code =
            bell_measure_ref_pair(prep.states, prep.s_c[2 * i], prep.s_c[2 * i + 1], rng);
        t.tp.bell_outcomes.push_back(code);
        t.tp.m_c.push_back(bell_code_bits(code));
    }

    if (config.variant == Variant::Original) {
        for (std::size_t i = 0; i < groups; ++i)
            t.tp.combined.push_back(tp_combine_original(t.alice.announced[i], t.bob.announced[i],
                                                        tp_keys.k_ac[i], tp_keys.k_bc[i],
                                                        t.tp.m_c[i]));
        t.announcements.push_back(ClassicalMessage{Party::TP, Party::Alice,
                                                   ClassicalMessage::Kind::PairAnnouncement, "R",
                                                   t.tp.combined, 0});
        t.announcements.push_back(ClassicalMessage{Party::TP, Party::Bob,
                                                   ClassicalMessage::Kind::PairAnnouncement, "R",
                                                   t.tp.combined, 0});
        auto [r_prime_a, verdict_a] = verdict_original(t.tp.combined, alice_keys.k_a, alice_keys.k_b);
        auto [r_prime_b, verdict_b] = verdict_original(t.tp.combined, bob_keys.k_a, bob_keys.k_b);
        t.alice.r_prime = std::move(r_prime_a);
        t.bob.r_prime = std::move(r_prime_b);
        t.verdict = verdict_a; // verdict_b is identical by construction
        (void)verdict_b;
    } else {
        FixedCombineResult combined = tp_combine_fixed(t.alice.announced, t.bob.announced,
                                                       tp_keys.k_ac, tp_keys.k_bc, t.tp.m_c);
        t.tp.combined = std::move(combined.a_seq);
        t.tp.s = combined.s;
        t.announcements.push_back(ClassicalMessage{Party::TP, Party::Alice,
                                                   ClassicalMessage::Kind::SumAnnouncement, "S",
                                                   {}, combined.s});
        t.announcements.push_back(ClassicalMessage{Party::TP, Party::Bob,
                                                   ClassicalMessage::Kind::SumAnnouncement, "S",
                                                   {}, combined.s});
        auto [s_prime_a, verdict_a] = verdict_fixed(combined.s, alice_keys.k_a, alice_keys.k_b);
        auto [s_prime_b, verdict_b] = verdict_fixed(combined.s, bob_keys.k_a, bob_keys.k_b);
        t.alice.s_prime = s_prime_a;
        t.bob.s_prime = s_prime_b;
        t.verdict = verdict_a;
        (void)verdict_b;
    }
    return t;
}

} // namespace qpclab

#endif // QPCLAB_PROTOCOL_HPP
