#ifndef QPCLAB_SERIALIZE_HPP
#define QPCLAB_SERIALIZE_HPP

#include <string>

#include "qpclab/analysis.hpp"
#include "qpclab/attacks.hpp"
#include "qpclab/protocol.hpp"
#include "qpclab/textio.hpp"

// Canonical text formats. Field order is fixed and every float goes through
// format_fixed, so a file is a byte-deterministic function of its source
// value. Line 1 carries the format tag and version.

namespace qpclab {

namespace detail {

inline std::string classical_message_line(const ClassicalMessage& msg) {
    std::string line = "announce: kind=";
    switch (msg.kind) {
    case ClassicalMessage::Kind::Ack: line += "ack"; break;
    case ClassicalMessage::Kind::PairAnnouncement: line += "pairs"; break;
    case ClassicalMessage::Kind::SumAnnouncement: line += "sum"; break;
    }
    line += " from=";
    line += party_name(msg.claimed_sender);
    line += " to=";
    line += party_name(msg.receiver);
    if (msg.kind == ClassicalMessage::Kind::PairAnnouncement) {
        line += " label=" + msg.label + " body=" + join_pairs(msg.pairs);
    } else if (msg.kind == ClassicalMessage::Kind::SumAnnouncement) {
        line += " label=" + msg.label + " body=" + std::to_string(msg.sum);
    }
    return line;
}

inline std::string check_line(const CheckOutcome& c) {
    return "check: link=" + c.link + " decoys=" + std::to_string(c.decoys) +
           " errors=" + std::to_string(c.errors) + " rate=" + format_fixed(c.error_rate) +
           " result=" + (c.passed ? "pass" : "abort");
}

inline std::string verdict_line(const Verdict& v) {
    std::string line = "verdict: ";
    line += verdict_name(v.kind);
    if (v.kind == Verdict::Kind::Aborted) line += " reason=" + v.reason;
    return line;
}

} // namespace detail

inline std::string to_canonical_text(const Transcript& t) {
    std::string out = "qpc-transcript v1\n";
    out += "variant: " + std::string(variant_name(t.config.variant)) + "\n";
    out += "n_bits: " + std::to_string(t.config.n_bits) + "\n";
    out += "group_count: " + std::to_string(group_count(t.config.n_bits)) + "\n";
    out += "decoy_count: " + std::to_string(t.decoy_count) + "\n";
    out += "threshold: " + format_fixed(t.config.threshold) + "\n";
    out += "seed: " + std::to_string(t.config.seed) + "\n";
    out += "x: " + std::to_string(t.alice.secret.value) + "\n";
    out += "y: " + std::to_string(t.bob.secret.value) + "\n";
    out += "keys.k_a: " + join_pairs(t.keys.k_a) + "\n";
    out += "keys.k_b: " + join_pairs(t.keys.k_b) + "\n";
    out += "keys.k_ac: " + join_pairs(t.keys.k_ac) + "\n";
    out += "keys.k_bc: " + join_pairs(t.keys.k_bc) + "\n";
    for (const CheckOutcome& c : t.checks) out += detail::check_line(c) + "\n";
    for (const ClassicalMessage& msg : t.announcements)
        out += detail::classical_message_line(msg) + "\n";
    const auto participant = [&](const char* name, const ParticipantRecord& rec) {
        const std::string prefix(name);
        out += prefix + ".groups: " + join_pairs(rec.groups.groups) + "\n";
        out += prefix + ".measured: " + join_pairs(rec.measured) + "\n";
        out += prefix + ".announced: " + join_pairs(rec.announced) + "\n";
        if (t.config.variant == Variant::Original)
            out += prefix + ".r_prime: " + join_pairs(rec.r_prime) + "\n";
        else
            out += prefix + ".s_prime: " +
                   (rec.s_prime ? std::to_string(*rec.s_prime) : std::string("-")) + "\n";
    };
    participant("alice", t.alice);
    participant("bob", t.bob);
    std::string bells;
    for (std::size_t i = 0; i < t.tp.bell_outcomes.size(); ++i) {
        if (i > 0) bells += ' ';
        bells += bell_name(t.tp.bell_outcomes[i]);
    }
    out += "tp.bell: " + bells + "\n";
    out += "tp.m_c: " + join_pairs(t.tp.m_c) + "\n";
    out += "tp.combined: " + join_pairs(t.tp.combined) + "\n";
    if (t.config.variant == Variant::Fixed)
        out += "tp.s: " + (t.tp.s ? std::to_string(*t.tp.s) : std::string("-")) + "\n";
    out += detail::verdict_line(t.verdict) + "\n";
    return out;
}

inline std::string to_canonical_text(const AttackReport& r) {
    std::string out;
    out += "attacker: " + std::string(party_name(r.attacker)) + "\n";
    out += "applicable: " + std::string(r.applicable ? "true" : "false") + "\n";
    out += "recovered_groups: " + join_pairs(r.recovered_groups.groups) + "\n";
    out += "recovered_secret: " + std::to_string(r.recovered_secret) + "\n";
    out += "ground_truth: " + std::to_string(r.ground_truth) + "\n";
    out += "success: " + std::string(r.success ? "true" : "false") + "\n";
    out += "detected: " + std::string(r.detected ? "true" : "false") + "\n";
    if (r.kind == AttackKind::Active) out += "m_ab: " + join_pairs(r.m_ab) + "\n";
    return out;
}

/// One file may hold several attacker sections (the passive attack is run
/// from both sides).
inline std::string attack_report_file(AttackKind kind, Variant variant, int n_bits,
                                      std::uint64_t seed, const std::vector<AttackReport>& reports) {
    std::string out = "qpc-attack-report v1\n";
    out += "kind: " + std::string(attack_name(kind)) + "\n";
    out += "variant: " + std::string(variant_name(variant)) + "\n";
    out += "n_bits: " + std::to_string(n_bits) + "\n";
    out += "seed: " + std::to_string(seed) + "\n";
    for (const AttackReport& r : reports) out += to_canonical_text(r);
    return out;
}

inline std::string to_canonical_text(const ExperimentReport& report) {
    const ExperimentSpec& spec = report.spec;
    std::string out = "qpc-experiment-report v1\n";
    out += "kind: " + std::string(experiment_name(spec.kind)) + "\n";
    out += "variant: " + std::string(variant_name(spec.variant)) + "\n";
    out += "n_bits: " + std::to_string(spec.n_bits) + "\n";
    out += "trials: " + std::to_string(spec.trials) + "\n";
    out += "seed: " + std::to_string(spec.seed) + "\n";
    out += "eve: " + std::string(spec.eve == EveModel::Kind::InterceptResendRandomBasis
                                     ? "intercept-resend"
                                     : "none") + "\n";
    out += "decoy_count: " +
           (spec.decoy_count ? std::to_string(*spec.decoy_count) : std::string("default")) + "\n";
    out += "threshold: " + format_fixed(spec.threshold) + "\n";
    out += "confidence: 0.99\n";
    for (const RateRow& row : report.rows) {
        out += "row: label=" + row.label + " count=" + std::to_string(row.count) +
               " trials=" + std::to_string(row.trials) + " rate=" + format_fixed(row.rate()) +
               " ci=" + format_fixed(row.ci99());
        if (row.oracle) out += " oracle=" + format_fixed(*row.oracle);
        out += "\n";
    }
    return out;
}

/// CSV export: header row, comma-separated, one row per tallied outcome.
inline std::string to_csv(const ExperimentReport& report) {
    std::string out = "label,count,trials,rate,ci99_halfwidth,oracle\n";
    for (const RateRow& row : report.rows) {
        out += row.label + ',' + std::to_string(row.count) + ',' + std::to_string(row.trials) +
               ',' + format_fixed(row.rate()) + ',' + format_fixed(row.ci99()) + ',';
        if (row.oracle) out += format_fixed(*row.oracle);
        out += "\n";
    }
    return out;
}

} // namespace qpclab

#endif // QPCLAB_SERIALIZE_HPP
