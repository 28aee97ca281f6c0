#ifndef QPCLAB_ANALYSIS_HPP
#define QPCLAB_ANALYSIS_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpclab/attacks.hpp"
#include "qpclab/protocol.hpp"

namespace qpclab {

// --- small statistics helpers ---

/// 99% two-sided normal quantile, used for binomial confidence half-widths.
inline constexpr double kZ99 = 2.5758293035489004;
/// chi-square critical value at significance 0.01 with 3 degrees of freedom
/// (uniformity tests over the four BitPair values).
inline constexpr double kChiSquare99Df3 = 11.344866730144373;

inline double binomial_ci99(std::size_t count, std::size_t trials) {
    if (trials == 0) return 0.0;
    const double p = static_cast<double>(count) / static_cast<double>(trials);
    return kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

/// Pearson chi-square statistic against the uniform law over k categories.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
    if (counts.empty()) throw std::invalid_argument("chi_square_uniform: no categories");
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    if (expected <= 0.0) throw std::invalid_argument("chi_square_uniform: no observations");
    double stat = 0.0;
    for (std::size_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

// --- exact oracle for the fixed variant's equality test ---

struct ExactProbability {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    double value() const {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
};

/// Probability that the fixed protocol declares Equal given the group-wise
/// difference d = G_A xor G_B, by exhaustive enumeration of the key
/// difference b = K_A xor K_B over {00,01,10,11}^g. Equal fires iff
/// bit_sum(d xor b) = bit_sum(b).
inline ExactProbability exact_false_equal(const std::vector<BitPair>& d) {
    const std::size_t g = d.size();
    if (g == 0) throw std::invalid_argument("exact_false_equal: empty difference pattern");
    if (g > 10) throw std::invalid_argument("exact_false_equal: more than 10 groups (use Monte Carlo)");
    const std::uint64_t total = std::uint64_t{1} << (2 * g);
    std::uint64_t favorable = 0;
    for (std::uint64_t b = 0; b < total; ++b) {
        long long sum_b = 0, sum_a = 0;
        for (std::size_t i = 0; i < g; ++i) {
            const BitPair bi(static_cast<unsigned>((b >> (2 * i)) & 3u));
            sum_b += bi.popcount();
            sum_a += (d[i] ^ bi).popcount();
        }
        if (sum_a == sum_b) ++favorable;
    }
    const std::uint64_t gcd = std::gcd(favorable == 0 ? total : favorable, total);
    return ExactProbability{favorable / gcd, total / gcd};
}

// --- experiment campaigns ---

enum class ExperimentKind { Correctness, PassiveAttack, ActiveAttack, EveDetection, FixedFalseEqual };

inline constexpr std::string_view experiment_name(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Correctness: return "correctness";
    case ExperimentKind::PassiveAttack: return "passive-attack";
    case ExperimentKind::ActiveAttack: return "active-attack";
    case ExperimentKind::EveDetection: return "eve-detection";
    case ExperimentKind::FixedFalseEqual: return "fixed-false-equal";
    }
    return "?";
}

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Correctness;
    int n_bits = 4;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    Variant variant = Variant::Original;
    EveModel::Kind eve = EveModel::Kind::None;
    std::optional<std::size_t> decoy_count;
    double threshold = 0.0;
};

struct RateRow {
    std::string label;
    std::size_t count = 0;
    std::size_t trials = 0;
    std::optional<double> oracle;

    double rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(trials);
    }
    double ci99() const { return binomial_ci99(count, trials); }
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<RateRow> rows;

    const RateRow& row(std::string_view label) const {
        for (const RateRow& r : rows)
            if (r.label == label) return r;
        throw std::invalid_argument("ExperimentReport: no row labeled " + std::string(label));
    }
};

namespace detail {

inline SecretInput random_secret(int n_bits, Rng& rng) {
    return SecretInput(rng.uniform(std::uint64_t{1} << n_bits), n_bits);
}

inline EveModel make_eve(EveModel::Kind kind) {
    return kind == EveModel::Kind::InterceptResendRandomBasis ? EveModel::intercept_resend()
                                                              : EveModel::none();
}

inline std::string pattern_label(const std::vector<BitPair>& d) {
    std::string label;
    for (BitPair p : d) label += p.str();
    return label;
}

} // namespace detail

/// Runs `trials` independent seeded runs of the selected experiment. Every
/// trial derives its own RNG stream from (seed, trial index), so the tallies
/// do not depend on execution order.
inline ExperimentReport monte_carlo(const ExperimentSpec& spec) {
    if (spec.trials == 0) throw std::invalid_argument("monte_carlo: trials must be >= 1");
    ExperimentReport report;
    report.spec = spec;

    const auto run_config = [&](std::uint64_t run_seed) {
        return ProtocolConfig{spec.variant, spec.n_bits, spec.decoy_count, spec.threshold, run_seed};
    };

    switch (spec.kind) {
    case ExperimentKind::Correctness: {
        std::size_t matches = 0, false_equal = 0, false_not_equal = 0, aborted = 0;
        for (std::size_t trial = 0; trial < spec.trials; ++trial) {
            Rng trial_rng(mix_seed(spec.seed, trial));
            const SecretInput x = detail::random_secret(spec.n_bits, trial_rng);
            const SecretInput y = detail::random_secret(spec.n_bits, trial_rng);
            const Transcript t =
                run_protocol(x, y, run_config(trial_rng.next_u64()), detail::make_eve(spec.eve));
            if (t.verdict.kind == Verdict::Kind::Aborted) {
                ++aborted;
                continue;
            }
            const bool says_equal = t.verdict.kind == Verdict::Kind::Equal;
            if (says_equal == (x.value == y.value)) ++matches;
            else if (says_equal) ++false_equal;
            else ++false_not_equal;
        }
        report.rows.push_back({"verdict_matches_equality", matches, spec.trials,
                               spec.variant == Variant::Original ? std::optional<double>(1.0)
                                                                 : std::nullopt});
        report.rows.push_back({"false_equal", false_equal, spec.trials, std::nullopt});
        report.rows.push_back({"false_not_equal", false_not_equal, spec.trials,
                               spec.variant == Variant::Original ? std::optional<double>(0.0)
                                                                 : std::nullopt});
        report.rows.push_back({"aborted", aborted, spec.trials,
                               spec.eve == EveModel::Kind::None ? std::optional<double>(0.0)
                                                                : std::nullopt});
        break;
    }
    case ExperimentKind::PassiveAttack: {
        std::size_t bob_success = 0, alice_success = 0;
        for (std::size_t trial = 0; trial < spec.trials; ++trial) {
            Rng trial_rng(mix_seed(spec.seed, trial));
            const SecretInput x = detail::random_secret(spec.n_bits, trial_rng);
            const SecretInput y = detail::random_secret(spec.n_bits, trial_rng);
            const Transcript t = run_protocol(x, y, run_config(trial_rng.next_u64()));
            if (passive_attack(view_for(t, Party::Bob), x).success) ++bob_success;
            if (passive_attack(view_for(t, Party::Alice), y).success) ++alice_success;
        }
        const std::optional<double> oracle =
            spec.variant == Variant::Original ? std::optional<double>(1.0) : std::nullopt;
        report.rows.push_back({"bob_recovers_x", bob_success, spec.trials, oracle});
        report.rows.push_back({"alice_recovers_y", alice_success, spec.trials, oracle});
        break;
    }
    case ExperimentKind::ActiveAttack: {
        std::size_t success = 0, detected = 0, collapse_match = 0;
        for (std::size_t trial = 0; trial < spec.trials; ++trial) {
            Rng trial_rng(mix_seed(spec.seed, trial));
            const SecretInput x = detail::random_secret(spec.n_bits, trial_rng);
            const SecretInput y = detail::random_secret(spec.n_bits, trial_rng);
            const ActiveAttackResult res = active_attack(x, y, run_config(trial_rng.next_u64()));
            if (res.report.success) ++success;
            if (res.report.detected) ++detected;
            if (res.report.m_ab == res.transcript.alice.measured) ++collapse_match;
        }
        report.rows.push_back({"bob_recovers_x", success, spec.trials,
                               spec.variant == Variant::Original ? std::optional<double>(1.0)
                                                                 : std::nullopt});
        report.rows.push_back({"detected", detected, spec.trials, std::optional<double>(0.0)});
        report.rows.push_back({"alice_remeasures_m_ab", collapse_match, spec.trials,
                               std::optional<double>(1.0)});
        break;
    }
    case ExperimentKind::EveDetection: {
        report.spec.eve = EveModel::Kind::InterceptResendRandomBasis; // implied by the kind
        const std::size_t decoys = spec.decoy_count.value_or(2 * group_count(spec.n_bits));
        std::size_t aborts = 0, decoy_errors = 0, decoys_checked = 0;
        for (std::size_t trial = 0; trial < spec.trials; ++trial) {
            Rng trial_rng(mix_seed(spec.seed, trial));
            const SecretInput x = detail::random_secret(spec.n_bits, trial_rng);
            const SecretInput y = detail::random_secret(spec.n_bits, trial_rng);
            const Transcript t = run_protocol(x, y, run_config(trial_rng.next_u64()),
                                              EveModel::intercept_resend());
            if (t.verdict.kind == Verdict::Kind::Aborted) ++aborts;
            for (const CheckOutcome& c : t.checks) {
                if (c.link != "tp->alice") continue; // the tapped link
                decoy_errors += c.errors;
                decoys_checked += c.decoys;
            }
        }
        const double per_decoy = 0.25;
        const double abort_oracle =
            spec.threshold == 0.0
                ? 1.0 - std::pow(1.0 - per_decoy, static_cast<double>(decoys))
                : std::nan("");
        report.rows.push_back({"abort", aborts, spec.trials,
                               spec.threshold == 0.0 ? std::optional<double>(abort_oracle)
                                                     : std::nullopt});
        report.rows.push_back({"decoy_error", decoy_errors, decoys_checked,
                               std::optional<double>(per_decoy)});
        break;
    }
    case ExperimentKind::FixedFalseEqual: {
        const std::size_t g = group_count(spec.n_bits);
        if (g > 4)
            throw std::invalid_argument("monte_carlo: fixed-false-equal sweep supports at most 4 groups");
        const std::uint64_t patterns = std::uint64_t{1} << (2 * g);
        for (std::uint64_t p = 0; p < patterns; ++p) {
            std::vector<BitPair> d;
            for (std::size_t i = 0; i < g; ++i)
                d.push_back(BitPair(static_cast<unsigned>((p >> (2 * i)) & 3u)));
            if (spec.n_bits % 2 == 1 && d.back().lo() != 0) continue; // unreachable with odd N
            const SecretInput x(0, spec.n_bits);
            const SecretInput y = from_groups(GroupSequence{d, spec.n_bits});
            std::size_t equal_verdicts = 0;
            for (std::size_t trial = 0; trial < spec.trials; ++trial) {
                const std::uint64_t run_seed = mix_seed(mix_seed(spec.seed, p), trial);
                ProtocolConfig cfg{Variant::Fixed, spec.n_bits, spec.decoy_count, spec.threshold,
                                   run_seed};
                if (run_protocol(x, y, cfg).verdict.kind == Verdict::Kind::Equal) ++equal_verdicts;
            }
            report.rows.push_back({detail::pattern_label(d), equal_verdicts, spec.trials,
                                   std::optional<double>(exact_false_equal(d).value())});
        }
        break;
    }
    }
    return report;
}

/// Iterates every (X, Y) pair at the given width, once per seed. The
/// original variant must satisfy Equal <=> X = Y exactly; the fixed variant
/// must be complete (X = Y implies Equal) and its false-equal rate per
/// difference pattern is reported next to the enumeration oracle.
inline ExperimentReport exhaustive_correctness(int n_bits, Variant variant,
                                               const std::vector<std::uint64_t>& seeds) {
    if (n_bits < 1 || n_bits > 8)
        throw std::invalid_argument("exhaustive_correctness: n_bits must be in [1, 8]");
    if (seeds.empty()) throw std::invalid_argument("exhaustive_correctness: no seeds");

    ExperimentReport report;
    report.spec.kind = ExperimentKind::Correctness;
    report.spec.n_bits = n_bits;
    report.spec.variant = variant;
    report.spec.seed = seeds.front();
    report.spec.trials = seeds.size();

    const std::uint64_t width = std::uint64_t{1} << n_bits;
    const std::size_t g = group_count(n_bits);
    const std::size_t total_runs = static_cast<std::size_t>(width * width) * seeds.size();

    if (variant == Variant::Original) {
        std::size_t violations = 0;
        for (std::uint64_t xv = 0; xv < width; ++xv)
            for (std::uint64_t yv = 0; yv < width; ++yv)
                for (std::size_t si = 0; si < seeds.size(); ++si) {
                    const std::uint64_t run_seed = mix_seed(seeds[si], xv * width + yv);
                    const ProtocolConfig cfg{variant, n_bits, std::nullopt, 0.0, run_seed};
                    const Transcript t =
                        run_protocol(SecretInput(xv, n_bits), SecretInput(yv, n_bits), cfg);
                    const bool says_equal = t.verdict.kind == Verdict::Kind::Equal;
                    if (says_equal != (xv == yv)) ++violations;
                }
        report.rows.push_back({"violations", violations, total_runs, std::optional<double>(0.0)});
        return report;
    }

    std::size_t completeness_violations = 0;
    std::vector<std::size_t> equal_by_pattern(std::size_t{1} << (2 * g), 0);
    std::vector<std::size_t> runs_by_pattern(std::size_t{1} << (2 * g), 0);
    for (std::uint64_t xv = 0; xv < width; ++xv)
        for (std::uint64_t yv = 0; yv < width; ++yv)
            for (std::size_t si = 0; si < seeds.size(); ++si) {
                const std::uint64_t run_seed = mix_seed(seeds[si], xv * width + yv);
                const ProtocolConfig cfg{variant, n_bits, std::nullopt, 0.0, run_seed};
                const Transcript t =
                    run_protocol(SecretInput(xv, n_bits), SecretInput(yv, n_bits), cfg);
                const bool says_equal = t.verdict.kind == Verdict::Kind::Equal;
                if (xv == yv && !says_equal) ++completeness_violations;
                std::uint64_t pattern = 0;
                const GroupSequence gx = to_groups(SecretInput(xv, n_bits));
                const GroupSequence gy = to_groups(SecretInput(yv, n_bits));
                for (std::size_t i = 0; i < g; ++i)
                    pattern |= static_cast<std::uint64_t>((gx.groups[i] ^ gy.groups[i]).value)
                               << (2 * i);
                ++runs_by_pattern[pattern];
                if (says_equal) ++equal_by_pattern[pattern];
            }
    report.rows.push_back(
        {"completeness_violations", completeness_violations, total_runs, std::optional<double>(0.0)});
    for (std::size_t p = 0; p < runs_by_pattern.size(); ++p) {
        if (runs_by_pattern[p] == 0) continue;
        std::vector<BitPair> d;
        for (std::size_t i = 0; i < g; ++i)
            d.push_back(BitPair(static_cast<unsigned>((p >> (2 * i)) & 3u)));
        report.rows.push_back({"d=" + detail::pattern_label(d), equal_by_pattern[p],
                               runs_by_pattern[p], std::optional<double>(exact_false_equal(d).value())});
    }
    return report;
}

} // namespace qpclab

#endif // QPCLAB_ANALYSIS_HPP
