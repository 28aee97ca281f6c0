// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Pass --cli <path-to-qpclab-binary> to include the command-line
// determinism checks (criterion 9).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <qpclab/qpclab.hpp>

#include "support/term_oracle.hpp"

using namespace qpclab;

namespace {

std::string g_cli_path;

struct Outcome {
    bool ok;
    std::string detail;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<unreadable:" + path + ">";
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli_path + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 1. carrier-state fidelity: 32 nonzero amplitudes of magnitude 1/sqrt(32),
//    signs exactly as tabulated (20 positive, 12 negative)
Outcome state_fidelity() {
    const StateVector s = build_upsilon();
    const double mag = 1.0 / std::sqrt(32.0);
    int positive = 0, negative = 0, nonzero = 0;
    double max_err = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
        const cplx a = s.amplitude(i);
        const double expected = term_oracle::expected_amplitude(i);
        max_err = std::max(max_err, std::abs(a - cplx{expected, 0.0}));
        if (std::abs(a) > mag / 2) {
            ++nonzero;
            if (a.real() > 0) ++positive;
            else ++negative;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d nonzero (%d pos, %d neg), max amplitude error %.1e",
                  nonzero, positive, negative, max_err);
    return {nonzero == 32 && positive == 20 && negative == 12 && max_err <= 1e-12, buf};
}

// 2. bell correlation: M_A xor M_B xor M_C = 00 on 10^4 fresh copies
Outcome bell_correlation() {
    Rng rng(0xBE11);
    const std::size_t rounds = 10000;
    std::size_t good = 0;
    for (std::size_t k = 0; k < rounds; ++k) {
        StateVector s = build_upsilon();
        const auto a = z_measure_pair(s, 0, 1, rng);
        const auto b = z_measure_pair(a.collapsed, 2, 3, rng);
        const auto c = bell_measure_pair(b.collapsed, 4, 5, rng);
        if ((a.outcome ^ b.outcome ^ bell_code_bits(c.outcome)) == BitPair(0u)) ++good;
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), "XOR = 00 in %zu/%zu rounds", good, rounds);
    return {good == rounds, buf};
}

// 3. original-variant exactness, exhaustive at N=4 across 3 seeds
Outcome original_exactness() {
    std::size_t violations = 0, runs = 0;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const ExperimentReport report = exhaustive_correctness(4, Variant::Original, {seed});
        violations += report.row("violations").count;
        runs += report.row("violations").trials;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu violations in %zu runs (256 pairs x 3 seeds)", violations,
                  runs);
    return {violations == 0 && runs == 768, buf};
}

// 4. passive attack: both participants recover the peer secret in 1000 runs
Outcome passive_attack_rate() {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::PassiveAttack;
    spec.n_bits = 8;
    spec.trials = 1000;
    spec.seed = 0xACC4;
    const ExperimentReport report = monte_carlo(spec);
    const std::size_t bob = report.row("bob_recovers_x").count;
    const std::size_t alice = report.row("alice_recovers_y").count;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "bob %zu/1000, alice %zu/1000", bob, alice);
    return {bob == 1000 && alice == 1000, buf};
}

// 5. active attack: 1000 MITM runs, exact recovery, zero aborts, M_A = M_AB
Outcome active_attack_rate() {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::ActiveAttack;
    spec.n_bits = 8;
    spec.trials = 1000;
    spec.seed = 0xACC5;
    const ExperimentReport report = monte_carlo(spec);
    const std::size_t success = report.row("bob_recovers_x").count;
    const std::size_t detected = report.row("detected").count;
    const std::size_t collapse = report.row("alice_remeasures_m_ab").count;
    char buf[112];
    std::snprintf(buf, sizeof(buf), "recovered %zu/1000, detected %zu, M_A=M_AB in %zu/1000",
                  success, detected, collapse);
    return {success == 1000 && detected == 0 && collapse == 1000, buf};
}

// 6. fixed-variant completeness: X=Y always compares Equal
Outcome fixed_completeness() {
    std::size_t equal = 0;
    const std::size_t runs = 1000;
    for (std::size_t k = 0; k < runs; ++k) {
        Rng trial(mix_seed(0xACC6, k));
        const SecretInput x(trial.uniform(256), 8);
        const ProtocolConfig cfg{Variant::Fixed, 8, std::nullopt, 0.0, trial.next_u64()};
        if (run_protocol(x, x, cfg).verdict.kind == Verdict::Kind::Equal) ++equal;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "Equal in %zu/%zu runs", equal, runs);
    return {equal == runs, buf};
}

// 7. fixed-variant false-equal audit: enumeration oracle values, Monte Carlo
//    agreement at 10^4 draws for the two canonical patterns, and 3-sigma
//    agreement for every difference pattern up to 4 groups
Outcome false_equal_audit() {
    const ExactProbability p11 = exact_false_equal({BitPair(0b11)});
    const ExactProbability p01 = exact_false_equal({BitPair(0b01)});
    if (!(p11.numerator == 1 && p11.denominator == 2 && p01.numerator == 0))
        return {false, "enumeration oracle disagrees on [11] or [01]"};

    ExperimentSpec spec;
    spec.kind = ExperimentKind::FixedFalseEqual;
    spec.n_bits = 2;
    spec.trials = 10000;
    spec.seed = 0xACC7;
    const ExperimentReport single = monte_carlo(spec);
    const double rate11 = single.row("11").rate();
    const double rate01 = single.row("01").rate();
    if (std::abs(rate11 - 0.5) > 0.05) return {false, "[11] rate off: " + format_fixed(rate11)};
    if (std::abs(rate01 - 0.0) > 0.01) return {false, "[01] rate off: " + format_fixed(rate01)};

    std::size_t patterns = 0;
    double worst_pull = 0.0;
    for (const auto& [bits, trials] : std::vector<std::pair<int, std::size_t>>{
             {4, 3000}, {6, 1500}, {8, 800}}) {
        ExperimentSpec multi;
        multi.kind = ExperimentKind::FixedFalseEqual;
        multi.n_bits = bits;
        multi.trials = trials;
        multi.seed = 0xACC7;
        const ExperimentReport report = monte_carlo(multi);
        for (const RateRow& row : report.rows) {
            ++patterns;
            const double p = *row.oracle;
            const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(row.trials));
            if (sigma == 0.0) {
                if (row.rate() != p) return {false, "deterministic pattern " + row.label + " off"};
                continue;
            }
            const double pull = std::abs(row.rate() - p) / sigma;
            worst_pull = std::max(worst_pull, pull);
            if (pull > 3.0)
                return {false, "pattern " + row.label + " off by " + format_fixed(pull, 2) + " sigma"};
        }
    }
    patterns += single.rows.size();
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "oracle [11]=1/2 [01]=0; MC rate(11)=%.4f rate(01)=%.4f; %zu patterns <= 4 "
                  "groups within 3 sigma (worst %.2f)",
                  rate11, rate01, patterns, worst_pull);
    return {true, buf};
}

// 8. eavesdropper detection: per-decoy error 1/4, abort rate 1-(3/4)^20
Outcome eve_detection() {
    ExperimentSpec one;
    one.kind = ExperimentKind::EveDetection;
    one.n_bits = 4;
    one.trials = 10000;
    one.seed = 0xACC8;
    one.eve = EveModel::Kind::InterceptResendRandomBasis;
    one.decoy_count = 1;
    const ExperimentReport single = monte_carlo(one);
    const double err = single.row("decoy_error").rate();

    ExperimentSpec twenty = one;
    twenty.decoy_count = 20;
    const ExperimentReport batch = monte_carlo(twenty);
    const double abort_rate = batch.row("abort").rate();
    const double oracle = 1.0 - std::pow(0.75, 20.0);

    char buf[128];
    std::snprintf(buf, sizeof(buf), "decoy error %.4f (want 0.25 +/- 0.02), abort %.4f (want %.4f +/- 0.01)",
                  err, abort_rate, oracle);
    return {std::abs(err - 0.25) <= 0.02 && std::abs(abort_rate - oracle) <= 0.01, buf};
}

// 9. determinism of the command line: repeated commands produce byte-identical
//    files, and the documented exit codes hold
Outcome cli_determinism() {
    if (g_cli_path.empty()) return {false, "no --cli path provided"};
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("qpclab-acceptance-" + std::to_string(getpid()));
    fs::create_directories(dir);
    const std::string d = dir.string();

    struct Cmd {
        std::string args;
        std::vector<std::string> outputs;
        int want_exit;
    };
    const std::vector<Cmd> commands = {
        {"run --x 6 --y 5 --bits 4 --variant original --seed 1 --out " + d + "/run", {"/run"}, 0},
        {"run --x 6 --y 6 --bits 4 --variant fixed --seed 2 --out " + d + "/runf", {"/runf"}, 0},
        {"attack --kind active --x 6 --y 0 --bits 4 --seed 7 --out " + d + "/atk", {"/atk"}, 0},
        {"attack --kind passive --x 6 --y 5 --bits 4 --seed 7 --out " + d + "/pas", {"/pas"}, 0},
        {"attack --kind passive --variant fixed --x 6 --y 5 --bits 4 --seed 7 --out " + d + "/pfx",
         {"/pfx"},
         0},
        {"sweep --kind eve-detection --bits 4 --decoys 20 --trials 300 --seed 3 --out " + d + "/swp",
         {"/swp.txt", "/swp.csv"},
         0},
    };
    for (const Cmd& cmd : commands) {
        std::vector<std::string> first;
        if (run_cli(cmd.args) != cmd.want_exit) {
            fs::remove_all(dir);
            return {false, "unexpected exit for: " + cmd.args};
        }
        for (const std::string& out : cmd.outputs) first.push_back(read_file(d + out));
        if (run_cli(cmd.args) != cmd.want_exit) {
            fs::remove_all(dir);
            return {false, "unexpected second exit for: " + cmd.args};
        }
        for (std::size_t i = 0; i < cmd.outputs.size(); ++i) {
            if (read_file(d + cmd.outputs[i]) != first[i]) {
                fs::remove_all(dir);
                return {false, "outputs differ between runs for: " + cmd.args};
            }
            if (first[i].empty()) {
                fs::remove_all(dir);
                return {false, "empty output for: " + cmd.args};
            }
        }
    }

    // a config file supplies defaults, explicit flags override it
    {
        std::ofstream cfg(d + "/run.cfg");
        cfg << "x = 6\ny = 9\nbits = 4\nvariant = original\nseed = 1\n";
        cfg.close();
        if (run_cli("run --config " + d + "/run.cfg --y 5 --out " + d + "/run_cfg") != 0) {
            fs::remove_all(dir);
            return {false, "config-file run failed"};
        }
        if (read_file(d + "/run_cfg") != read_file(d + "/run")) {
            fs::remove_all(dir);
            return {false, "config-file run does not match the explicit-flag run"};
        }
    }

    // documented exit codes
    if (run_cli("run --x 9 --bits 3 --y 0 --seed 1") != 64) {
        fs::remove_all(dir);
        return {false, "usage error did not exit 64"};
    }
    if (run_cli("verify-state") != 0) {
        fs::remove_all(dir);
        return {false, "verify-state did not exit 0"};
    }
    // 20 exposed decoys make an intercept-resend abort all but certain; seed
    // checked to abort
    if (run_cli("run --x 1 --y 2 --bits 4 --eve intercept-resend --decoys 20 --seed 4") != 2) {
        fs::remove_all(dir);
        return {false, "aborted run did not exit 2"};
    }
    fs::remove_all(dir);
    return {true, "6 commands byte-stable across reruns; config-file merge and exit codes 0/2/64 "
                  "verified"};
}

// 10. TP ignorance: with fixed inputs and fresh keys, each R_i TP sees is
//     uniform over the four values
Outcome tp_ignorance() {
    const SecretInput x(6, 4), y(9, 4);
    std::array<std::vector<std::size_t>, 2> counts;
    counts.fill(std::vector<std::size_t>(4, 0));
    const std::size_t runs = 10000;
    for (std::size_t k = 0; k < runs; ++k) {
        const ProtocolConfig cfg{Variant::Original, 4, std::nullopt, 0.0, mix_seed(0xACCA, k)};
        const Transcript t = run_protocol(x, y, cfg);
        for (std::size_t i = 0; i < 2; ++i) counts[i][t.tp.combined[i].value] += 1;
    }
    double worst = 0.0;
    for (const auto& c : counts) worst = std::max(worst, chi_square_uniform(c));
    char buf[96];
    std::snprintf(buf, sizeof(buf), "chi-square per group max %.2f (reject at %.2f)", worst,
                  kChiSquare99Df3);
    return {worst < kChiSquare99Df3, buf};
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];

    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget_seconds;
    };
    const std::vector<Criterion> criteria = {
        {"state-fidelity", state_fidelity, 1.0},
        {"bell-correlation", bell_correlation, 10.0},
        {"original-exactness", original_exactness, 30.0},
        {"passive-attack", passive_attack_rate, 30.0},
        {"active-attack", active_attack_rate, 60.0},
        {"fixed-completeness", fixed_completeness, 60.0},
        {"false-equal-audit", false_equal_audit, 60.0},
        {"eve-detection", eve_detection, 30.0},
        {"cli-determinism", cli_determinism, 60.0},
        {"tp-ignorance", tp_ignorance, 60.0},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome{false, "exception"};
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = elapsed < criteria[i].budget_seconds;
        const bool ok = outcome.ok && in_budget;
        std::printf("[%s] %02zu %s: %s (%.2fs%s)\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, outcome.detail.c_str(), elapsed,
                    in_budget ? "" : " OVER BUDGET");
        if (!ok) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
