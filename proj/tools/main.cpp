// qpclab command line: single protocol runs, attack drivers, experiment
// sweeps and the carrier-state self check.
//
// Exit codes: 0 success (including NotEqual verdicts and completed attack
// reports), 1 failed verification, 2 run aborted by an eavesdropping check,
// 64 usage error, 70 internal error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include <qpclab/qpclab.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitAborted = 2;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

struct CliConfig {
    std::uint64_t x = 0, y = 0;
    int bits = 0;
    std::string variant = "original";
    std::string eve = "none";
    std::string kind;
    std::int64_t decoys = -1; // -1: one decoy per payload particle
    double threshold = 0.0;
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    std::string seeds; // comma list for exhaustive sweeps
    std::string out;
    std::string format = "text";
};

qpclab::Variant parse_variant(const std::string& v) {
    if (v == "original") return qpclab::Variant::Original;
    if (v == "fixed") return qpclab::Variant::Fixed;
    throw std::invalid_argument("unknown variant: " + v);
}

qpclab::EveModel::Kind parse_eve(const std::string& v) {
    if (v == "none") return qpclab::EveModel::Kind::None;
    if (v == "intercept-resend") return qpclab::EveModel::Kind::InterceptResendRandomBasis;
    throw std::invalid_argument("unknown eve model: " + v);
}

std::optional<std::size_t> decoy_option(std::int64_t decoys) {
    if (decoys < 0) return std::nullopt;
    return static_cast<std::size_t>(decoys);
}

qpclab::ProtocolConfig protocol_config(const CliConfig& cli) {
    return qpclab::ProtocolConfig{parse_variant(cli.variant), cli.bits, decoy_option(cli.decoys),
                                  cli.threshold, cli.seed};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Values from an optional flat key=value config file are appended as flags
// for any option not already present on the command line, so explicit flags
// always win. Keys that do not apply to the chosen subcommand are ignored.
std::vector<std::string> merge_config_file(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a file path");
            config_path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (config_path.empty()) return args;
    if (args.empty()) throw std::invalid_argument("--config requires a subcommand");

    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot read config file: " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto kv = qpclab::parse_kv_file(buffer.str());

    static const std::map<std::string, std::set<std::string>> known = {
        {"run", {"x", "y", "bits", "variant", "eve", "decoys", "threshold", "seed", "out"}},
        {"attack", {"kind", "x", "y", "bits", "variant", "decoys", "threshold", "seed", "out"}},
        {"sweep",
         {"kind", "bits", "trials", "seed", "seeds", "variant", "eve", "decoys", "threshold", "out",
          "format"}},
        {"verify-state", {}},
    };
    const auto sub = known.find(args.front());
    if (sub == known.end()) return args;

    for (const auto& [key, value] : kv) {
        if (!sub->second.count(key)) continue;
        const std::string flag = "--" + key;
        const bool present = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (!present) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

int cmd_run(const CliConfig& cli) {
    using namespace qpclab;
    const SecretInput x(cli.x, cli.bits);
    const SecretInput y(cli.y, cli.bits);
    const EveModel eve = parse_eve(cli.eve) == EveModel::Kind::InterceptResendRandomBasis
                             ? EveModel::intercept_resend()
                             : EveModel::none();
    const Transcript t = run_protocol(x, y, protocol_config(cli), eve);

    std::cout << "verdict: " << verdict_name(t.verdict.kind);
    if (t.verdict.kind == Verdict::Kind::Aborted) std::cout << " (" << t.verdict.reason << ")";
    std::cout << "\n";
    if (!cli.out.empty()) write_file(cli.out, to_canonical_text(t));
    return t.verdict.kind == Verdict::Kind::Aborted ? kExitAborted : kExitOk;
}

void print_attack_report(const qpclab::AttackReport& r) {
    using namespace qpclab;
    std::cout << "attacker=" << party_name(r.attacker);
    if (!r.applicable) {
        std::cout << " not-applicable\n";
        return;
    }
    std::cout << " recovered=" << r.recovered_secret << " truth=" << r.ground_truth
              << " success=" << (r.success ? "true" : "false")
              << " detected=" << (r.detected ? "true" : "false") << "\n";
}

int cmd_attack(const CliConfig& cli) {
    using namespace qpclab;
    const SecretInput x(cli.x, cli.bits);
    const SecretInput y(cli.y, cli.bits);
    const ProtocolConfig config = protocol_config(cli);

    std::vector<AttackReport> reports;
    AttackKind kind;
    if (cli.kind == "passive") {
        kind = AttackKind::Passive;
        const Transcript t = run_protocol(x, y, config);
        reports.push_back(passive_attack(view_for(t, Party::Bob), x));
        reports.push_back(passive_attack(view_for(t, Party::Alice), y));
    } else if (cli.kind == "active") {
        kind = AttackKind::Active;
        reports.push_back(active_attack(x, y, config).report);
    } else {
        throw std::invalid_argument("unknown attack kind: " + cli.kind);
    }

    for (const AttackReport& r : reports) print_attack_report(r);
    if (!cli.out.empty())
        write_file(cli.out, attack_report_file(kind, config.variant, cli.bits, cli.seed, reports));
    return kExitOk;
}

int cmd_sweep(const CliConfig& cli) {
    using namespace qpclab;
    ExperimentReport report;
    if (cli.kind == "exhaustive-correctness") {
        std::vector<std::uint64_t> seed_list;
        if (!cli.seeds.empty()) {
            for (const std::string& s : split(cli.seeds, ','))
                seed_list.push_back(std::stoull(trim(s)));
        } else {
            seed_list.push_back(cli.seed);
        }
        report = exhaustive_correctness(cli.bits, parse_variant(cli.variant), seed_list);
    } else {
        ExperimentSpec spec;
        if (cli.kind == "correctness") spec.kind = ExperimentKind::Correctness;
        else if (cli.kind == "passive-attack") spec.kind = ExperimentKind::PassiveAttack;
        else if (cli.kind == "active-attack") spec.kind = ExperimentKind::ActiveAttack;
        else if (cli.kind == "eve-detection") spec.kind = ExperimentKind::EveDetection;
        else if (cli.kind == "fixed-false-equal") spec.kind = ExperimentKind::FixedFalseEqual;
        else throw std::invalid_argument("unknown sweep kind: " + cli.kind);
        spec.n_bits = cli.bits;
        spec.trials = cli.trials;
        spec.seed = cli.seed;
        spec.variant = parse_variant(cli.variant);
        spec.eve = parse_eve(cli.eve);
        spec.decoy_count = decoy_option(cli.decoys);
        spec.threshold = cli.threshold;
        report = monte_carlo(spec);
    }

    if (cli.format == "csv") std::cout << to_csv(report);
    else if (cli.format == "text") std::cout << to_canonical_text(report);
    else throw std::invalid_argument("unknown format: " + cli.format);

    if (!cli.out.empty()) {
        write_file(cli.out + ".txt", to_canonical_text(report));
        write_file(cli.out + ".csv", to_csv(report));
    }
    return kExitOk;
}

int cmd_verify_state() {
    using namespace qpclab;
    const StateVector state = build_upsilon();
    const double mag = 1.0 / std::sqrt(32.0);
    int positive = 0, negative = 0, zero = 0;
    double max_err = 0.0;
    std::size_t worst_index = 0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const cplx a = state.amplitude(i);
        double err;
        if (a.real() > mag / 2) {
            ++positive;
            err = std::abs(a - cplx{mag, 0.0});
        } else if (a.real() < -mag / 2) {
            ++negative;
            err = std::abs(a + cplx{mag, 0.0});
        } else {
            ++zero;
            err = std::abs(a);
        }
        if (err > max_err) {
            max_err = err;
            worst_index = i;
        }
    }
    std::printf("%d nonzero, %d positive, %d negative\n", positive + negative, positive, negative);
    std::printf("max |amplitude error| = %.1e\n", max_err);

    bool ok = positive == 20 && negative == 12 && zero == 32 && max_err <= 1e-12;
    if (!ok) std::printf("FAIL: amplitude census mismatch at index %zu\n", worst_index);

    const std::size_t rounds = 10000;
    std::size_t violations = 0;
    Rng rng(0x5eed);
    for (std::size_t round = 0; round < rounds; ++round) {
        StateVector s = build_upsilon();
        auto a = z_measure_pair(s, 0, 1, rng);
        auto b = z_measure_pair(a.collapsed, 2, 3, rng);
        auto c = bell_measure_pair(b.collapsed, 4, 5, rng);
        const BitPair x = a.outcome ^ b.outcome ^ bell_code_bits(c.outcome);
        if (!(x == BitPair{})) {
            if (violations == 0)
                std::printf("FAIL: round %zu gave M_A=%s M_B=%s M_C=%s\n", round,
                            a.outcome.str().c_str(), b.outcome.str().c_str(),
                            bell_code_bits(c.outcome).str().c_str());
            ++violations;
        }
    }
    std::printf("bell-correlation violations: %zu / %zu\n", violations, rounds);
    ok = ok && violations == 0;
    std::printf("state verification: %s\n", ok ? "PASS" : "FAIL");
    return ok ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = merge_config_file(std::move(args));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App app{"qpclab: quantum private comparison laboratory"};
    app.require_subcommand(1);
    CliConfig cli;

    auto add_secret_opts = [&](CLI::App* cmd) {
        cmd->add_option("--x", cli.x, "Alice's secret")->required();
        cmd->add_option("--y", cli.y, "Bob's secret")->required();
        cmd->add_option("--bits", cli.bits, "secret width N in bits")->required();
    };
    auto add_channel_opts = [&](CLI::App* cmd) {
        cmd->add_option("--decoys", cli.decoys, "decoys per quantum message (default: payload size)");
        cmd->add_option("--threshold", cli.threshold, "check abort threshold in [0,1]")
            ->check(CLI::Range(0.0, 1.0));
    };

    CLI::App* run = app.add_subcommand("run", "run one protocol instance");
    add_secret_opts(run);
    run->add_option("--variant", cli.variant, "original|fixed");
    run->add_option("--eve", cli.eve, "none|intercept-resend");
    add_channel_opts(run);
    run->add_option("--seed", cli.seed, "RNG seed")->required();
    run->add_option("--out", cli.out, "write the transcript here");

    CLI::App* attack = app.add_subcommand("attack", "run an attack driver");
    attack->add_option("--kind", cli.kind, "passive|active")->required();
    add_secret_opts(attack);
    attack->add_option("--variant", cli.variant, "original|fixed");
    add_channel_opts(attack);
    attack->add_option("--seed", cli.seed, "RNG seed")->required();
    attack->add_option("--out", cli.out, "write the attack report here");

    CLI::App* sweep = app.add_subcommand("sweep", "run an experiment campaign");
    sweep->add_option("--kind", cli.kind,
                      "correctness|passive-attack|active-attack|eve-detection|"
                      "fixed-false-equal|exhaustive-correctness")
        ->required();
    sweep->add_option("--bits", cli.bits, "secret width N in bits")->required();
    sweep->add_option("--trials", cli.trials, "Monte Carlo trials");
    sweep->add_option("--seed", cli.seed, "master RNG seed")->required();
    sweep->add_option("--seeds", cli.seeds, "comma list of seeds (exhaustive-correctness)");
    sweep->add_option("--variant", cli.variant, "original|fixed");
    sweep->add_option("--eve", cli.eve, "none|intercept-resend");
    add_channel_opts(sweep);
    sweep->add_option("--out", cli.out, "base path; writes <out>.txt and <out>.csv");
    sweep->add_option("--format", cli.format, "stdout format: text|csv");

    CLI::App* verify = app.add_subcommand("verify-state", "check the carrier state construction");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(run)) return cmd_run(cli);
        if (app.got_subcommand(attack)) return cmd_attack(cli);
        if (app.got_subcommand(sweep)) return cmd_sweep(cli);
        if (app.got_subcommand(verify)) return cmd_verify_state();
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
