#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include <qpclab/qpclab.hpp>

using namespace qpclab;

#ifndef QPCLAB_TEST_DATA_DIR
#define QPCLAB_TEST_DATA_DIR "."
#endif

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("transcript serialization matches the golden file") {
    const ProtocolConfig cfg{Variant::Original, 4, std::nullopt, 0.0, 1};
    const Transcript t = run_protocol(SecretInput(6, 4), SecretInput(5, 4), cfg);
    const std::string expected =
        read_file(std::string(QPCLAB_TEST_DATA_DIR) + "/golden/transcript_original_seed1.txt");
    REQUIRE(to_canonical_text(t) == expected);
}

TEST_CASE("fixed-variant transcript carries the sums instead of R'") {
    const ProtocolConfig cfg{Variant::Fixed, 4, std::nullopt, 0.0, 2};
    const Transcript t = run_protocol(SecretInput(3, 4), SecretInput(3, 4), cfg);
    const std::string text = to_canonical_text(t);
    REQUIRE(text.rfind("qpc-transcript v1\n", 0) == 0);
    REQUIRE(text.find("tp.s: ") != std::string::npos);
    REQUIRE(text.find("alice.s_prime: ") != std::string::npos);
    REQUIRE(text.find("r_prime") == std::string::npos);
    REQUIRE(text.find("label=S body=") != std::string::npos);
}

TEST_CASE("attack report files hold one section per attacker") {
    const ProtocolConfig cfg{Variant::Original, 4, std::nullopt, 0.0, 7};
    const Transcript t = run_protocol(SecretInput(6, 4), SecretInput(5, 4), cfg);
    const std::vector<AttackReport> reports{passive_attack(view_for(t, Party::Bob), SecretInput(6, 4)),
                                            passive_attack(view_for(t, Party::Alice),
                                                           SecretInput(5, 4))};
    const std::string text = attack_report_file(AttackKind::Passive, Variant::Original, 4, 7, reports);
    REQUIRE(text.rfind("qpc-attack-report v1\n", 0) == 0);
    REQUIRE(text.find("attacker: bob\n") != std::string::npos);
    REQUIRE(text.find("attacker: alice\n") != std::string::npos);
    REQUIRE(text.find("recovered_secret: 6\n") != std::string::npos);
    REQUIRE(text.find("recovered_secret: 5\n") != std::string::npos);
    REQUIRE(text.find("success: true") != std::string::npos);
}

TEST_CASE("CSV export has a header and one line per row") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::FixedFalseEqual;
    spec.n_bits = 2;
    spec.trials = 50;
    spec.seed = 1;
    const std::string csv = to_csv(monte_carlo(spec));
    REQUIRE(csv.rfind("label,count,trials,rate,ci99_halfwidth,oracle\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    REQUIRE(lines == 5); // header + the four single-group patterns
    REQUIRE(csv.back() == '\n');
}

TEST_CASE("format_fixed renders deterministically") {
    REQUIRE(format_fixed(0.5) == "0.500000");
    REQUIRE(format_fixed(0.0) == "0.000000");
    REQUIRE(format_fixed(1.0 - std::pow(0.75, 20.0)) == "0.996829");
    REQUIRE(format_fixed(0.25, 2) == "0.25");
}

TEST_CASE("join, split and trim helpers") {
    REQUIRE(join_pairs(std::vector<BitPair>{BitPair(0b01), BitPair(0b10)}) == "01 10");
    REQUIRE(join_pairs(std::vector<BitPair>{}) == "");
    REQUIRE(split("1,2,3", ',') == std::vector<std::string>{"1", "2", "3"});
    REQUIRE(split("", ',') == std::vector<std::string>{""});
    REQUIRE(trim("  a b\t") == "a b");
    REQUIRE(trim(" \t ") == "");
}

TEST_CASE("flat key=value config parsing") {
    const auto kv = parse_kv_file("# comment\n"
                                  "x = 6\n"
                                  "\n"
                                  "variant=original\n"
                                  "seed = 1\n"
                                  "seed = 2\n");
    REQUIRE(kv.at("x") == "6");
    REQUIRE(kv.at("variant") == "original");
    REQUIRE(kv.at("seed") == "2"); // later duplicates win
    REQUIRE(kv.size() == 3);
    REQUIRE_THROWS_AS(parse_kv_file("not a pair\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_kv_file("= value\n"), std::invalid_argument);
}

TEST_CASE("aborted transcripts serialize with the abort reason") {
    ProtocolConfig cfg{Variant::Original, 4, std::size_t{20}, 0.0, 3};
    const Transcript t =
        run_protocol(SecretInput(6, 4), SecretInput(5, 4), cfg, EveModel::intercept_resend());
    if (t.verdict.kind == Verdict::Kind::Aborted) { // overwhelmingly likely at 20 decoys
        const std::string text = to_canonical_text(t);
        REQUIRE(text.find("verdict: aborted reason=eavesdropping check failed") !=
                std::string::npos);
        REQUIRE(text.find("result=abort") != std::string::npos);
    }
}
