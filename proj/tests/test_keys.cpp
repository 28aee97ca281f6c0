#include <catch2/catch_amalgamated.hpp>

#include <qpclab/analysis.hpp>
#include <qpclab/keys.hpp>

using namespace qpclab;

namespace {

template <typename T>
concept exposes_pad_keys = requires(T t) {
    t.k_a;
    t.k_b;
};

} // namespace

TEST_CASE("simulate_qkd is deterministic per seed") {
    Rng a(101), b(101);
    const KeyRing first = simulate_qkd(3, a);
    const KeyRing second = simulate_qkd(3, b);
    REQUIRE(first.k_a == second.k_a);
    REQUIRE(first.k_b == second.k_b);
    REQUIRE(first.k_ac == second.k_ac);
    REQUIRE(first.k_bc == second.k_bc);
    REQUIRE(first.length() == 3);
}

TEST_CASE("simulate_qkd rejects zero length") {
    Rng rng(1);
    REQUIRE_THROWS_AS(simulate_qkd(0, rng), std::invalid_argument);
}

TEST_CASE("both endpoints of each pair hold identical keys") {
    Rng rng(5);
    const KeyRing ring = simulate_qkd(8, rng);
    const ParticipantKeyView alice = participant_view(ring, Party::Alice);
    const ParticipantKeyView bob = participant_view(ring, Party::Bob);
    const TpKeyView tp = tp_view(ring);
    REQUIRE(alice.k_a == bob.k_a);
    REQUIRE(alice.k_b == bob.k_b);
    REQUIRE(alice.k_tp == tp.k_ac);
    REQUIRE(bob.k_tp == tp.k_bc);
}

TEST_CASE("key words are uniform (chi-square at 0.01)") {
    Rng rng(2024);
    std::vector<std::size_t> counts(4, 0);
    for (int batch = 0; batch < 700; ++batch) {
        const KeyRing ring = simulate_qkd(4, rng);
        for (const auto* seq : {&ring.k_a, &ring.k_b, &ring.k_ac, &ring.k_bc})
            for (BitPair p : *seq) counts[p.value] += 1;
    }
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    REQUIRE(total >= 10000);
    for (std::size_t c : counts)
        REQUIRE(std::abs(c / static_cast<double>(total) - 0.25) < 0.02);
    REQUIRE(chi_square_uniform(counts) < kChiSquare99Df3);
}

TEST_CASE("TP's view structurally lacks the participant pad keys") {
    STATIC_REQUIRE(exposes_pad_keys<ParticipantKeyView>);
    STATIC_REQUIRE(!exposes_pad_keys<TpKeyView>);

    Rng rng(9);
    const KeyRing ring = simulate_qkd(2, rng);
    REQUIRE_THROWS_AS(participant_view(ring, Party::TP), std::invalid_argument);
}
