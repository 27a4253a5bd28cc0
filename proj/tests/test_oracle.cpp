#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "helpers.hpp"
#include "roca/grammar.hpp"
#include "roca/oracle.hpp"
#include "roca/series.hpp"
#include "roca/validate.hpp"

using namespace roca;

namespace {

/// Independent witness replayer: letters must concatenate to the word, the
/// counter starts at 1, never dips below 0, and is 0 exactly at the end.
bool witness_replays(const RocAutomaton& aut, const RunWitness& wit, const Word& w) {
    Word emitted;
    if (wit.initial_letter != kEpsilon) emitted.push_back(wit.initial_letter);
    if (aut.initial[static_cast<std::size_t>(wit.start_state)].coef(wit.initial_letter).is_zero())
        return false;
    int state = wit.start_state;
    long long counter = 1;
    for (const Move& m : wit.moves) {
        if (m.from != state) return false;
        const auto& block = m.kind == MoveKind::Push
                                ? aut.push_block
                                : m.kind == MoveKind::Stay ? aut.stay_block : aut.pop_block;
        if (block[static_cast<std::size_t>(m.from)][static_cast<std::size_t>(m.to)].coef(m.letter).is_zero())
            return false;
        if (m.letter != kEpsilon) emitted.push_back(m.letter);
        counter += m.kind == MoveKind::Push ? 1 : m.kind == MoveKind::Pop ? -1 : 0;
        if (counter < 0) return false;
        state = m.to;
    }
    if (counter != 0) return false;
    if (state != wit.end_state) return false;
    if (aut.final_states[static_cast<std::size_t>(wit.end_state)].coef(wit.final_letter).is_zero())
        return false;
    if (wit.final_letter != kEpsilon) emitted.push_back(wit.final_letter);
    return emitted == w;
}

}  // namespace

TEST_CASE("run counting on the reference automaton") {
    RocAutomaton aut = test::lukasiewicz();
    RunReport abb = oracle_count_runs(aut, {0, 1, 1});
    CHECK(abb.count == Weight::nat(1));
    CHECK(abb.total_weight == Weight::boolean(true));
    CHECK(abb.complete);
    REQUIRE_FALSE(abb.witnesses.empty());
    CHECK(witness_replays(aut, abb.witnesses.front(), {0, 1, 1}));

    RunReport ab = oracle_count_runs(aut, {0, 1});
    CHECK(ab.count == Weight::nat(0));
    CHECK(ab.complete);
    CHECK(ab.witnesses.empty());
}

TEST_CASE("pump detection certifies infinity") {
    RocAutomaton aut = test::pumped();
    RunReport rep = oracle_count_runs(aut, {1});
    CHECK(rep.count == Weight::infinity());
    CHECK(rep.total_weight == Weight::infinity());
    CHECK(rep.complete);
    REQUIRE(rep.pump.has_value());
    const PumpTranscript& pump = *rep.pump;
    CHECK(witness_replays(aut, pump.base, {1}));
    REQUIRE_FALSE(pump.cycle.empty());
    // The cycle consumes no input and is counter-balanced.
    int drift = 0;
    for (const Move& m : pump.cycle) {
        CHECK(m.letter == kEpsilon);
        drift += m.kind == MoveKind::Push ? 1 : m.kind == MoveKind::Pop ? -1 : 0;
    }
    CHECK(drift == 0);
    CHECK(pump.insert_at <= pump.base.moves.size());
    // Inserting the cycle once still replays.
    RunWitness padded = pump.base;
    padded.moves.insert(padded.moves.begin() + static_cast<std::ptrdiff_t>(pump.insert_at),
                        pump.cycle.begin(), pump.cycle.end());
    CHECK(witness_replays(aut, padded, {1}));
}

TEST_CASE("oracle reports are deterministic") {
    RocAutomaton aut = test::ambiguous();
    RunReport r1 = oracle_count_runs(aut, {1}, -1, -1, 4);
    RunReport r2 = oracle_count_runs(aut, {1}, -1, -1, 4);
    CHECK(r1.count == r2.count);
    CHECK(r1.total_weight == r2.total_weight);
    CHECK(r1.complete == r2.complete);
    REQUIRE(r1.witnesses.size() == r2.witnesses.size());
    for (std::size_t i = 0; i < r1.witnesses.size(); ++i) {
        CHECK(r1.witnesses[i].moves == r2.witnesses[i].moves);
        CHECK(r1.witnesses[i].start_state == r2.witnesses[i].start_state);
    }
    CHECK(r1.count == Weight::nat(2));
    CHECK(r1.witnesses.size() == 2);
    for (const auto& wit : r1.witnesses) CHECK(witness_replays(aut, wit, {1}));
}

TEST_CASE("block weights from higher counters") {
    RocAutomaton aut = test::lukasiewicz();
    // From counter 2 the automaton must pop twice: exactly the word bb.
    auto bb = oracle_block_weight(aut, 0, 2, 0, {1, 1});
    CHECK(bb.first == Weight::nat(1));
    CHECK(bb.second == Weight::boolean(true));
    auto b = oracle_block_weight(aut, 0, 2, 0, {1});
    CHECK(b.first == Weight::nat(0));
    auto abbb = oracle_block_weight(aut, 0, 2, 0, {0, 1, 1, 1});
    CHECK(abbb.first == Weight::nat(1));
    auto empty = oracle_block_weight(aut, 0, 0, 0, {});
    CHECK(empty.first == Weight::nat(1));
}

TEST_CASE("saturating omega oracle") {
    RocAutomaton aut = test::lukasiewicz();
    auto aw = oracle_omega_member(aut, parse_upword(aut, "", "a"));
    CHECK(aw.accepted);
    CHECK(aw.complete);
    auto ba = oracle_omega_member(aut, parse_upword(aut, "b", "a"));
    CHECK_FALSE(ba.accepted);
    CHECK(ba.complete);
    RocAutomaton bare = parse_automaton(
        std::string("semiring bool\nstates 1\nalphabet a b\nrepeated 1\ninitial 1 eps 1\n"));
    CHECK_FALSE(oracle_omega_member(bare, parse_upword(bare, "", "a")).accepted);
    // An explicitly small bound is reported as incomplete.
    auto tight = oracle_omega_member(aut, parse_upword(aut, "", "a"), 2);
    CHECK_FALSE(tight.complete);
}

TEST_CASE("witness validity across the corpus") {
    for (const auto& entry : validation_corpus(501, 4, 4)) {
        for (const Word& w : test::all_words(2, 5)) {
            RunReport rep = oracle_count_runs(entry.automaton, w, -1, -1, 3);
            for (const auto& wit : rep.witnesses) {
                INFO(entry.name << " on " << format_letters(entry.automaton, w));
                CHECK(witness_replays(entry.automaton, wit, w));
            }
        }
    }
}

TEST_CASE("oracle agreement with engines") {
    for (const auto& entry : validation_corpus(502, 4, 4)) {
        const RocAutomaton& aut = entry.automaton;
        MixedGrammar g = triple_pair_construct(aut);
        for (const Word& w : test::all_words(2, 6)) {
            RunReport rep = oracle_count_runs(aut, w, -1, -1, 0);
            if (!rep.complete) continue;
            INFO(entry.name << " on " << format_letters(aut, w));
            CHECK(rep.total_weight == weight_of_word(aut, w));
            CHECK(rep.count == count_finite_derivations(g, w));
        }
    }
}
