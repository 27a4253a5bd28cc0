// corpus.hpp -- reference fixtures and seeded random automata for the
// validation suites.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "roca/automaton.hpp"

namespace roca {

/// The Lukasiewicz automaton: push on a, pop on b, one repeated state.
/// Its finite language is the set of words generated by S -> aSS | b.
inline constexpr const char* kLukasiewiczBool =
    "semiring bool\n"
    "states 1\n"
    "alphabet a b\n"
    "repeated 1\n"
    "initial 1 eps 1\n"
    "final 1 eps 1\n"
    "push 1 1 a 1\n"
    "pop 1 1 b 1\n";

inline constexpr const char* kLukasiewiczNatInf =
    "semiring natinf\n"
    "states 1\n"
    "alphabet a b\n"
    "repeated 1\n"
    "initial 1 eps 1\n"
    "final 1 eps 1\n"
    "push 1 1 a 1\n"
    "pop 1 1 b 1\n";

/// Lukasiewicz plus a silent stay loop: every accepting run can be padded
/// anywhere, so every nonzero coefficient is infinite.
inline constexpr const char* kPumpedNatInf =
    "semiring natinf\n"
    "states 1\n"
    "alphabet a b\n"
    "repeated 1\n"
    "initial 1 eps 1\n"
    "final 1 eps 1\n"
    "push 1 1 a 1\n"
    "pop 1 1 b 1\n"
    "stay 1 1 eps 1\n";

/// Two distinct pops accept the single letter b: d(b) = 2.
inline constexpr const char* kAmbiguousNatInf =
    "semiring natinf\n"
    "states 2\n"
    "alphabet a b\n"
    "repeated 1\n"
    "initial 1 eps 1\n"
    "final 1 eps 1\n"
    "final 2 eps 1\n"
    "push 1 1 a 1\n"
    "pop 1 1 b 1\n"
    "pop 1 2 b 1\n"
    "pop 2 2 b 1\n";

struct RandomAutomatonOptions {
    Domain domain = Domain::Bool;
    int max_states = 3;
    bool unit_weights = true;  // keep all coefficients in {0,1}
    // Inclusion chances in percent, applied per (block, i, j, letter).
    int letter_density = 28;
    int epsilon_density = 5;
};

namespace detail {
inline int roll(std::mt19937_64& rng, int bound) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(bound));
}
inline bool chance(std::mt19937_64& rng, int percent) { return roll(rng, 100) < percent; }
}  // namespace detail

/// Seeded random automaton over {a, b}. The generator avoids library
/// distributions so a seed pins the corpus bit for bit.
inline RocAutomaton random_automaton(std::mt19937_64& rng, const RandomAutomatonOptions& opts) {
    const int n = 1 + detail::roll(rng, opts.max_states);
    const int k = detail::roll(rng, n + 1);
    RocAutomaton aut(n, opts.domain, {"a", "b"}, k);
    auto weight = [&]() {
        if (opts.domain == Domain::Bool) return Weight::boolean(true);
        if (opts.unit_weights) return Weight::nat(1);
        const int pick = detail::roll(rng, 6);
        if (pick == 0) return Weight::infinity();
        if (pick == 1) return Weight::nat(2);
        return Weight::nat(1);
    };
    auto fill_block = [&](std::vector<std::vector<LetterPolynomial>>& block) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                for (int a = 0; a < 2; ++a)
                    if (detail::chance(rng, opts.letter_density)) block[i][j].add(a, weight());
                if (detail::chance(rng, opts.epsilon_density)) block[i][j].add(kEpsilon, weight());
            }
    };
    fill_block(aut.push_block);
    fill_block(aut.stay_block);
    fill_block(aut.pop_block);
    for (int i = 0; i < n; ++i) {
        if (detail::chance(rng, 55))
            aut.initial[i].add(detail::chance(rng, 20) ? detail::roll(rng, 2) : kEpsilon, weight());
        if (detail::chance(rng, 55))
            aut.final_states[i].add(detail::chance(rng, 20) ? detail::roll(rng, 2) : kEpsilon, weight());
    }
    bool has_initial = false, has_final = false;
    for (int i = 0; i < n; ++i) {
        has_initial = has_initial || !aut.initial[i].is_zero();
        has_final = has_final || !aut.final_states[i].is_zero();
    }
    if (!has_initial) aut.initial[0].add(kEpsilon, weight());
    if (!has_final) aut.final_states[n - 1].add(kEpsilon, weight());
    return aut;
}

struct CorpusEntry {
    std::string name;
    RocAutomaton automaton;
};

/// Fixtures plus seeded random automata; the same seed always yields the
/// same corpus.
inline std::vector<CorpusEntry> validation_corpus(std::uint64_t seed, int bool_count,
                                                  int natinf_count, bool unit_weights = true) {
    std::vector<CorpusEntry> corpus;
    corpus.push_back({"lukasiewicz", parse_automaton(std::string(kLukasiewiczBool))});
    corpus.push_back({"lukasiewicz-natinf", parse_automaton(std::string(kLukasiewiczNatInf))});
    corpus.push_back({"pumped-natinf", parse_automaton(std::string(kPumpedNatInf))});
    corpus.push_back({"ambiguous-natinf", parse_automaton(std::string(kAmbiguousNatInf))});
    std::mt19937_64 rng(seed);
    for (int t = 0; t < bool_count; ++t) {
        RandomAutomatonOptions opts;
        opts.domain = Domain::Bool;
        corpus.push_back({"bool-rand-" + std::to_string(t + 1), random_automaton(rng, opts)});
    }
    for (int t = 0; t < natinf_count; ++t) {
        RandomAutomatonOptions opts;
        opts.domain = Domain::NatInf;
        opts.unit_weights = unit_weights;
        corpus.push_back({"natinf-rand-" + std::to_string(t + 1), random_automaton(rng, opts)});
    }
    return corpus;
}

}  // namespace roca
