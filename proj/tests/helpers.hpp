// helpers.hpp -- shared fixtures and small independent oracles for tests.

#pragma once

#include <string>
#include <vector>

#include "roca/automaton.hpp"
#include "roca/corpus.hpp"

namespace roca::test {

inline RocAutomaton lukasiewicz() { return parse_automaton(std::string(kLukasiewiczBool)); }
inline RocAutomaton lukasiewicz_natinf() { return parse_automaton(std::string(kLukasiewiczNatInf)); }
inline RocAutomaton pumped() { return parse_automaton(std::string(kPumpedNatInf)); }
inline RocAutomaton ambiguous() { return parse_automaton(std::string(kAmbiguousNatInf)); }

/// Independent characterization of the Lukasiewicz language over a=0, b=1:
/// one more b than a, and no proper prefix with more b than a.
inline bool is_lukasiewicz_word(const Word& w) {
    long long balance = 1;  // one pending counter unit
    for (std::size_t t = 0; t < w.size(); ++t) {
        balance += w[t] == 0 ? 1 : -1;
        if (balance < 0) return false;
        if (balance == 0 && t + 1 != w.size()) return false;
    }
    return balance == 0 && !w.empty();
}

/// All words over {0,...,sigma-1} of length <= max_len, shortlex.
inline std::vector<Word> all_words(int sigma, int max_len) {
    std::vector<Word> out{{}};
    std::vector<Word> last{{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const Word& w : last)
            for (int a = 0; a < sigma; ++a) {
                Word e = w;
                e.push_back(a);
                next.push_back(e);
            }
        out.insert(out.end(), next.begin(), next.end());
        last = std::move(next);
    }
    return out;
}

}  // namespace roca::test
