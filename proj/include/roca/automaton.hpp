// automaton.hpp -- the omega-restricted one-counter automaton data model
// and its line-oriented text format.
//
// States are 0-based everywhere in the API; the file format and all
// printed output use 1-based indices.

#pragma once

#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "roca/weight.hpp"

namespace roca {

/// Letter id inside an automaton's alphabet; kEpsilon marks the empty word.
constexpr int kEpsilon = -1;

using Word = std::vector<int>;

/// A finite map from Sigma ∪ {eps} to weights; absent letters are zero.
struct LetterPolynomial {
    Domain domain = Domain::Bool;
    std::map<int, Weight> terms;  // kEpsilon sorts first

    explicit LetterPolynomial(Domain d = Domain::Bool) : domain(d) {}

    Weight coef(int letter) const {
        auto it = terms.find(letter);
        return it == terms.end() ? Weight::zero(domain) : it->second;
    }

    void add(int letter, const Weight& w) {
        if (w.domain != domain) throw std::invalid_argument("weight domain mismatch");
        auto [it, inserted] = terms.emplace(letter, w);
        if (!inserted) it->second += w;
        if (it->second.is_zero()) terms.erase(it);
    }

    bool is_zero() const { return terms.empty(); }

    friend bool operator==(const LetterPolynomial& a, const LetterPolynomial& b) {
        return a.domain == b.domain && a.terms == b.terms;
    }
};

/// The tuple (n, Sigma, I, M, P, k) with the counter matrix M given by its
/// push/stay/pop blocks. Repeated states are {0, ..., k-1} (0-based).
struct RocAutomaton {
    int n = 1;
    Domain domain = Domain::Bool;
    std::vector<std::string> alphabet;
    int k = 0;
    std::vector<LetterPolynomial> initial;                // I, row of n
    std::vector<LetterPolynomial> final_states;           // P, column of n
    std::vector<std::vector<LetterPolynomial>> push_block;  // A = M_{p,pp}
    std::vector<std::vector<LetterPolynomial>> stay_block;  // C = M_{p,p}
    std::vector<std::vector<LetterPolynomial>> pop_block;   // B = M_{p,eps}

    RocAutomaton() = default;
    RocAutomaton(int states, Domain d, std::vector<std::string> letters, int repeated)
        : n(states), domain(d), alphabet(std::move(letters)), k(repeated) {
        if (states < 1) throw std::invalid_argument("state count must be >= 1");
        if (repeated < 0 || repeated > states) throw std::out_of_range("k out of range");
        initial.assign(n, LetterPolynomial(d));
        final_states.assign(n, LetterPolynomial(d));
        push_block.assign(n, std::vector<LetterPolynomial>(n, LetterPolynomial(d)));
        stay_block.assign(n, std::vector<LetterPolynomial>(n, LetterPolynomial(d)));
        pop_block.assign(n, std::vector<LetterPolynomial>(n, LetterPolynomial(d)));
    }

    int sigma() const { return static_cast<int>(alphabet.size()); }

    std::optional<int> find_letter(std::string_view name) const {
        for (int i = 0; i < sigma(); ++i)
            if (alphabet[i] == name) return i;
        return std::nullopt;
    }

    const std::string& letter_name(int id) const { return alphabet.at(static_cast<std::size_t>(id)); }

    bool all_weights_unit() const {
        auto poly01 = [](const LetterPolynomial& p) {
            for (const auto& [l, w] : p.terms)
                if (!w.is_one()) return false;
            return true;
        };
        for (int i = 0; i < n; ++i) {
            if (!poly01(initial[i]) || !poly01(final_states[i])) return false;
            for (int j = 0; j < n; ++j)
                if (!poly01(push_block[i][j]) || !poly01(stay_block[i][j]) || !poly01(pop_block[i][j]))
                    return false;
        }
        return true;
    }
};

/// Maps every nonzero coefficient to 1 over the bool domain; shape and
/// repeated states are preserved.
inline RocAutomaton bool_projection(const RocAutomaton& a) {
    if (a.domain == Domain::Bool) return a;
    RocAutomaton b(a.n, Domain::Bool, a.alphabet, a.k);
    auto project = [](const LetterPolynomial& p) {
        LetterPolynomial q(Domain::Bool);
        for (const auto& [l, w] : p.terms)
            if (!w.is_zero()) q.add(l, Weight::boolean(true));
        return q;
    };
    for (int i = 0; i < a.n; ++i) {
        b.initial[i] = project(a.initial[i]);
        b.final_states[i] = project(a.final_states[i]);
        for (int j = 0; j < a.n; ++j) {
            b.push_block[i][j] = project(a.push_block[i][j]);
            b.stay_block[i][j] = project(a.stay_block[i][j]);
            b.pop_block[i][j] = project(a.pop_block[i][j]);
        }
    }
    return b;
}

struct ParseError : std::runtime_error {
    int line;
    ParseError(int ln, const std::string& msg)
        : std::runtime_error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

/// Parses the automaton file format:
///
///   semiring bool|natinf
///   states <n>
///   alphabet <letter> <letter> ...
///   repeated <k>
///   initial <i> <letter|eps> <weight>
///   final <i> <letter|eps> <weight>
///   push <i> <j> <letter|eps> <weight>
///   stay <i> <j> <letter|eps> <weight>
///   pop <i> <j> <letter|eps> <weight>
///
/// '#' starts a comment. Duplicate coefficient lines accumulate by
/// semiring addition.
inline RocAutomaton parse_automaton(std::istream& in) {
    std::optional<Domain> domain;
    std::optional<int> states;
    std::optional<std::vector<std::string>> alphabet;
    std::optional<int> repeated;
    std::optional<RocAutomaton> aut;

    auto build_if_ready = [&]() {
        if (!aut && domain && states && alphabet && repeated) {
            aut.emplace(*states, *domain, *alphabet, *repeated);
        }
    };

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string directive;
        if (!(ls >> directive)) continue;

        auto fail = [&](const std::string& msg) -> ParseError { return ParseError(lineno, msg); };
        auto next_token = [&](const char* what) {
            std::string t;
            if (!(ls >> t)) throw fail(std::string("missing ") + what);
            return t;
        };
        auto next_int = [&](const char* what) {
            std::string t = next_token(what);
            try {
                std::size_t used = 0;
                int v = std::stoi(t, &used);
                if (used != t.size()) throw std::invalid_argument(t);
                return v;
            } catch (const std::exception&) {
                throw fail(std::string("malformed ") + what + ": " + t);
            }
        };

        if (directive == "semiring") {
            if (domain) throw fail("duplicate directive: semiring");
            std::string t = next_token("semiring name");
            try {
                domain = parse_domain(t);
            } catch (const std::exception& e) {
                throw fail(e.what());
            }
        } else if (directive == "states") {
            if (states) throw fail("duplicate directive: states");
            int v = next_int("state count");
            if (v < 1) throw fail("state count must be >= 1");
            states = v;
        } else if (directive == "alphabet") {
            if (alphabet) throw fail("duplicate directive: alphabet");
            std::vector<std::string> letters;
            std::string t;
            while (ls >> t) {
                if (t == "eps") throw fail("'eps' is reserved and cannot be a letter");
                for (const auto& seen : letters)
                    if (seen == t) throw fail("duplicate letter: " + t);
                letters.push_back(t);
            }
            alphabet = std::move(letters);
        } else if (directive == "repeated") {
            if (repeated) throw fail("duplicate directive: repeated");
            if (!states) throw fail("'repeated' requires 'states' first");
            int v = next_int("repeated count");
            if (v < 0 || v > *states) throw fail("k out of range");
            repeated = v;
        } else if (directive == "initial" || directive == "final" || directive == "push" ||
                   directive == "stay" || directive == "pop") {
            build_if_ready();
            if (!aut) throw fail("transition before the semiring/states/alphabet/repeated header");
            const bool binary = directive == "push" || directive == "stay" || directive == "pop";
            int i = next_int("state index");
            if (i < 1 || i > aut->n) throw fail("state index out of range: " + std::to_string(i));
            int j = 0;
            if (binary) {
                j = next_int("state index");
                if (j < 1 || j > aut->n) throw fail("state index out of range: " + std::to_string(j));
            }
            std::string letterTok = next_token("letter");
            int letter = kEpsilon;
            if (letterTok != "eps") {
                auto id = aut->find_letter(letterTok);
                if (!id) throw fail("letter not in alphabet: " + letterTok);
                letter = *id;
            }
            std::string weightTok = next_token("weight");
            Weight w = Weight::zero(aut->domain);
            try {
                w = parse_weight(aut->domain, weightTok);
            } catch (const std::exception& e) {
                throw fail(e.what());
            }
            std::string extra;
            if (ls >> extra) throw fail("trailing token: " + extra);
            if (directive == "initial") aut->initial[i - 1].add(letter, w);
            else if (directive == "final") aut->final_states[i - 1].add(letter, w);
            else if (directive == "push") aut->push_block[i - 1][j - 1].add(letter, w);
            else if (directive == "stay") aut->stay_block[i - 1][j - 1].add(letter, w);
            else aut->pop_block[i - 1][j - 1].add(letter, w);
        } else {
            throw fail("unknown directive: " + directive);
        }
    }
    if (!domain) throw ParseError(lineno + 1, "missing directive: semiring");
    if (!states) throw ParseError(lineno + 1, "missing directive: states");
    if (!alphabet) throw ParseError(lineno + 1, "missing directive: alphabet");
    if (!repeated) throw ParseError(lineno + 1, "missing directive: repeated");
    build_if_ready();
    return *aut;
}

inline RocAutomaton parse_automaton(const std::string& text) {
    std::istringstream in(text);
    return parse_automaton(in);
}

/// Words on the command line are `.`-separated letter tokens; when every
/// alphabet letter is a single character the dots may be omitted. The
/// empty string is the empty word.
inline Word parse_letters(const RocAutomaton& aut, std::string_view text) {
    Word w;
    if (text.empty()) return w;
    auto push_token = [&](std::string_view tok) {
        auto id = aut.find_letter(tok);
        if (!id) throw std::invalid_argument("letter not in alphabet: " + std::string(tok));
        w.push_back(*id);
    };
    if (text.find('.') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            std::size_t dot = text.find('.', start);
            std::size_t end = dot == std::string_view::npos ? text.size() : dot;
            push_token(text.substr(start, end - start));
            if (dot == std::string_view::npos) break;
            start = dot + 1;
        }
        return w;
    }
    bool all_single = true;
    for (const auto& l : aut.alphabet)
        if (l.size() != 1) all_single = false;
    if (all_single) {
        for (char c : text) push_token(std::string_view(&c, 1));
        return w;
    }
    push_token(text);
    return w;
}

inline std::string format_letters(const RocAutomaton& aut, const Word& w) {
    if (w.empty()) return "\"\"";
    bool all_single = true;
    for (const auto& l : aut.alphabet)
        if (l.size() != 1) all_single = false;
    std::string out;
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (t > 0 && !all_single) out += '.';
        out += aut.letter_name(w[t]);
    }
    return out;
}

}  // namespace roca
