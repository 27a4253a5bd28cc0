// grammar.hpp -- the triple-pair construction from a roc automaton to a
// mixed context-free grammar, finite leftmost derivation counting with
// exact infinity detection, and bounded omega-derivation search.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "roca/automaton.hpp"
#include "roca/graph.hpp"
#include "roca/upword.hpp"
#include "roca/weight.hpp"

namespace roca {

/// Finite-derivation production, one of the four templates
///   x0 -> a [m1,p,m2] b
///   [i,p,j] -> a [m1,p,m2] [m2,p,j]
///   [i,p,j] -> a [m1,p,j]
///   [i,p,j] -> a
/// with letters a, b in Sigma ∪ {eps} (eps dropped when rendered).
struct ProductionX {
    enum class Kind { Start, PushPair, StayStep, PopLeaf };
    Kind kind = Kind::PopLeaf;
    int i = -1, j = -1;  // lhs [i,p,j]; ignored for Start
    int a = kEpsilon;
    int b = kEpsilon;    // Start only
    int m1 = -1, m2 = -1;

    friend auto key(const ProductionX& p) {
        return std::tuple(static_cast<int>(p.kind), p.i, p.j, p.m1, p.m2, p.a, p.b);
    }
    friend bool operator<(const ProductionX& x, const ProductionX& y) { return key(x) < key(y); }
    friend bool operator==(const ProductionX& x, const ProductionX& y) { return key(x) == key(y); }
};

/// Infinite-derivation production, one of
///   z0 -> a [m1,p]
///   [i,p] -> a [m1,p]
///   [i,p] -> a [m1,p,m2] [m2,p]
struct ProductionZ {
    enum class Kind { Start, Step, PairStep };
    Kind kind = Kind::Step;
    int i = -1;  // lhs [i,p]; ignored for Start
    int a = kEpsilon;
    int m1 = -1, m2 = -1;

    friend auto key(const ProductionZ& p) {
        return std::tuple(static_cast<int>(p.kind), p.i, p.m1, p.m2, p.a);
    }
    friend bool operator<(const ProductionZ& x, const ProductionZ& y) { return key(x) < key(y); }
    friend bool operator==(const ProductionZ& x, const ProductionZ& y) { return key(x) == key(y); }
};

/// The mixed grammar G_k = (X, Z, Sigma, P_X, P_Z, x0, z0, k). Repeated
/// variables for infinite derivations are [i,p] with i < k (0-based).
struct MixedGrammar {
    int n = 1;
    std::vector<std::string> alphabet;
    int k = 0;
    std::vector<ProductionX> productions_x;  // canonically sorted
    std::vector<ProductionZ> productions_z;  // canonically sorted, deduplicated

    friend bool operator==(const MixedGrammar& a, const MixedGrammar& b) {
        return a.n == b.n && a.alphabet == b.alphabet && a.k == b.k &&
               a.productions_x == b.productions_x && a.productions_z == b.productions_z;
    }
};

/// Exact derivation count in N ∪ {inf}; carried in the natinf domain.
using DerivCount = Weight;

/// Emits exactly the productions induced by the nonzero coefficients of
/// the automaton blocks, in canonical order.
inline MixedGrammar triple_pair_construct(const RocAutomaton& aut) {
    MixedGrammar g;
    g.n = aut.n;
    g.alphabet = aut.alphabet;
    g.k = aut.k;
    const int n = aut.n;

    for (int m1 = 0; m1 < n; ++m1)
        for (const auto& [a, wa] : aut.initial[m1].terms)
            for (int m2 = 0; m2 < n; ++m2)
                for (const auto& [b, wb] : aut.final_states[m2].terms) {
                    (void)wa; (void)wb;  // stored terms are nonzero
                    g.productions_x.push_back({ProductionX::Kind::Start, -1, -1, a, b, m1, m2});
                }
    for (int i = 0; i < n; ++i)
        for (int m1 = 0; m1 < n; ++m1)
            for (const auto& [a, w] : aut.push_block[i][m1].terms)
                for (int m2 = 0; m2 < n; ++m2)
                    for (int j = 0; j < n; ++j)
                        g.productions_x.push_back({ProductionX::Kind::PushPair, i, j, a, kEpsilon, m1, m2});
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m)
            for (const auto& [a, w] : aut.stay_block[i][m].terms)
                for (int j = 0; j < n; ++j)
                    g.productions_x.push_back({ProductionX::Kind::StayStep, i, j, a, kEpsilon, m, -1});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& [a, w] : aut.pop_block[i][j].terms)
                g.productions_x.push_back({ProductionX::Kind::PopLeaf, i, j, a, kEpsilon, -1, -1});

    for (int m = 0; m < n; ++m)
        for (const auto& [a, w] : aut.initial[m].terms)
            g.productions_z.push_back({ProductionZ::Kind::Start, -1, a, m, -1});
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) {
            for (const auto& [a, w] : aut.push_block[i][m].terms)
                g.productions_z.push_back({ProductionZ::Kind::Step, i, a, m, -1});
            for (const auto& [a, w] : aut.stay_block[i][m].terms)
                g.productions_z.push_back({ProductionZ::Kind::Step, i, a, m, -1});
        }
    for (int i = 0; i < n; ++i)
        for (int m1 = 0; m1 < n; ++m1)
            for (const auto& [a, w] : aut.push_block[i][m1].terms)
                for (int m2 = 0; m2 < n; ++m2)
                    g.productions_z.push_back({ProductionZ::Kind::PairStep, i, a, m1, m2});

    std::sort(g.productions_x.begin(), g.productions_x.end());
    std::sort(g.productions_z.begin(), g.productions_z.end());
    g.productions_z.erase(std::unique(g.productions_z.begin(), g.productions_z.end()),
                          g.productions_z.end());
    return g;
}

// ---------------------------------------------------------------------------
// Parse charts. The [i,p,j] variables of the triple construction double as
// the entries of the star block, so one chart engine serves both grammar
// derivation counting (unit rule weights) and weighted coefficient queries
// (rule weights taken from the automaton blocks).

namespace detail {

struct BlockRules {
    int n = 0;
    // Indexed by lhs pair id i*n+j.
    std::vector<std::vector<std::pair<int, Weight>>> pop;            // (letter, w)
    std::vector<std::vector<std::tuple<int, int, Weight>>> stay;     // (m, letter, w)
    std::vector<std::vector<std::tuple<int, int, int, Weight>>> push;  // (m1, m2, letter, w)
    struct X0Rule {
        int a, m1, m2, b;
        Weight w;
    };
    std::vector<X0Rule> x0;

    int pair_id(int i, int j) const { return i * n + j; }
};

inline BlockRules rules_from_automaton(const RocAutomaton& aut, bool with_x0 = true) {
    BlockRules r;
    r.n = aut.n;
    const int n = aut.n;
    r.pop.resize(n * n);
    r.stay.resize(n * n);
    r.push.resize(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int id = r.pair_id(i, j);
            for (const auto& [a, w] : aut.pop_block[i][j].terms) r.pop[id].push_back({a, w});
            for (int m = 0; m < n; ++m)
                for (const auto& [a, w] : aut.stay_block[i][m].terms) r.stay[id].push_back({m, a, w});
            for (int m1 = 0; m1 < n; ++m1)
                for (const auto& [a, w] : aut.push_block[i][m1].terms)
                    for (int m2 = 0; m2 < n; ++m2) r.push[id].push_back({m1, m2, a, w});
        }
    if (with_x0)
        for (int m1 = 0; m1 < n; ++m1)
            for (const auto& [a, wa] : aut.initial[m1].terms)
                for (int m2 = 0; m2 < n; ++m2)
                    for (const auto& [b, wb] : aut.final_states[m2].terms)
                        r.x0.push_back({a, m1, m2, b, wa * wb});
    return r;
}

inline BlockRules rules_from_grammar(const MixedGrammar& g) {
    BlockRules r;
    r.n = g.n;
    const int n = g.n;
    r.pop.resize(n * n);
    r.stay.resize(n * n);
    r.push.resize(n * n);
    const Weight unit = Weight::one(Domain::NatInf);
    for (const auto& p : g.productions_x) {
        switch (p.kind) {
            case ProductionX::Kind::Start:
                r.x0.push_back({p.a, p.m1, p.m2, p.b, unit});
                break;
            case ProductionX::Kind::PushPair:
                r.push[r.pair_id(p.i, p.j)].push_back({p.m1, p.m2, p.a, unit});
                break;
            case ProductionX::Kind::StayStep:
                r.stay[r.pair_id(p.i, p.j)].push_back({p.m1, p.a, unit});
                break;
            case ProductionX::Kind::PopLeaf:
                r.pop[r.pair_id(p.i, p.j)].push_back({p.a, unit});
                break;
        }
    }
    return r;
}

/// Derivability and exact derivation weights for every span of a finite
/// word, over all [i,p,j] variables. Infinite values are detected
/// structurally: an item whose expansion can revisit itself inside a
/// complete parse has infinitely many derivation trees.
struct AbsoluteChart {
    const BlockRules* rules = nullptr;
    Word word;
    int n = 0, len = 0, spans = 0;
    std::vector<char> derivable;   // [pair][span]
    std::vector<Weight> weight;    // natinf, valid once counted
    bool counted = false;

    int span_id(int l, int r) const { return l * (len + 1) + r; }
    int item_id(int pair, int l, int r) const { return pair * spans + span_id(l, r); }

    bool derives(int i, int j, int l, int r) const {
        return derivable[static_cast<std::size_t>(item_id((i)*n + j, l, r))] != 0;
    }
};

inline AbsoluteChart build_absolute_chart(const BlockRules& rules, const Word& word) {
    AbsoluteChart c;
    c.rules = &rules;
    c.word = word;
    c.n = rules.n;
    c.len = static_cast<int>(word.size());
    c.spans = (c.len + 1) * (c.len + 1);
    const int pairs = c.n * c.n;
    c.derivable.assign(static_cast<std::size_t>(pairs) * c.spans, 0);

    auto matches = [&](int letter, int l, int r, int& body_l) {
        if (letter == kEpsilon) {
            body_l = l;
            return true;
        }
        if (l < r && word[static_cast<std::size_t>(l)] == letter) {
            body_l = l + 1;
            return true;
        }
        return false;
    };

    for (int length = 0; length <= c.len; ++length) {
        for (int l = 0; l + length <= c.len; ++l) {
            const int r = l + length;
            // Same-span dependencies come from eps-leading rules; iterate to
            // the (finite lattice) fixpoint inside the span.
            bool changed = true;
            while (changed) {
                changed = false;
                for (int pair = 0; pair < pairs; ++pair) {
                    char& slot = c.derivable[static_cast<std::size_t>(c.item_id(pair, l, r))];
                    if (slot) continue;
                    bool ok = false;
                    for (const auto& [a, w] : rules.pop[pair]) {
                        if (a == kEpsilon ? (l == r)
                                          : (r - l == 1 && word[static_cast<std::size_t>(l)] == a)) {
                            ok = true;
                            break;
                        }
                    }
                    const int i = pair / c.n, j = pair % c.n;
                    (void)i;
                    if (!ok)
                        for (const auto& [m, a, w] : rules.stay[pair]) {
                            int bl;
                            if (!matches(a, l, r, bl)) continue;
                            if (bl <= r && c.derives(m, j, bl, r)) {
                                ok = true;
                                break;
                            }
                        }
                    if (!ok)
                        for (const auto& [m1, m2, a, w] : rules.push[pair]) {
                            int bl;
                            if (!matches(a, l, r, bl)) continue;
                            for (int s = bl; s <= r && !ok; ++s)
                                ok = c.derives(m1, m2, bl, s) && c.derives(m2, j, s, r);
                            if (ok) break;
                        }
                    if (ok) {
                        slot = 1;
                        changed = true;
                    }
                }
            }
        }
    }
    return c;
}

/// Enumerates the valid alternatives of a derivable item: calls
/// fn(children, weight) where children is a list of item ids.
template <typename Fn>
inline void for_each_alternative(const AbsoluteChart& c, int pair, int l, int r, Fn&& fn) {
    const BlockRules& rules = *c.rules;
    const int j = pair % c.n;
    auto matches = [&](int letter, int& body_l) {
        if (letter == kEpsilon) {
            body_l = l;
            return true;
        }
        if (l < r && c.word[static_cast<std::size_t>(l)] == letter) {
            body_l = l + 1;
            return true;
        }
        return false;
    };
    for (const auto& [a, w] : rules.pop[pair])
        if (a == kEpsilon ? (l == r) : (r - l == 1 && c.word[static_cast<std::size_t>(l)] == a))
            fn(std::initializer_list<int>{}, w);
    for (const auto& [m, a, w] : rules.stay[pair]) {
        int bl;
        if (!matches(a, bl)) continue;
        if (c.derives(m, j, bl, r)) fn(std::initializer_list<int>{c.item_id(m * c.n + j, bl, r)}, w);
    }
    for (const auto& [m1, m2, a, w] : rules.push[pair]) {
        int bl;
        if (!matches(a, bl)) continue;
        for (int s = bl; s <= r; ++s)
            if (c.derives(m1, m2, bl, s) && c.derives(m2, j, s, r))
                fn(std::initializer_list<int>{c.item_id(m1 * c.n + m2, bl, s),
                                              c.item_id(m2 * c.n + j, s, r)},
                   w);
    }
}

inline void count_chart(AbsoluteChart& c) {
    if (c.counted) return;
    const int pairs = c.n * c.n;
    const int total = pairs * c.spans;
    c.weight.assign(static_cast<std::size_t>(total), Weight::zero(Domain::NatInf));

    // Dependency graph over derivable items; cyclic components mean the
    // parse forest can pump and the weight is exactly infinite.
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(total));
    std::vector<char> self_loop(static_cast<std::size_t>(total), 0);
    for (int pair = 0; pair < pairs; ++pair)
        for (int l = 0; l <= c.len; ++l)
            for (int r = l; r <= c.len; ++r) {
                const int id = c.item_id(pair, l, r);
                if (!c.derivable[static_cast<std::size_t>(id)]) continue;
                for_each_alternative(c, pair, l, r, [&](auto children, const Weight&) {
                    for (int child : children) {
                        adj[static_cast<std::size_t>(id)].push_back(child);
                        if (child == id) self_loop[static_cast<std::size_t>(id)] = 1;
                    }
                });
            }
    int comp_count = 0;
    std::vector<int> comp = tarjan_scc(adj, &comp_count);
    std::vector<int> comp_size(static_cast<std::size_t>(comp_count), 0);
    for (int v = 0; v < total; ++v)
        if (comp[v] >= 0) ++comp_size[static_cast<std::size_t>(comp[v])];

    // Component ids are in reverse topological order: children first.
    std::vector<std::vector<int>> by_comp(static_cast<std::size_t>(comp_count));
    for (int pair = 0; pair < pairs; ++pair)
        for (int l = 0; l <= c.len; ++l)
            for (int r = l; r <= c.len; ++r) {
                const int id = c.item_id(pair, l, r);
                if (c.derivable[static_cast<std::size_t>(id)])
                    by_comp[static_cast<std::size_t>(comp[id])].push_back(id);
            }
    for (int cc = 0; cc < comp_count; ++cc) {
        for (int id : by_comp[static_cast<std::size_t>(cc)]) {
            const bool cyclic = comp_size[static_cast<std::size_t>(cc)] > 1 ||
                                self_loop[static_cast<std::size_t>(id)];
            if (cyclic) {
                c.weight[static_cast<std::size_t>(id)] = Weight::infinity();
                continue;
            }
            const int pair = id / c.spans;
            const int l = (id % c.spans) / (c.len + 1);
            const int r = (id % c.spans) % (c.len + 1);
            Weight total_w = Weight::zero(Domain::NatInf);
            for_each_alternative(c, pair, l, r, [&](auto children, const Weight& w) {
                Weight alt = w;
                for (int child : children) alt *= c.weight[static_cast<std::size_t>(child)];
                total_w += alt;
            });
            c.weight[static_cast<std::size_t>(id)] = total_w;
        }
    }
    c.counted = true;
}

inline Weight chart_weight(AbsoluteChart& c, int i, int j, int l, int r) {
    count_chart(c);
    return c.weight[static_cast<std::size_t>(c.item_id(i * c.n + j, l, r))];
}

inline bool chart_x0_derives(const AbsoluteChart& c) {
    for (const auto& rule : c.rules->x0) {
        int l = 0, r = c.len;
        if (rule.a != kEpsilon) {
            if (l >= r || c.word[static_cast<std::size_t>(l)] != rule.a) continue;
            ++l;
        }
        if (rule.b != kEpsilon) {
            if (r <= l || c.word[static_cast<std::size_t>(r - 1)] != rule.b) continue;
            --r;
        }
        if (c.derives(rule.m1, rule.m2, l, r)) return true;
    }
    return false;
}

inline Weight chart_x0_weight(AbsoluteChart& c) {
    count_chart(c);
    Weight total = Weight::zero(Domain::NatInf);
    for (const auto& rule : c.rules->x0) {
        int l = 0, r = c.len;
        if (rule.a != kEpsilon) {
            if (l >= r || c.word[static_cast<std::size_t>(l)] != rule.a) continue;
            ++l;
        }
        if (rule.b != kEpsilon) {
            if (r <= l || c.word[static_cast<std::size_t>(r - 1)] != rule.b) continue;
            --r;
        }
        if (!c.derives(rule.m1, rule.m2, l, r)) continue;
        total += rule.w * chart_weight(c, rule.m1, rule.m2, l, r);
    }
    return total;
}

// --- canonical charts over ultimately periodic texts ---------------------

/// Derivability masks over the canonical positions of u·v^omega: bit L of
/// masks[pair][pos] says that [i,p,j] derives the length-L factor starting
/// at pos. with_k[pair][pos] additionally requires a parse that rewrites
/// some variable with first index < k.
struct CanonicalChart {
    int n = 0, positions = 0, max_len = 0;
    std::vector<Bits> masks;   // [pair*positions + pos]
    std::vector<Bits> with_k;  // same layout; empty unless requested

    const Bits& mask(int pair, int pos) const {
        return masks[static_cast<std::size_t>(pair) * positions + pos];
    }
    const Bits& mask_k(int pair, int pos) const {
        return with_k[static_cast<std::size_t>(pair) * positions + pos];
    }
};

inline CanonicalChart build_canonical_chart(const BlockRules& rules, const UPWord& text,
                                            int max_len, int k, bool want_k) {
    CanonicalChart c;
    c.n = rules.n;
    c.positions = up_positions(text);
    c.max_len = max_len;
    const int pairs = c.n * c.n;
    c.masks.assign(static_cast<std::size_t>(pairs) * c.positions, Bits(max_len + 1));

    auto slot = [&](std::vector<Bits>& table, int pair, int pos) -> Bits& {
        return table[static_cast<std::size_t>(pair) * c.positions + pos];
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (int pair = 0; pair < pairs; ++pair) {
            const int j = pair % c.n;
            for (int pos = 0; pos < c.positions; ++pos) {
                Bits next = slot(c.masks, pair, pos);
                for (const auto& [a, w] : rules.pop[pair]) {
                    if (a == kEpsilon) next.set(0);
                    else if (up_letter_canonical(text, pos) == a && max_len >= 1) next.set(1);
                }
                for (const auto& [m, a, w] : rules.stay[pair]) {
                    int shift = 0, body = pos;
                    if (a != kEpsilon) {
                        if (up_letter_canonical(text, pos) != a) continue;
                        shift = 1;
                        body = up_advance(text, pos);
                    }
                    next.or_shifted(slot(c.masks, m * c.n + j, body), shift);
                }
                for (const auto& [m1, m2, a, w] : rules.push[pair]) {
                    int shift = 0, body = pos;
                    if (a != kEpsilon) {
                        if (up_letter_canonical(text, pos) != a) continue;
                        shift = 1;
                        body = up_advance(text, pos);
                    }
                    const Bits& first = slot(c.masks, m1 * c.n + m2, body);
                    for (int l1 = 0; l1 + shift <= max_len; ++l1) {
                        if (!first.test(l1)) continue;
                        const int mid = up_advance_by(text, body, l1);
                        next.or_shifted(slot(c.masks, m2 * c.n + j, mid), l1 + shift);
                    }
                }
                if (!(next == slot(c.masks, pair, pos))) {
                    slot(c.masks, pair, pos) = next;
                    changed = true;
                }
            }
        }
    }

    if (!want_k) return c;
    c.with_k.assign(static_cast<std::size_t>(pairs) * c.positions, Bits(max_len + 1));
    for (int pair = 0; pair < pairs; ++pair)
        if (pair / c.n < k)
            for (int pos = 0; pos < c.positions; ++pos)
                slot(c.with_k, pair, pos) = slot(c.masks, pair, pos);
    changed = true;
    while (changed) {
        changed = false;
        for (int pair = 0; pair < pairs; ++pair) {
            const int j = pair % c.n;
            for (int pos = 0; pos < c.positions; ++pos) {
                Bits next = slot(c.with_k, pair, pos);
                for (const auto& [m, a, w] : rules.stay[pair]) {
                    int shift = 0, body = pos;
                    if (a != kEpsilon) {
                        if (up_letter_canonical(text, pos) != a) continue;
                        shift = 1;
                        body = up_advance(text, pos);
                    }
                    next.or_shifted(slot(c.with_k, m * c.n + j, body), shift);
                }
                for (const auto& [m1, m2, a, w] : rules.push[pair]) {
                    int shift = 0, body = pos;
                    if (a != kEpsilon) {
                        if (up_letter_canonical(text, pos) != a) continue;
                        shift = 1;
                        body = up_advance(text, pos);
                    }
                    const Bits& first = slot(c.masks, m1 * c.n + m2, body);
                    const Bits& first_k = slot(c.with_k, m1 * c.n + m2, body);
                    for (int l1 = 0; l1 + shift <= max_len; ++l1) {
                        const int mid = up_advance_by(text, body, l1);
                        if (first_k.test(l1))
                            next.or_shifted(slot(c.masks, m2 * c.n + j, mid), l1 + shift);
                        if (first.test(l1))
                            next.or_shifted(slot(c.with_k, m2 * c.n + j, mid), l1 + shift);
                    }
                }
                if (!(next == slot(c.with_k, pair, pos))) {
                    slot(c.with_k, pair, pos) = next;
                    changed = true;
                }
            }
        }
    }
    return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Exact number of distinct finite leftmost derivations of w from x0,
/// infinity included.
inline DerivCount count_finite_derivations(const MixedGrammar& g, const Word& w) {
    detail::BlockRules rules = detail::rules_from_grammar(g);
    detail::AbsoluteChart chart = detail::build_absolute_chart(rules, w);
    return detail::chart_x0_weight(chart);
}

inline bool finite_member(const MixedGrammar& g, const Word& w) {
    detail::BlockRules rules = detail::rules_from_grammar(g);
    detail::AbsoluteChart chart = detail::build_absolute_chart(rules, w);
    return detail::chart_x0_derives(chart);
}

/// Bounded check for an infinite leftmost derivation of u·v^omega whose
/// repeated-variable condition holds, with every finite segment produced
/// between two Z-variables limited to segment_bound letters.
inline bool omega_derivation_exists(const MixedGrammar& g, const UPWord& w, int segment_bound = 12) {
    require_valid(w);
    if (segment_bound < 1) throw std::invalid_argument("segment bound must be >= 1");
    const int n = g.n;
    const int P = up_positions(w);

    detail::BlockRules rules = detail::rules_from_grammar(g);
    detail::CanonicalChart chart = detail::build_canonical_chart(rules, w, segment_bound, g.k, true);

    struct Edge {
        int to;
        int letters;
        bool k_inside;
    };
    const int nodes = n * P;
    std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(nodes));
    auto node_id = [&](int zi, int pos) { return zi * P + pos; };

    for (const auto& p : g.productions_z) {
        if (p.kind == ProductionZ::Kind::Start) continue;
        for (int pos = 0; pos < P; ++pos) {
            int body = pos, consumed = 0;
            if (p.a != kEpsilon) {
                if (up_letter_canonical(w, pos) != p.a) continue;
                body = up_advance(w, pos);
                consumed = 1;
            }
            if (p.kind == ProductionZ::Kind::Step) {
                edges[static_cast<std::size_t>(node_id(p.i, pos))].push_back(
                    {node_id(p.m1, body), consumed, false});
            } else {
                const detail::Bits& d = chart.mask(p.m1 * n + p.m2, body);
                const detail::Bits& dk = chart.mask_k(p.m1 * n + p.m2, body);
                for (int L = 0; L <= segment_bound; ++L) {
                    if (!d.test(L)) continue;
                    const int to = node_id(p.m2, up_advance_by(w, body, L));
                    // The segment's own root [m1,p,m2] is rewritten, so a
                    // first index m1 < k already satisfies the condition.
                    const bool seg_k = dk.test(L) || p.m1 < g.k;
                    edges[static_cast<std::size_t>(node_id(p.i, pos))].push_back(
                        {to, consumed + L, seg_k});
                }
            }
        }
    }

    // Nodes reachable through some z0 production at position 0.
    std::vector<char> reach(static_cast<std::size_t>(nodes), 0);
    std::vector<int> queue;
    for (const auto& p : g.productions_z) {
        if (p.kind != ProductionZ::Kind::Start) continue;
        int body = 0;
        if (p.a != kEpsilon) {
            if (up_letter_canonical(w, 0) != p.a) continue;
            body = up_advance(w, 0);
        }
        const int id = node_id(p.m1, body);
        if (!reach[static_cast<std::size_t>(id)]) {
            reach[static_cast<std::size_t>(id)] = 1;
            queue.push_back(id);
        }
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
        for (const Edge& e : edges[static_cast<std::size_t>(queue[qi])])
            if (!reach[static_cast<std::size_t>(e.to)]) {
                reach[static_cast<std::size_t>(e.to)] = 1;
                queue.push_back(e.to);
            }

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
    for (int v = 0; v < nodes; ++v)
        if (reach[static_cast<std::size_t>(v)])
            for (const Edge& e : edges[static_cast<std::size_t>(v)])
                adj[static_cast<std::size_t>(v)].push_back(e.to);
    int comp_count = 0;
    std::vector<int> comp = detail::tarjan_scc(adj, &comp_count);

    std::vector<char> has_letter(static_cast<std::size_t>(comp_count), 0);
    std::vector<char> has_k(static_cast<std::size_t>(comp_count), 0);
    std::vector<char> has_edge(static_cast<std::size_t>(comp_count), 0);
    for (int v = 0; v < nodes; ++v) {
        if (!reach[static_cast<std::size_t>(v)]) continue;
        for (const Edge& e : edges[static_cast<std::size_t>(v)]) {
            if (comp[v] != comp[e.to]) continue;
            has_edge[static_cast<std::size_t>(comp[v])] = 1;
            if (e.letters > 0) has_letter[static_cast<std::size_t>(comp[v])] = 1;
            if (e.k_inside) has_k[static_cast<std::size_t>(comp[v])] = 1;
        }
    }
    std::vector<char> node_k(static_cast<std::size_t>(comp_count), 0);
    for (int v = 0; v < nodes; ++v)
        if (reach[static_cast<std::size_t>(v)] && v / P < g.k)
            node_k[static_cast<std::size_t>(comp[v])] = 1;

    for (int cc = 0; cc < comp_count; ++cc)
        if (has_edge[static_cast<std::size_t>(cc)] && has_letter[static_cast<std::size_t>(cc)] &&
            (has_k[static_cast<std::size_t>(cc)] || node_k[static_cast<std::size_t>(cc)]))
            return true;
    return false;
}

// --- export / import -------------------------------------------------------

namespace detail {

inline std::string var3(int i, int j) {
    return "[" + std::to_string(i + 1) + ",p," + std::to_string(j + 1) + "]";
}
inline std::string var2(int i) { return "[" + std::to_string(i + 1) + ",p]"; }

}  // namespace detail

/// Deterministic structured-text document; re-parsing yields an identical
/// grammar and re-exporting yields identical bytes.
inline std::string export_grammar(const MixedGrammar& g) {
    nlohmann::ordered_json doc;
    doc["n"] = g.n;
    doc["alphabet"] = g.alphabet;
    doc["k"] = g.k;
    auto letter = [&](int a) { return g.alphabet[static_cast<std::size_t>(a)]; };
    nlohmann::ordered_json px = nlohmann::ordered_json::array();
    for (const auto& p : g.productions_x) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        switch (p.kind) {
            case ProductionX::Kind::Start:
                row.push_back("x0");
                if (p.a != kEpsilon) row.push_back(letter(p.a));
                row.push_back(detail::var3(p.m1, p.m2));
                if (p.b != kEpsilon) row.push_back(letter(p.b));
                break;
            case ProductionX::Kind::PushPair:
                row.push_back(detail::var3(p.i, p.j));
                if (p.a != kEpsilon) row.push_back(letter(p.a));
                row.push_back(detail::var3(p.m1, p.m2));
                row.push_back(detail::var3(p.m2, p.j));
                break;
            case ProductionX::Kind::StayStep:
                row.push_back(detail::var3(p.i, p.j));
                if (p.a != kEpsilon) row.push_back(letter(p.a));
                row.push_back(detail::var3(p.m1, p.j));
                break;
            case ProductionX::Kind::PopLeaf:
                row.push_back(detail::var3(p.i, p.j));
                if (p.a != kEpsilon) row.push_back(letter(p.a));
                break;
        }
        px.push_back(std::move(row));
    }
    doc["productions_x"] = std::move(px);
    nlohmann::ordered_json pz = nlohmann::ordered_json::array();
    for (const auto& p : g.productions_z) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        switch (p.kind) {
            case ProductionZ::Kind::Start:
                row.push_back("z0");
                if (p.a != kEpsilon) row.push_back(letter(p.a));
                row.push_back(detail::var2(p.m1));
                break;
            case ProductionZ::Kind::Step:
                row.push_back(detail::var2(p.i));
                if (p.a != kEpsilon) row.push_back(letter(p.a));
                row.push_back(detail::var2(p.m1));
                break;
            case ProductionZ::Kind::PairStep:
                row.push_back(detail::var2(p.i));
                if (p.a != kEpsilon) row.push_back(letter(p.a));
                row.push_back(detail::var3(p.m1, p.m2));
                row.push_back(detail::var2(p.m2));
                break;
        }
        pz.push_back(std::move(row));
    }
    doc["productions_z"] = std::move(pz);
    return doc.dump(2) + "\n";
}

namespace detail {

struct GrammarToken {
    enum class Kind { X0, Z0, Var3, Var2, Letter } kind;
    int i = -1, j = -1;  // Var3: [i,p,j]; Var2: [i,p]
    int letter = -1;
};

inline GrammarToken classify_token(const MixedGrammar& g, const std::string& tok) {
    if (tok == "x0") return {GrammarToken::Kind::X0};
    if (tok == "z0") return {GrammarToken::Kind::Z0};
    if (!tok.empty() && tok.front() == '[' && tok.back() == ']') {
        std::string body = tok.substr(1, tok.size() - 2);
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = body.find(',', start);
            parts.push_back(body.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        auto index = [&](const std::string& s) {
            int v = std::stoi(s);
            if (v < 1 || v > g.n) throw std::invalid_argument("variable index out of range: " + tok);
            return v - 1;
        };
        if (parts.size() == 3 && parts[1] == "p")
            return {GrammarToken::Kind::Var3, index(parts[0]), index(parts[2])};
        if (parts.size() == 2 && parts[1] == "p")
            return {GrammarToken::Kind::Var2, index(parts[0])};
        throw std::invalid_argument("malformed variable token: " + tok);
    }
    for (int a = 0; a < static_cast<int>(g.alphabet.size()); ++a)
        if (g.alphabet[static_cast<std::size_t>(a)] == tok)
            return {GrammarToken::Kind::Letter, -1, -1, a};
    throw std::invalid_argument("token is neither a variable nor a letter: " + tok);
}

}  // namespace detail

inline MixedGrammar parse_grammar(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    MixedGrammar g;
    g.n = doc.at("n").get<int>();
    if (g.n < 1) throw std::invalid_argument("n must be >= 1");
    g.alphabet = doc.at("alphabet").get<std::vector<std::string>>();
    g.k = doc.at("k").get<int>();
    if (g.k < 0 || g.k > g.n) throw std::out_of_range("k out of range");

    auto tokens_of = [&](const nlohmann::json& row) {
        std::vector<detail::GrammarToken> toks;
        for (const auto& t : row) toks.push_back(detail::classify_token(g, t.get<std::string>()));
        return toks;
    };

    for (const auto& row : doc.at("productions_x")) {
        auto toks = tokens_of(row);
        if (toks.empty()) throw std::invalid_argument("empty production");
        std::size_t at = 1;
        int a = kEpsilon;
        if (at < toks.size() && toks[at].kind == detail::GrammarToken::Kind::Letter)
            a = toks[at++].letter;
        ProductionX p;
        p.a = a;
        if (toks[0].kind == detail::GrammarToken::Kind::X0) {
            if (at >= toks.size() || toks[at].kind != detail::GrammarToken::Kind::Var3)
                throw std::invalid_argument("x0 production must contain a triple variable");
            p.kind = ProductionX::Kind::Start;
            p.m1 = toks[at].i;
            p.m2 = toks[at].j;
            ++at;
            if (at < toks.size()) {
                if (toks[at].kind != detail::GrammarToken::Kind::Letter)
                    throw std::invalid_argument("x0 production tail must be a letter");
                p.b = toks[at++].letter;
            }
        } else if (toks[0].kind == detail::GrammarToken::Kind::Var3) {
            p.i = toks[0].i;
            p.j = toks[0].j;
            if (at == toks.size()) {
                p.kind = ProductionX::Kind::PopLeaf;
            } else if (toks.size() - at == 1 && toks[at].kind == detail::GrammarToken::Kind::Var3) {
                if (toks[at].j != p.j)
                    throw std::invalid_argument("chain variable must share the final index");
                p.kind = ProductionX::Kind::StayStep;
                p.m1 = toks[at].i;
                ++at;
            } else if (toks.size() - at == 2 && toks[at].kind == detail::GrammarToken::Kind::Var3 &&
                       toks[at + 1].kind == detail::GrammarToken::Kind::Var3) {
                if (toks[at].j != toks[at + 1].i || toks[at + 1].j != p.j)
                    throw std::invalid_argument("pair variables must chain [m1,p,m2][m2,p,j]");
                p.kind = ProductionX::Kind::PushPair;
                p.m1 = toks[at].i;
                p.m2 = toks[at].j;
                at += 2;
            } else {
                throw std::invalid_argument("production matches no finite template");
            }
        } else {
            throw std::invalid_argument("finite production lhs must be x0 or [i,p,j]");
        }
        if (at != toks.size()) throw std::invalid_argument("trailing tokens in production");
        g.productions_x.push_back(p);
    }

    for (const auto& row : doc.at("productions_z")) {
        auto toks = tokens_of(row);
        if (toks.empty()) throw std::invalid_argument("empty production");
        std::size_t at = 1;
        int a = kEpsilon;
        if (at < toks.size() && toks[at].kind == detail::GrammarToken::Kind::Letter)
            a = toks[at++].letter;
        ProductionZ p;
        p.a = a;
        const bool start = toks[0].kind == detail::GrammarToken::Kind::Z0;
        if (!start) {
            if (toks[0].kind != detail::GrammarToken::Kind::Var2)
                throw std::invalid_argument("infinite production lhs must be z0 or [i,p]");
            p.i = toks[0].i;
        }
        if (toks.size() - at == 1 && toks[at].kind == detail::GrammarToken::Kind::Var2) {
            p.kind = start ? ProductionZ::Kind::Start : ProductionZ::Kind::Step;
            p.m1 = toks[at].i;
            ++at;
        } else if (!start && toks.size() - at == 2 &&
                   toks[at].kind == detail::GrammarToken::Kind::Var3 &&
                   toks[at + 1].kind == detail::GrammarToken::Kind::Var2) {
            if (toks[at].j != toks[at + 1].i)
                throw std::invalid_argument("pair variables must chain [m1,p,m2][m2,p]");
            p.kind = ProductionZ::Kind::PairStep;
            p.m1 = toks[at].i;
            p.m2 = toks[at].j;
            at += 2;
        } else {
            throw std::invalid_argument("production matches no infinite template");
        }
        if (at != toks.size()) throw std::invalid_argument("trailing tokens in production");
        g.productions_z.push_back(p);
    }

    std::sort(g.productions_x.begin(), g.productions_x.end());
    g.productions_x.erase(std::unique(g.productions_x.begin(), g.productions_x.end()),
                          g.productions_x.end());
    std::sort(g.productions_z.begin(), g.productions_z.end());
    g.productions_z.erase(std::unique(g.productions_z.begin(), g.productions_z.end()),
                          g.productions_z.end());
    return g;
}

}  // namespace roca
