// omega.hpp -- Buchi acceptance of ultimately periodic words. The decision
// procedure searches the bounded configuration graph (state, phase,
// counter <= CB) for flat lassos (cycles) and rising lassos (same state
// and phase at a strictly larger counter); the bound CB = c + |u| +
// n·|v|·(n+2) is large enough that any accepting run can be pumped down
// into it, because roc automata have no zero tests.

#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "roca/automaton.hpp"
#include "roca/graph.hpp"
#include "roca/upword.hpp"

namespace roca {

enum class MoveKind { Push, Stay, Pop };

struct Move {
    MoveKind kind = MoveKind::Stay;
    int from = 0, to = 0;
    int letter = kEpsilon;

    friend bool operator==(const Move& a, const Move& b) {
        return a.kind == b.kind && a.from == b.from && a.to == b.to && a.letter == b.letter;
    }
};

/// Witness for omega acceptance: a finite stem followed by a cycle that is
/// repeated forever. drift = #push - #pop over the cycle; a drift-0 cycle
/// returns to its entry configuration, a positive drift climbs forever.
struct LassoCertificate {
    int start_state = 0;
    int start_counter = 1;
    std::vector<Move> stem;
    std::vector<Move> cycle;
    int drift = 0;
};

namespace detail {

struct OmegaGraph {
    const RocAutomaton* aut = nullptr;
    UPWord word;
    int P = 0, CB = 0, nodes = 0;

    struct Edge {
        int to;
        bool letter;  // consumed one letter of the word
        Move move;
    };
    std::vector<std::vector<Edge>> edges;
    std::vector<char> reachable;
    int start_node = -1;

    int node_id(int q, int pos, int c) const { return (q * P + pos) * CB + (c - 1); }
    int state_of(int v) const { return v / (P * CB); }
    int pos_of(int v) const { return (v / CB) % P; }
    int counter_of(int v) const { return v % CB + 1; }
};

inline OmegaGraph build_omega_graph(const RocAutomaton& aut, int state, int counter,
                                    const UPWord& w) {
    OmegaGraph g;
    g.aut = &aut;
    g.word = w;
    g.P = up_positions(w);
    const long long cb = counter + static_cast<long long>(w.prefix.size()) +
                         static_cast<long long>(aut.n) * w.period.size() * (aut.n + 2);
    g.CB = static_cast<int>(cb);
    g.nodes = aut.n * g.P * g.CB;
    g.edges.assign(static_cast<std::size_t>(g.nodes), {});

    auto add_edges = [&](int q, int pos, int c) {
        const int from = g.node_id(q, pos, c);
        auto& out = g.edges[static_cast<std::size_t>(from)];
        const int word_letter = up_letter_canonical(w, pos);
        // Canonical edge order: push < stay < pop, then target state, then
        // eps before the letter; ties in the search resolve deterministically.
        struct BlockRef {
            MoveKind kind;
            const std::vector<std::vector<LetterPolynomial>>* block;
            int delta;
        };
        const BlockRef blocks[3] = {{MoveKind::Push, &aut.push_block, +1},
                                    {MoveKind::Stay, &aut.stay_block, 0},
                                    {MoveKind::Pop, &aut.pop_block, -1}};
        for (const auto& ref : blocks)
            for (int r = 0; r < aut.n; ++r) {
                const LetterPolynomial& poly =
                    (*ref.block)[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)];
                if (poly.is_zero()) continue;
                const int c2 = c + ref.delta;
                if (c2 < 1 || c2 > g.CB) continue;
                if (!poly.coef(kEpsilon).is_zero())
                    out.push_back({g.node_id(r, pos, c2), false,
                                   Move{ref.kind, q, r, kEpsilon}});
                if (!poly.coef(word_letter).is_zero())
                    out.push_back({g.node_id(r, up_advance(w, pos), c2), true,
                                   Move{ref.kind, q, r, word_letter}});
            }
    };

    for (int q = 0; q < aut.n; ++q)
        for (int pos = 0; pos < g.P; ++pos)
            for (int c = 1; c <= g.CB; ++c) add_edges(q, pos, c);

    g.start_node = g.node_id(state, 0, counter);
    g.reachable.assign(static_cast<std::size_t>(g.nodes), 0);
    std::vector<int> queue{g.start_node};
    g.reachable[static_cast<std::size_t>(g.start_node)] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
        for (const auto& e : g.edges[static_cast<std::size_t>(queue[qi])])
            if (!g.reachable[static_cast<std::size_t>(e.to)]) {
                g.reachable[static_cast<std::size_t>(e.to)] = 1;
                queue.push_back(e.to);
            }
    return g;
}

/// SCC decision over the reachable subgraph extended with counter-descent
/// edges (same state and phase, next smaller reachable counter). A real
/// cycle is a flat lasso; a cycle through a descent edge is a rising lasso
/// pumped into the bound.
inline std::vector<int> omega_accepting_components(const OmegaGraph& g, int k, int* comp_count_out,
                                                   std::vector<int>* comp_out) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.nodes));
    for (int v = 0; v < g.nodes; ++v) {
        if (!g.reachable[static_cast<std::size_t>(v)]) continue;
        for (const auto& e : g.edges[static_cast<std::size_t>(v)])
            adj[static_cast<std::size_t>(v)].push_back(e.to);
    }
    // Descent chains between reachable counters at a fixed (state, phase).
    const int slots = g.P == 0 ? 0 : g.nodes / g.CB;
    for (int slot = 0; slot < slots; ++slot) {
        int prev = -1;
        for (int c = 1; c <= g.CB; ++c) {
            const int v = slot * g.CB + (c - 1);
            if (!g.reachable[static_cast<std::size_t>(v)]) continue;
            if (prev >= 0) adj[static_cast<std::size_t>(v)].push_back(prev);
            prev = v;
        }
    }
    int comp_count = 0;
    std::vector<int> comp = tarjan_scc(adj, &comp_count);
    std::vector<char> letter_in(static_cast<std::size_t>(comp_count), 0);
    std::vector<char> buchi_in(static_cast<std::size_t>(comp_count), 0);
    for (int v = 0; v < g.nodes; ++v) {
        if (!g.reachable[static_cast<std::size_t>(v)]) continue;
        if (g.state_of(v) < k) buchi_in[static_cast<std::size_t>(comp[v])] = 1;
        for (const auto& e : g.edges[static_cast<std::size_t>(v)])
            if (comp[v] == comp[e.to] && e.letter) letter_in[static_cast<std::size_t>(comp[v])] = 1;
    }
    std::vector<int> accepting;
    for (int cc = 0; cc < comp_count; ++cc)
        if (letter_in[static_cast<std::size_t>(cc)] && buchi_in[static_cast<std::size_t>(cc)])
            accepting.push_back(cc);
    if (comp_count_out) *comp_count_out = comp_count;
    if (comp_out) *comp_out = std::move(comp);
    return accepting;
}

inline void require_omega_query(const RocAutomaton& aut, int state, int counter, const UPWord& w) {
    if (aut.domain != Domain::Bool)
        throw std::invalid_argument("omega membership requires the bool domain");
    if (state < 0 || state >= aut.n) throw std::out_of_range("state out of range");
    if (counter < 1) throw std::invalid_argument("start counter must be >= 1");
    require_valid(w);
    for (int letter : w.prefix)
        if (letter < 0 || letter >= aut.sigma()) throw std::invalid_argument("letter not in alphabet");
    for (int letter : w.period)
        if (letter < 0 || letter >= aut.sigma()) throw std::invalid_argument("letter not in alphabet");
}

}  // namespace detail

/// True iff some infinite run from (state, counter) reads u·v^omega, keeps
/// the counter >= 1 forever, and visits states < k infinitely often.
inline bool omega_member_from(const RocAutomaton& aut, int state, int counter, const UPWord& w) {
    detail::require_omega_query(aut, state, counter, w);
    if (aut.k == 0) return false;
    detail::OmegaGraph g = detail::build_omega_graph(aut, state, counter, w);
    return !detail::omega_accepting_components(g, aut.k, nullptr, nullptr).empty();
}

/// The omega part of the behavior: some initial entry consumes its letter
/// (or eps) and the rest is accepted from that state at counter 1.
inline bool behavior_omega_member(const RocAutomaton& aut, const UPWord& w) {
    if (aut.domain != Domain::Bool)
        throw std::invalid_argument("omega membership requires the bool domain");
    require_valid(w);
    for (int m = 0; m < aut.n; ++m)
        for (const auto& [a, wi] : aut.initial[static_cast<std::size_t>(m)].terms) {
            if (a == kEpsilon) {
                if (omega_member_from(aut, m, 1, w)) return true;
            } else if (up_letter(w, 0) == a) {
                if (omega_member_from(aut, m, 1, up_tail(w, 1))) return true;
            }
        }
    return false;
}

/// Constructive witness search; returns the certificate with the shortest
/// stem, breaking ties by shortest cycle.
inline std::optional<LassoCertificate> find_lasso(const RocAutomaton& aut, int state, int counter,
                                                  const UPWord& w) {
    detail::require_omega_query(aut, state, counter, w);
    if (aut.k == 0) return std::nullopt;
    detail::OmegaGraph g = detail::build_omega_graph(aut, state, counter, w);
    int comp_count = 0;
    std::vector<int> comp;
    std::vector<int> accepting = detail::omega_accepting_components(g, aut.k, &comp_count, &comp);
    if (accepting.empty()) return std::nullopt;
    std::vector<char> in_accepting(static_cast<std::size_t>(comp_count), 0);
    for (int cc : accepting) in_accepting[static_cast<std::size_t>(cc)] = 1;

    // Shortest distances from the start, deterministic parent edges.
    std::vector<int> dist(static_cast<std::size_t>(g.nodes), -1);
    std::vector<std::pair<int, Move>> parent(static_cast<std::size_t>(g.nodes), {-1, Move{}});
    std::vector<int> bfs{g.start_node};
    dist[static_cast<std::size_t>(g.start_node)] = 0;
    for (std::size_t qi = 0; qi < bfs.size(); ++qi) {
        const int v = bfs[qi];
        for (const auto& e : g.edges[static_cast<std::size_t>(v)])
            if (dist[static_cast<std::size_t>(e.to)] < 0) {
                dist[static_cast<std::size_t>(e.to)] = dist[static_cast<std::size_t>(v)] + 1;
                parent[static_cast<std::size_t>(e.to)] = {v, e.move};
                bfs.push_back(e.to);
            }
    }

    // Candidate anchors live in accepting components; group by stem length.
    std::vector<int> anchors;
    for (int v = 0; v < g.nodes; ++v)
        if (g.reachable[static_cast<std::size_t>(v)] && dist[static_cast<std::size_t>(v)] >= 0 &&
            in_accepting[static_cast<std::size_t>(comp[v])])
            anchors.push_back(v);
    std::stable_sort(anchors.begin(), anchors.end(),
                     [&](int a, int b) { return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)]; });

    // Cycle search from one anchor: shortest move sequence back to the same
    // (state, phase) at the same or a larger counter, consuming at least one
    // letter and visiting a repeated state on the way.
    auto cycle_from = [&](int anchor) -> std::optional<std::vector<Move>> {
        const int aq = g.state_of(anchor), apos = g.pos_of(anchor), ac = g.counter_of(anchor);
        const int states = g.nodes * 4;
        auto code = [&](int v, bool letter, bool buchi) {
            return (v << 2) | (letter ? 2 : 0) | (buchi ? 1 : 0);
        };
        std::vector<int> pdist(static_cast<std::size_t>(states), -1);
        std::vector<std::pair<int, Move>> pparent(static_cast<std::size_t>(states), {-1, Move{}});
        const int startCode = code(anchor, false, g.state_of(anchor) < aut.k);
        std::vector<int> queue{startCode};
        pdist[static_cast<std::size_t>(startCode)] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int cur = queue[qi];
            const int v = cur >> 2;
            const bool letter = cur & 2, buchi = cur & 1;
            for (const auto& e : g.edges[static_cast<std::size_t>(v)]) {
                const bool nletter = letter || e.letter;
                const bool nbuchi = buchi || g.state_of(e.to) < aut.k;
                const int nc = code(e.to, nletter, nbuchi);
                if (pdist[static_cast<std::size_t>(nc)] >= 0) continue;
                pdist[static_cast<std::size_t>(nc)] = pdist[static_cast<std::size_t>(cur)] + 1;
                pparent[static_cast<std::size_t>(nc)] = {cur, e.move};
                if (nletter && nbuchi && g.state_of(e.to) == aq && g.pos_of(e.to) == apos &&
                    g.counter_of(e.to) >= ac) {
                    std::vector<Move> moves;
                    for (int at = nc; at != startCode; at = pparent[static_cast<std::size_t>(at)].first)
                        moves.push_back(pparent[static_cast<std::size_t>(at)].second);
                    std::reverse(moves.begin(), moves.end());
                    return moves;
                }
                queue.push_back(nc);
            }
        }
        return std::nullopt;
    };

    std::optional<LassoCertificate> best;
    std::size_t at = 0;
    while (at < anchors.size()) {
        const int stem_len = dist[static_cast<std::size_t>(anchors[at])];
        if (best) break;
        std::size_t end = at;
        while (end < anchors.size() && dist[static_cast<std::size_t>(anchors[end])] == stem_len) ++end;
        for (std::size_t t = at; t < end; ++t) {
            auto cyc = cycle_from(anchors[t]);
            if (!cyc) continue;
            if (best && best->cycle.size() <= cyc->size()) continue;
            LassoCertificate cert;
            cert.start_state = state;
            cert.start_counter = counter;
            for (int v = anchors[t]; v != g.start_node; v = parent[static_cast<std::size_t>(v)].first)
                cert.stem.push_back(parent[static_cast<std::size_t>(v)].second);
            std::reverse(cert.stem.begin(), cert.stem.end());
            cert.cycle = std::move(*cyc);
            cert.drift = 0;
            for (const Move& m : cert.cycle)
                cert.drift += m.kind == MoveKind::Push ? 1 : m.kind == MoveKind::Pop ? -1 : 0;
            best = std::move(cert);
        }
        at = end;
    }
    if (!best) throw std::logic_error("accepted omega query without a reconstructible lasso");
    return best;
}

/// Independent certificate checker: replays moves against raw block
/// coefficients, tracks the counter, and matches letters against enough
/// laps of the cycle to cover a full period alignment.
inline bool replay_lasso(const RocAutomaton& aut, const LassoCertificate& cert, const UPWord& w) {
    require_valid(w);
    if (cert.start_state < 0 || cert.start_state >= aut.n) return false;
    if (cert.start_counter < 1) return false;
    if (cert.cycle.empty()) return false;

    auto coefficient = [&](const Move& m) -> Weight {
        if (m.from < 0 || m.from >= aut.n || m.to < 0 || m.to >= aut.n)
            return Weight::zero(aut.domain);
        const auto& block = m.kind == MoveKind::Push
                                ? aut.push_block
                                : m.kind == MoveKind::Stay ? aut.stay_block : aut.pop_block;
        return block[static_cast<std::size_t>(m.from)][static_cast<std::size_t>(m.to)].coef(m.letter);
    };

    int state = cert.start_state;
    long long counter = cert.start_counter;
    long long pos = 0;
    auto step = [&](const Move& m) {
        if (m.from != state) return false;
        if (coefficient(m).is_zero()) return false;
        if (m.letter != kEpsilon) {
            if (up_letter(w, pos) != m.letter) return false;
            ++pos;
        }
        counter += m.kind == MoveKind::Push ? 1 : m.kind == MoveKind::Pop ? -1 : 0;
        if (counter < 1) return false;
        state = m.to;
        return true;
    };

    for (const Move& m : cert.stem)
        if (!step(m)) return false;

    const int anchor_state = state;
    int emitted = 0, drift = 0;
    bool sees_repeated = anchor_state < aut.k;
    for (const Move& m : cert.cycle) {
        if (m.letter != kEpsilon) ++emitted;
        drift += m.kind == MoveKind::Push ? 1 : m.kind == MoveKind::Pop ? -1 : 0;
        if (m.to < aut.k) sees_repeated = true;
    }
    if (emitted < 1 || drift != cert.drift || drift < 0 || !sees_repeated) return false;

    // Laps to simulate: enough to leave the prefix and then cover every
    // phase the cycle can start at inside the period.
    const long long u = static_cast<long long>(w.prefix.size());
    const long long v = static_cast<long long>(w.period.size());
    long long laps = (u - pos + emitted - 1) / emitted + v + 2;
    if (laps < 2) laps = 2;
    for (long long lap = 0; lap < laps; ++lap) {
        const long long lap_counter = counter;
        for (const Move& m : cert.cycle)
            if (!step(m)) return false;
        if (state != anchor_state) return false;
        if (counter != lap_counter + drift) return false;
    }
    return true;
}

}  // namespace roca
