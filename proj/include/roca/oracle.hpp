// oracle.hpp -- deliberately naive ground truth: bounded enumeration of
// finite accepting runs on the configuration graph, and a plain saturating
// lasso search for omega queries. No grammar machinery and no series
// algebra, so agreement with the main engines is evidence rather than
// circularity.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "roca/automaton.hpp"
#include "roca/graph.hpp"
#include "roca/omega.hpp"
#include "roca/upword.hpp"

namespace roca {

/// One finite accepting run: the initial entry consumed, the moves of the
/// core run from counter 1 down to 0, and the final entry consumed.
struct RunWitness {
    int start_state = 0;
    int initial_letter = kEpsilon;
    std::vector<Move> moves;
    int end_state = 0;
    int final_letter = kEpsilon;
};

/// Evidence that the run count is infinite: a complete accepting run
/// together with an inserted cycle that consumes no input.
struct PumpTranscript {
    RunWitness base;
    std::size_t insert_at = 0;  // index into base.moves where the cycle fits
    std::vector<Move> cycle;
};

struct RunReport {
    Weight count = Weight::nat(0);         // number of distinct runs, natinf
    Weight total_weight = Weight::nat(0);  // sum of run weights, natinf
    bool complete = false;
    std::vector<RunWitness> witnesses;
    std::optional<PumpTranscript> pump;
};

namespace detail {

struct RunGraph {
    int n = 0, len = 0, cb = 0, nodes = 0;
    struct Edge {
        int to;
        Move move;
        Weight weight;
    };
    std::vector<std::vector<Edge>> edges;
    struct Endpoint {
        int node;
        int state;
        int letter;
        Weight weight;
    };
    std::vector<Endpoint> sources, sinks;
    std::vector<int> cut_nodes;  // nodes whose push past cb was suppressed

    int node_id(int q, int pos, int c) const { return (q * (len + 1) + pos) * (cb + 1) + c; }
    int state_of(int v) const { return v / ((len + 1) * (cb + 1)); }
    int pos_of(int v) const { return (v / (cb + 1)) % (len + 1); }
    int counter_of(int v) const { return v % (cb + 1); }
};

inline RunGraph build_run_graph(const RocAutomaton& aut, const Word& w, int cb, bool with_entries,
                                int from_state = 0, int start_counter = 1, int to_state = -1) {
    RunGraph g;
    g.n = aut.n;
    g.len = static_cast<int>(w.size());
    g.cb = cb;
    g.nodes = aut.n * (g.len + 1) * (cb + 1);
    g.edges.assign(static_cast<std::size_t>(g.nodes), {});

    for (int q = 0; q < aut.n; ++q)
        for (int pos = 0; pos <= g.len; ++pos)
            for (int c = 1; c <= cb; ++c) {
                const int from = g.node_id(q, pos, c);
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
                        for (const auto& [letter, weight] : poly.terms) {
                            int pos2 = pos;
                            if (letter != kEpsilon) {
                                if (pos >= g.len || w[static_cast<std::size_t>(pos)] != letter)
                                    continue;
                                pos2 = pos + 1;
                            }
                            const int c2 = c + ref.delta;
                            if (c2 < 0) continue;
                            if (c2 > cb) {
                                g.cut_nodes.push_back(from);
                                continue;
                            }
                            g.edges[static_cast<std::size_t>(from)].push_back(
                                {g.node_id(r, pos2, c2), Move{ref.kind, q, r, letter}, weight});
                        }
                    }
            }

    if (with_entries) {
        for (int m = 0; m < aut.n; ++m)
            for (const auto& [a, wi] : aut.initial[static_cast<std::size_t>(m)].terms) {
                if (a == kEpsilon) {
                    g.sources.push_back({g.node_id(m, 0, 1), m, a, wi});
                } else if (g.len >= 1 && w[0] == a) {
                    g.sources.push_back({g.node_id(m, 1, 1), m, a, wi});
                }
            }
        for (int j = 0; j < aut.n; ++j)
            for (const auto& [b, wp] : aut.final_states[static_cast<std::size_t>(j)].terms) {
                if (b == kEpsilon) {
                    g.sinks.push_back({g.node_id(j, g.len, 0), j, b, wp});
                } else if (g.len >= 1 && w[static_cast<std::size_t>(g.len - 1)] == b) {
                    g.sinks.push_back({g.node_id(j, g.len - 1, 0), j, b, wp});
                }
            }
    } else {
        if (start_counter > cb) throw std::invalid_argument("counter bound below start counter");
        g.sources.push_back({g.node_id(from_state, 0, start_counter), from_state, kEpsilon,
                             Weight::one(aut.domain)});
        g.sinks.push_back({g.node_id(to_state, g.len, 0), to_state, kEpsilon, Weight::one(aut.domain)});
    }
    return g;
}

struct RunAnalysis {
    std::vector<char> reachable, coreachable;
    std::vector<int> comp;
    int comp_count = 0;
    std::vector<char> comp_cyclic;
    bool relevant_cycle = false;
    bool push_cut_reachable = false;
    long long longest_path = 0;  // over the relevant DAG, -1 if cyclic
};

inline RunAnalysis analyze_run_graph(const RunGraph& g) {
    RunAnalysis a;
    a.reachable.assign(static_cast<std::size_t>(g.nodes), 0);
    std::vector<int> queue;
    for (const auto& s : g.sources)
        if (!a.reachable[static_cast<std::size_t>(s.node)]) {
            a.reachable[static_cast<std::size_t>(s.node)] = 1;
            queue.push_back(s.node);
        }
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
        for (const auto& e : g.edges[static_cast<std::size_t>(queue[qi])])
            if (!a.reachable[static_cast<std::size_t>(e.to)]) {
                a.reachable[static_cast<std::size_t>(e.to)] = 1;
                queue.push_back(e.to);
            }

    std::vector<std::vector<int>> redges(static_cast<std::size_t>(g.nodes));
    for (int v = 0; v < g.nodes; ++v)
        for (const auto& e : g.edges[static_cast<std::size_t>(v)])
            redges[static_cast<std::size_t>(e.to)].push_back(v);
    a.coreachable.assign(static_cast<std::size_t>(g.nodes), 0);
    queue.clear();
    for (const auto& s : g.sinks)
        if (!a.coreachable[static_cast<std::size_t>(s.node)]) {
            a.coreachable[static_cast<std::size_t>(s.node)] = 1;
            queue.push_back(s.node);
        }
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
        for (int from : redges[static_cast<std::size_t>(queue[qi])])
            if (!a.coreachable[static_cast<std::size_t>(from)]) {
                a.coreachable[static_cast<std::size_t>(from)] = 1;
                queue.push_back(from);
            }

    auto relevant = [&](int v) {
        return a.reachable[static_cast<std::size_t>(v)] && a.coreachable[static_cast<std::size_t>(v)];
    };

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.nodes));
    std::vector<char> self_loop(static_cast<std::size_t>(g.nodes), 0);
    for (int v = 0; v < g.nodes; ++v) {
        if (!relevant(v)) continue;
        for (const auto& e : g.edges[static_cast<std::size_t>(v)])
            if (relevant(e.to)) {
                adj[static_cast<std::size_t>(v)].push_back(e.to);
                if (e.to == v) self_loop[static_cast<std::size_t>(v)] = 1;
            }
    }
    a.comp = tarjan_scc(adj, &a.comp_count);
    a.comp_cyclic.assign(static_cast<std::size_t>(a.comp_count), 0);
    std::vector<int> comp_size(static_cast<std::size_t>(a.comp_count), 0);
    for (int v = 0; v < g.nodes; ++v)
        if (relevant(v)) ++comp_size[static_cast<std::size_t>(a.comp[v])];
    for (int v = 0; v < g.nodes; ++v)
        if (relevant(v) &&
            (comp_size[static_cast<std::size_t>(a.comp[v])] > 1 || self_loop[static_cast<std::size_t>(v)]))
            a.comp_cyclic[static_cast<std::size_t>(a.comp[v])] = 1;
    for (int cc = 0; cc < a.comp_count; ++cc)
        if (a.comp_cyclic[static_cast<std::size_t>(cc)]) a.relevant_cycle = true;

    // A suppressed push matters only if some run can actually reach it.
    for (int v : g.cut_nodes)
        if (a.reachable[static_cast<std::size_t>(v)]) {
            a.push_cut_reachable = true;
            break;
        }

    if (!a.relevant_cycle) {
        // Longest relevant path, children-first over the reverse topological
        // component order.
        std::vector<long long> best(static_cast<std::size_t>(g.nodes), -1);
        std::vector<int> order;
        for (int v = 0; v < g.nodes; ++v)
            if (relevant(v)) order.push_back(v);
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            return a.comp[x] < a.comp[y];
        });
        std::vector<char> is_sink(static_cast<std::size_t>(g.nodes), 0);
        for (const auto& s : g.sinks) is_sink[static_cast<std::size_t>(s.node)] = 1;
        for (int v : order) {
            long long b = is_sink[static_cast<std::size_t>(v)] ? 0 : -1;
            for (const auto& e : g.edges[static_cast<std::size_t>(v)]) {
                if (!relevant(e.to)) continue;
                if (best[static_cast<std::size_t>(e.to)] >= 0)
                    b = std::max(b, best[static_cast<std::size_t>(e.to)] + 1);
            }
            best[static_cast<std::size_t>(v)] = b;
        }
        for (const auto& s : g.sources)
            if (relevant(s.node)) a.longest_path = std::max(a.longest_path, best[static_cast<std::size_t>(s.node)]);
    } else {
        a.longest_path = -1;
    }
    return a;
}

}  // namespace detail

inline int oracle_default_counter_bound(const RocAutomaton& aut, const Word& w) {
    return static_cast<int>(w.size()) + aut.n + 2;
}

inline long long oracle_default_step_bound(const RocAutomaton& aut, const Word& w, int cb) {
    return static_cast<long long>(w.size() + 1) * aut.n * cb;
}

/// Enumerates accepting runs (i, w, p) |- ... -| (j, eps, eps) within the
/// counter and step bounds. count is the number of distinct runs and
/// total_weight the weighted sum; both are exactly infinite when an
/// input-free cycle sits on some accepting run (certified by a pump
/// transcript). complete is true when no frontier was cut, or when the
/// report is exact anyway because infinity was certified.
inline RunReport oracle_count_runs(const RocAutomaton& aut, const Word& w, int counter_bound = -1,
                                   long long step_bound = -1, int max_witnesses = 3) {
    if (counter_bound < 0) counter_bound = oracle_default_counter_bound(aut, w);
    if (counter_bound < 1) throw std::invalid_argument("counter bound must be >= 1");
    if (step_bound < 0) step_bound = oracle_default_step_bound(aut, w, counter_bound);
    if (step_bound < 1) throw std::invalid_argument("step bound must be >= 1");

    detail::RunGraph g = detail::build_run_graph(aut, w, counter_bound, true);
    detail::RunAnalysis a = detail::analyze_run_graph(g);
    RunReport report;

    auto relevant = [&](int v) {
        return a.reachable[static_cast<std::size_t>(v)] && a.coreachable[static_cast<std::size_t>(v)];
    };

    const Domain d = aut.domain;
    if (a.relevant_cycle) {
        report.count = Weight::infinity();
        report.total_weight = d == Domain::Bool ? Weight::boolean(true) : Weight::infinity();
        report.complete = true;
    } else {
        // Exact DAG sums; a step bound shorter than the longest run cuts the
        // enumeration and the report says so.
        const bool cut_by_steps = a.longest_path > step_bound;
        std::vector<Weight> runs(static_cast<std::size_t>(g.nodes), Weight::zero(Domain::NatInf));
        std::vector<Weight> mass(static_cast<std::size_t>(g.nodes), Weight::zero(d));
        std::vector<int> order;
        for (int v = 0; v < g.nodes; ++v)
            if (relevant(v)) order.push_back(v);
        std::sort(order.begin(), order.end(), [&](int x, int y) { return a.comp[x] < a.comp[y]; });
        std::vector<std::size_t> sink_index(static_cast<std::size_t>(g.nodes), SIZE_MAX);
        for (std::size_t s = 0; s < g.sinks.size(); ++s)
            sink_index[static_cast<std::size_t>(g.sinks[s].node)] = s;
        for (int v : order) {
            Weight r = Weight::zero(Domain::NatInf);
            Weight m = Weight::zero(d);
            if (sink_index[static_cast<std::size_t>(v)] != SIZE_MAX) {
                r = Weight::one(Domain::NatInf);
                m = g.sinks[sink_index[static_cast<std::size_t>(v)]].weight;
            }
            for (const auto& e : g.edges[static_cast<std::size_t>(v)]) {
                if (!relevant(e.to)) continue;
                r += runs[static_cast<std::size_t>(e.to)];
                m += e.weight * mass[static_cast<std::size_t>(e.to)];
            }
            runs[static_cast<std::size_t>(v)] = r;
            mass[static_cast<std::size_t>(v)] = m;
        }
        Weight total_runs = Weight::zero(Domain::NatInf);
        Weight total_mass = Weight::zero(d);
        for (const auto& s : g.sources) {
            if (!relevant(s.node)) continue;
            total_runs += runs[static_cast<std::size_t>(s.node)];
            total_mass += s.weight * mass[static_cast<std::size_t>(s.node)];
        }
        report.count = total_runs;
        report.total_weight = total_mass;
        report.complete = !a.push_cut_reachable && !cut_by_steps;
        if (cut_by_steps) {
            // Recount, admitting only runs within the step bound.
            const int cap = static_cast<int>(std::min<long long>(step_bound, a.longest_path));
            std::vector<std::vector<Weight>> by_len(
                static_cast<std::size_t>(g.nodes),
                std::vector<Weight>(static_cast<std::size_t>(cap + 1), Weight::zero(Domain::NatInf)));
            for (int v : order) {
                auto& row = by_len[static_cast<std::size_t>(v)];
                if (sink_index[static_cast<std::size_t>(v)] != SIZE_MAX) row[0] = Weight::one(Domain::NatInf);
                for (const auto& e : g.edges[static_cast<std::size_t>(v)]) {
                    if (!relevant(e.to)) continue;
                    const auto& crow = by_len[static_cast<std::size_t>(e.to)];
                    for (int l = 0; l < cap; ++l) row[static_cast<std::size_t>(l + 1)] += crow[static_cast<std::size_t>(l)];
                }
            }
            Weight bounded = Weight::zero(Domain::NatInf);
            for (const auto& s : g.sources)
                if (relevant(s.node))
                    for (int l = 0; l <= cap; ++l)
                        bounded += by_len[static_cast<std::size_t>(s.node)][static_cast<std::size_t>(l)];
            report.count = bounded;
        }
    }

    // Witnesses: depth-first over edges in construction order, shortest runs
    // first via iterative deepening, capped to keep enumeration finite even
    // around cycles.
    if (max_witnesses > 0) {
        long long budget = 200000;
        std::vector<int> sink_letter(static_cast<std::size_t>(g.nodes), kEpsilon);
        std::vector<int> sink_state(static_cast<std::size_t>(g.nodes), -1);
        for (const auto& s : g.sinks) {
            sink_letter[static_cast<std::size_t>(s.node)] = s.letter;
            sink_state[static_cast<std::size_t>(s.node)] = s.state;
        }
        for (long long depth = 0; depth <= step_bound && budget > 0 &&
                                  static_cast<int>(report.witnesses.size()) < max_witnesses;
             ++depth) {
            for (const auto& s : g.sources) {
                if (static_cast<int>(report.witnesses.size()) >= max_witnesses) break;
                std::vector<Move> path;
                // Plain bounded DFS for paths of exactly `depth` moves.
                std::vector<std::pair<int, std::size_t>> stack{{s.node, 0}};
                while (!stack.empty() && budget > 0) {
                    --budget;
                    auto& [node, edge_at] = stack.back();
                    const long long at_depth = static_cast<long long>(stack.size()) - 1;
                    if (at_depth == depth) {
                        if (sink_state[static_cast<std::size_t>(node)] >= 0) {
                            RunWitness wit;
                            wit.start_state = s.state;
                            wit.initial_letter = s.letter;
                            wit.moves = path;
                            wit.end_state = sink_state[static_cast<std::size_t>(node)];
                            wit.final_letter = sink_letter[static_cast<std::size_t>(node)];
                            report.witnesses.push_back(std::move(wit));
                            if (static_cast<int>(report.witnesses.size()) >= max_witnesses) break;
                        }
                        stack.pop_back();
                        if (!path.empty()) path.pop_back();
                        continue;
                    }
                    if (edge_at >= g.edges[static_cast<std::size_t>(node)].size()) {
                        stack.pop_back();
                        if (!path.empty()) path.pop_back();
                        continue;
                    }
                    const auto& e = g.edges[static_cast<std::size_t>(node)][edge_at++];
                    path.push_back(e.move);
                    stack.push_back({e.to, 0});
                }
            }
        }
    }

    // Pump certificate: stem to a cycle node, the cycle itself, and a tail
    // to a sink; the cycle consumes no input by construction (it returns to
    // the same input position).
    if (a.relevant_cycle) {
        int anchor = -1;
        for (int v = 0; v < g.nodes && anchor < 0; ++v)
            if (relevant(v) && a.comp_cyclic[static_cast<std::size_t>(a.comp[v])]) anchor = v;
        struct FoundPath {
            int start;
            std::vector<Move> moves;
        };
        // Shortest path; with need_edge the goal may equal a start and the
        // path must still take at least one edge (cycle search).
        auto bfs_path = [&](const std::vector<int>& starts, int goal, bool within_comp,
                            bool need_edge) -> std::optional<FoundPath> {
            if (!need_edge)
                for (int st : starts)
                    if (st == goal) return FoundPath{st, {}};
            std::vector<int> prev(static_cast<std::size_t>(g.nodes), -2);
            std::vector<Move> via(static_cast<std::size_t>(g.nodes));
            std::vector<int> queue;
            for (int st : starts)
                if (prev[static_cast<std::size_t>(st)] == -2) {
                    prev[static_cast<std::size_t>(st)] = -1;
                    queue.push_back(st);
                }
            auto walk_back = [&](int from) {
                FoundPath out{from, {}};
                int at = from;
                while (prev[static_cast<std::size_t>(at)] >= 0) {
                    out.moves.push_back(via[static_cast<std::size_t>(at)]);
                    at = prev[static_cast<std::size_t>(at)];
                }
                out.start = at;
                std::reverse(out.moves.begin(), out.moves.end());
                return out;
            };
            for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                const int v = queue[qi];
                for (const auto& e : g.edges[static_cast<std::size_t>(v)]) {
                    if (!relevant(e.to)) continue;
                    if (within_comp && a.comp[e.to] != a.comp[anchor]) continue;
                    if (e.to == goal) {
                        FoundPath out = walk_back(v);
                        out.moves.push_back(e.move);
                        return out;
                    }
                    if (prev[static_cast<std::size_t>(e.to)] != -2) continue;
                    prev[static_cast<std::size_t>(e.to)] = v;
                    via[static_cast<std::size_t>(e.to)] = e.move;
                    queue.push_back(e.to);
                }
            }
            return std::nullopt;
        };
        std::vector<int> source_nodes;
        for (const auto& s : g.sources)
            if (relevant(s.node)) source_nodes.push_back(s.node);
        auto stem = bfs_path(source_nodes, anchor, false, false);
        auto cyc = bfs_path({anchor}, anchor, true, true);
        std::optional<FoundPath> tail;
        const detail::RunGraph::Endpoint* chosen_sink = nullptr;
        for (const auto& s : g.sinks) {
            if (!relevant(s.node)) continue;
            tail = bfs_path({anchor}, s.node, false, false);
            if (tail) {
                chosen_sink = &s;
                break;
            }
        }
        const detail::RunGraph::Endpoint* chosen_source = nullptr;
        if (stem)
            for (const auto& s : g.sources)
                if (s.node == stem->start && !chosen_source) chosen_source = &s;
        if (stem && cyc && tail && chosen_source && chosen_sink) {
            PumpTranscript pump;
            pump.base.start_state = chosen_source->state;
            pump.base.initial_letter = chosen_source->letter;
            pump.base.moves = stem->moves;
            pump.insert_at = pump.base.moves.size();
            pump.base.moves.insert(pump.base.moves.end(), tail->moves.begin(), tail->moves.end());
            pump.base.end_state = chosen_sink->state;
            pump.base.final_letter = chosen_sink->letter;
            pump.cycle = cyc->moves;
            report.pump = std::move(pump);
        }
    }
    return report;
}

/// Weighted coefficient of one star-block power: runs from (from_state,
/// counter = power) down to (to_state, counter 0) consuming exactly w.
/// Returns (run count, weighted sum).
inline std::pair<Weight, Weight> oracle_block_weight(const RocAutomaton& aut, int from_state,
                                                     int start_counter, int to_state, const Word& w,
                                                     int counter_bound = -1) {
    if (from_state < 0 || from_state >= aut.n || to_state < 0 || to_state >= aut.n)
        throw std::out_of_range("state out of range");
    if (start_counter < 0) throw std::invalid_argument("start counter must be >= 0");
    if (counter_bound < 0) counter_bound = oracle_default_counter_bound(aut, w) + start_counter;
    if (start_counter == 0) {
        const bool hit = from_state == to_state && w.empty();
        return {Weight::nat(hit ? 1 : 0),
                hit ? Weight::one(aut.domain) : Weight::zero(aut.domain)};
    }
    detail::RunGraph g =
        detail::build_run_graph(aut, w, counter_bound, false, from_state, start_counter, to_state);
    detail::RunAnalysis a = detail::analyze_run_graph(g);
    auto relevant = [&](int v) {
        return a.reachable[static_cast<std::size_t>(v)] && a.coreachable[static_cast<std::size_t>(v)];
    };
    if (a.relevant_cycle)
        return {Weight::infinity(),
                aut.domain == Domain::Bool ? Weight::boolean(true) : Weight::infinity()};
    std::vector<Weight> runs(static_cast<std::size_t>(g.nodes), Weight::zero(Domain::NatInf));
    std::vector<Weight> mass(static_cast<std::size_t>(g.nodes), Weight::zero(aut.domain));
    std::vector<int> order;
    for (int v = 0; v < g.nodes; ++v)
        if (relevant(v)) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a.comp[x] < a.comp[y]; });
    const int sink = g.sinks.front().node;
    for (int v : order) {
        Weight r = v == sink ? Weight::one(Domain::NatInf) : Weight::zero(Domain::NatInf);
        Weight m = v == sink ? Weight::one(aut.domain) : Weight::zero(aut.domain);
        for (const auto& e : g.edges[static_cast<std::size_t>(v)]) {
            if (!relevant(e.to)) continue;
            r += runs[static_cast<std::size_t>(e.to)];
            m += e.weight * mass[static_cast<std::size_t>(e.to)];
        }
        runs[static_cast<std::size_t>(v)] = r;
        mass[static_cast<std::size_t>(v)] = m;
    }
    const int src = g.sources.front().node;
    if (!relevant(src)) return {Weight::nat(0), Weight::zero(aut.domain)};
    return {runs[static_cast<std::size_t>(src)], mass[static_cast<std::size_t>(src)]};
}

struct OmegaOracleResult {
    bool accepted = false;
    bool complete = false;
};

/// Plain saturating lasso search from one configuration: counters stick at
/// the bound (pushes there are absorbed), and acceptance is a reachable
/// cycle that consumes a letter and passes a repeated state. Sound because
/// saturated counters only under-approximate the real ones; complete once
/// the bound covers the pumping argument.
inline OmegaOracleResult oracle_omega_member_from(const RocAutomaton& aut, int state, int counter,
                                                  const UPWord& w, int counter_bound = -1) {
    detail::require_omega_query(aut, state, counter, w);
    const long long needed = counter + static_cast<long long>(w.prefix.size()) +
                             static_cast<long long>(aut.n) * w.period.size() * (aut.n + 2);
    if (counter_bound < 0) counter_bound = static_cast<int>(needed);
    if (counter_bound < counter) throw std::invalid_argument("counter bound below start counter");
    const bool complete = counter_bound >= needed;
    if (aut.k == 0) return {false, complete};

    const int P = up_positions(w);
    const int cb = counter_bound;
    const int nodes = aut.n * P * cb;
    auto node_id = [&](int q, int pos, int c) { return (q * P + pos) * cb + (c - 1); };
    struct Edge {
        int to;
        bool letter;
    };
    std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(nodes));
    for (int q = 0; q < aut.n; ++q)
        for (int pos = 0; pos < P; ++pos)
            for (int c = 1; c <= cb; ++c) {
                auto& out = edges[static_cast<std::size_t>(node_id(q, pos, c))];
                const int word_letter = up_letter_canonical(w, pos);
                struct BlockRef {
                    const std::vector<std::vector<LetterPolynomial>>* block;
                    int delta;
                };
                const BlockRef blocks[3] = {{&aut.push_block, +1}, {&aut.stay_block, 0}, {&aut.pop_block, -1}};
                for (const auto& ref : blocks)
                    for (int r = 0; r < aut.n; ++r) {
                        const LetterPolynomial& poly =
                            (*ref.block)[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)];
                        if (poly.is_zero()) continue;
                        int c2 = c + ref.delta;
                        if (c2 > cb) c2 = cb;  // saturate
                        if (c2 < 1) continue;
                        if (!poly.coef(kEpsilon).is_zero())
                            out.push_back({node_id(r, pos, c2), false});
                        if (!poly.coef(word_letter).is_zero())
                            out.push_back({node_id(r, up_advance(w, pos), c2), true});
                    }
            }

    std::vector<char> reach(static_cast<std::size_t>(nodes), 0);
    std::vector<int> queue{node_id(state, 0, counter)};
    reach[static_cast<std::size_t>(queue[0])] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
        for (const auto& e : edges[static_cast<std::size_t>(queue[qi])])
            if (!reach[static_cast<std::size_t>(e.to)]) {
                reach[static_cast<std::size_t>(e.to)] = 1;
                queue.push_back(e.to);
            }
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
    for (int v = 0; v < nodes; ++v)
        if (reach[static_cast<std::size_t>(v)])
            for (const auto& e : edges[static_cast<std::size_t>(v)]) adj[static_cast<std::size_t>(v)].push_back(e.to);
    int comp_count = 0;
    std::vector<int> comp = detail::tarjan_scc(adj, &comp_count);
    std::vector<char> letter_in(static_cast<std::size_t>(comp_count), 0);
    std::vector<char> buchi_in(static_cast<std::size_t>(comp_count), 0);
    for (int v = 0; v < nodes; ++v) {
        if (!reach[static_cast<std::size_t>(v)]) continue;
        if (v / (P * cb) < aut.k) buchi_in[static_cast<std::size_t>(comp[v])] = 1;
        for (const auto& e : edges[static_cast<std::size_t>(v)])
            if (comp[v] == comp[e.to] && e.letter) letter_in[static_cast<std::size_t>(comp[v])] = 1;
    }
    for (int cc = 0; cc < comp_count; ++cc)
        if (letter_in[static_cast<std::size_t>(cc)] && buchi_in[static_cast<std::size_t>(cc)])
            return {true, complete};
    return {false, complete};
}

/// Behavior-level omega oracle: initial entries consume their letter first.
inline OmegaOracleResult oracle_omega_member(const RocAutomaton& aut, const UPWord& w,
                                             int counter_bound = -1) {
    if (aut.domain != Domain::Bool)
        throw std::invalid_argument("omega membership requires the bool domain");
    require_valid(w);
    bool complete = true;
    for (int m = 0; m < aut.n; ++m)
        for (const auto& [a, wi] : aut.initial[static_cast<std::size_t>(m)].terms) {
            OmegaOracleResult r;
            if (a == kEpsilon) {
                r = oracle_omega_member_from(aut, m, 1, w, counter_bound);
            } else if (up_letter(w, 0) == a) {
                r = oracle_omega_member_from(aut, m, 1, up_tail(w, 1), counter_bound);
            } else {
                continue;
            }
            if (r.accepted) return {true, r.complete};
            complete = complete && r.complete;
        }
    return {false, complete};
}

}  // namespace roca
