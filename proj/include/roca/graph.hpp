// graph.hpp -- small shared graph utilities (iterative Tarjan SCC).

#pragma once

#include <cstdint>
#include <vector>

namespace roca::detail {

/// Strongly connected components of an adjacency list, iterative Tarjan.
/// Returns a component id per node; ids are in reverse topological order
/// (an edge u->v across components has comp[u] > comp[v]).
inline std::vector<int> tarjan_scc(const std::vector<std::vector<int>>& adj, int* component_count = nullptr) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    int next_index = 0, next_comp = 0;

    struct Frame {
        int node;
        std::size_t edge;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < adj[f.node].size()) {
                int to = adj[f.node][f.edge++];
                if (index[to] == -1) {
                    index[to] = low[to] = next_index++;
                    stack.push_back(to);
                    on_stack[to] = 1;
                    call.push_back({to, 0});
                } else if (on_stack[to]) {
                    if (index[to] < low[f.node]) low[f.node] = index[to];
                }
            } else {
                int v = f.node;
                call.pop_back();
                if (!call.empty() && low[v] < low[call.back().node]) low[call.back().node] = low[v];
                if (low[v] == index[v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = next_comp;
                        if (w == v) break;
                    }
                    ++next_comp;
                }
            }
        }
    }
    if (component_count) *component_count = next_comp;
    return comp;
}

/// Variable-width bitset used for derivability masks indexed by length.
struct Bits {
    std::vector<std::uint64_t> w;
    int bits = 0;

    Bits() = default;
    explicit Bits(int nbits) : w((nbits + 63) / 64, 0), bits(nbits) {}

    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { w[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    bool any() const {
        for (auto x : w)
            if (x) return true;
        return false;
    }
    bool operator==(const Bits& o) const { return w == o.w; }

    /// this |= (other << shift), truncated to this bitset's capacity.
    void or_shifted(const Bits& other, int shift) {
        const int word_shift = shift >> 6;
        const int bit_shift = shift & 63;
        const int n = static_cast<int>(w.size());
        for (int i = static_cast<int>(other.w.size()) - 1; i >= 0; --i) {
            std::uint64_t x = other.w[i];
            if (!x) continue;
            int lo = i + word_shift;
            if (lo < n) w[lo] |= x << bit_shift;
            if (bit_shift && lo + 1 < n) w[lo + 1] |= x >> (64 - bit_shift);
        }
        trim();
    }

    void trim() {
        if (w.empty()) return;
        const int rem = bits & 63;
        if (rem) w.back() &= (std::uint64_t{1} << rem) - 1;
    }
};

}  // namespace roca::detail
