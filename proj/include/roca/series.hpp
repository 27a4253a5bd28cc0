// series.hpp -- truncated formal power series over Sigma* and the finite
// part of the automaton behavior: the star block (M*)_{p,eps} and the
// series I (M*)_{p,eps} P, both cut at a length bound.

#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "roca/automaton.hpp"
#include "roca/grammar.hpp"
#include "roca/weight.hpp"

namespace roca {

/// A power series truncated at length max_len; absent words are zero.
struct TruncatedSeries {
    Domain domain = Domain::Bool;
    int max_len = 0;
    std::map<Word, Weight> coefficients;

    Weight coef(const Word& w) const {
        auto it = coefficients.find(w);
        return it == coefficients.end() ? Weight::zero(domain) : it->second;
    }
};

/// Restriction to a smaller length bound.
inline TruncatedSeries restrict_series(const TruncatedSeries& s, int max_len) {
    TruncatedSeries out{s.domain, max_len, {}};
    for (const auto& [w, c] : s.coefficients)
        if (static_cast<int>(w.size()) <= max_len) out.coefficients.emplace(w, c);
    return out;
}

namespace detail {

/// Shortlex enumeration of all words of length <= max_len over a fixed
/// alphabet size, with precomputed split and letter-shift tables. Dense
/// series are plain weight vectors indexed by word id.
struct WordTable {
    int sigma = 0, max_len = 0, count = 0;
    std::vector<int> offset;  // offset[l] = id of the first word of length l
    std::vector<int> length;  // id -> length
    std::vector<std::vector<std::pair<int, int>>> splits;  // id -> (prefix, suffix) ids
    std::vector<std::vector<int>> prepend;  // [letter][id] -> id of letter·w, -1 if too long
    std::vector<std::vector<int>> append;   // [letter][id] -> id of w·letter

    WordTable(int alphabet_size, int bound) : sigma(alphabet_size), max_len(bound) {
        offset.assign(max_len + 2, 0);
        long long total = 0, pow = 1;
        for (int l = 0; l <= max_len; ++l) {
            offset[l] = static_cast<int>(total);
            total += pow;
            if (total > 4'000'000) throw std::length_error("series truncation too large");
            pow *= sigma;
            if (sigma == 0) pow = 0;
        }
        offset[max_len + 1] = static_cast<int>(total);
        count = static_cast<int>(total);
        length.assign(count, 0);
        for (int l = 0; l <= max_len; ++l)
            for (int id = offset[l]; id < offset[l + 1]; ++id) length[id] = l;

        std::vector<long long> pows(max_len + 1, 1);
        for (int l = 1; l <= max_len; ++l) pows[l] = pows[l - 1] * sigma;

        splits.resize(count);
        for (int id = 0; id < count; ++id) {
            const int l = length[id];
            const long long val = id - offset[l];
            splits[id].reserve(l + 1);
            for (int cut = 0; cut <= l; ++cut) {
                const long long suffix_val = val % pows[l - cut];
                const long long prefix_val = val / pows[l - cut];
                splits[id].push_back({offset[cut] + static_cast<int>(prefix_val),
                                      offset[l - cut] + static_cast<int>(suffix_val)});
            }
        }
        prepend.assign(sigma, std::vector<int>(count, -1));
        append.assign(sigma, std::vector<int>(count, -1));
        for (int a = 0; a < sigma; ++a)
            for (int id = 0; id < count; ++id) {
                const int l = length[id];
                if (l + 1 > max_len) continue;
                const long long val = id - offset[l];
                prepend[a][id] = offset[l + 1] + static_cast<int>(a * pows[l] + val);
                append[a][id] = offset[l + 1] + static_cast<int>(val * sigma + a);
            }
    }

    int id_of(const Word& w) const {
        long long val = 0;
        for (int letter : w) val = val * sigma + letter;
        return offset[w.size()] + static_cast<int>(val);
    }

    Word word_of(int id) const {
        const int l = length[id];
        Word w(static_cast<std::size_t>(l));
        long long val = id - offset[l];
        for (int t = l - 1; t >= 0; --t) {
            w[static_cast<std::size_t>(t)] = static_cast<int>(val % sigma);
            val /= sigma;
        }
        return w;
    }
};

using DenseSeries = std::vector<Weight>;
using SeriesMatrix = std::vector<std::vector<DenseSeries>>;

inline DenseSeries dense_zero(const WordTable& t, Domain d) {
    return DenseSeries(static_cast<std::size_t>(t.count), Weight::zero(d));
}

inline void dense_accumulate(DenseSeries& into, const DenseSeries& from) {
    for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
}

/// Truncated convolution: out[w] = sum over w = w1 w2 of x[w1] * y[w2].
inline void dense_conv_accumulate(DenseSeries& out, const DenseSeries& x, const DenseSeries& y,
                                  const WordTable& t) {
    for (int id = 0; id < t.count; ++id)
        for (const auto& [p, s] : t.splits[id]) {
            if (x[static_cast<std::size_t>(p)].is_zero()) continue;
            if (y[static_cast<std::size_t>(s)].is_zero()) continue;
            out[static_cast<std::size_t>(id)] +=
                x[static_cast<std::size_t>(p)] * y[static_cast<std::size_t>(s)];
        }
}

/// out += poly ⋄ x where the polynomial's letters are prepended.
inline void dense_poly_conv_accumulate(DenseSeries& out, const LetterPolynomial& poly,
                                       const DenseSeries& x, const WordTable& t) {
    for (const auto& [letter, w] : poly.terms) {
        if (letter == kEpsilon) {
            for (int id = 0; id < t.count; ++id)
                if (!x[static_cast<std::size_t>(id)].is_zero())
                    out[static_cast<std::size_t>(id)] += w * x[static_cast<std::size_t>(id)];
        } else {
            for (int id = 0; id < t.count; ++id) {
                if (x[static_cast<std::size_t>(id)].is_zero()) continue;
                const int target = t.prepend[static_cast<std::size_t>(letter)][id];
                if (target >= 0)
                    out[static_cast<std::size_t>(target)] += w * x[static_cast<std::size_t>(id)];
            }
        }
    }
}

/// out += x ⋄ poly where the polynomial's letters are appended.
inline void dense_conv_poly_accumulate(DenseSeries& out, const DenseSeries& x,
                                       const LetterPolynomial& poly, const WordTable& t) {
    for (const auto& [letter, w] : poly.terms) {
        if (letter == kEpsilon) {
            for (int id = 0; id < t.count; ++id)
                if (!x[static_cast<std::size_t>(id)].is_zero())
                    out[static_cast<std::size_t>(id)] += x[static_cast<std::size_t>(id)] * w;
        } else {
            for (int id = 0; id < t.count; ++id) {
                if (x[static_cast<std::size_t>(id)].is_zero()) continue;
                const int target = t.append[static_cast<std::size_t>(letter)][id];
                if (target >= 0)
                    out[static_cast<std::size_t>(target)] += x[static_cast<std::size_t>(id)] * w;
            }
        }
    }
}

inline SeriesMatrix series_matrix_zero(const WordTable& t, Domain d, int n) {
    return SeriesMatrix(static_cast<std::size_t>(n),
                        std::vector<DenseSeries>(static_cast<std::size_t>(n), dense_zero(t, d)));
}

inline SeriesMatrix series_matrix_conv(const SeriesMatrix& a, const SeriesMatrix& b,
                                       const WordTable& t, Domain d) {
    const int n = static_cast<int>(a.size());
    SeriesMatrix r = series_matrix_zero(t, d, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                dense_conv_accumulate(r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                                      b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)],
                                      t);
    return r;
}

/// r = P ⋄ S where P is a matrix of letter polynomials.
inline SeriesMatrix poly_matrix_conv(const std::vector<std::vector<LetterPolynomial>>& poly,
                                     const SeriesMatrix& s, const WordTable& t, Domain d) {
    const int n = static_cast<int>(poly.size());
    SeriesMatrix r = series_matrix_zero(t, d, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (poly[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].is_zero()) continue;
            for (int j = 0; j < n; ++j)
                dense_poly_conv_accumulate(
                    r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                    poly[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                    s[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)], t);
        }
    return r;
}

inline SeriesMatrix poly_matrix_embed(const std::vector<std::vector<LetterPolynomial>>& poly,
                                      const WordTable& t, Domain d) {
    const int n = static_cast<int>(poly.size());
    SeriesMatrix r = series_matrix_zero(t, d, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& [letter, w] : poly[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].terms) {
                if (letter == kEpsilon) {
                    r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][0] += w;
                } else if (t.max_len >= 1) {
                    const int id = t.offset[1] + letter;
                    r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(id)] += w;
                }
            }
    return r;
}

/// The truncated star block. Bool: Kleene iteration of the truncated
/// system x = Axx + Cx + B (finite lattice, guaranteed to stop). Natinf:
/// per-word parse-forest weights from the triple variables, exact
/// infinity included.
inline SeriesMatrix dense_star_block(const RocAutomaton& aut, const WordTable& t) {
    const int n = aut.n;
    if (aut.domain == Domain::Bool) {
        SeriesMatrix x = series_matrix_zero(t, aut.domain, n);
        const SeriesMatrix base = poly_matrix_embed(aut.pop_block, t, aut.domain);
        const long long cap = static_cast<long long>(n) * n * t.count + 2;
        for (long long round = 0;; ++round) {
            if (round > cap) throw std::logic_error("star block iteration failed to converge");
            SeriesMatrix xx = series_matrix_conv(x, x, t, aut.domain);
            SeriesMatrix next = poly_matrix_conv(aut.push_block, xx, t, aut.domain);
            SeriesMatrix stay = poly_matrix_conv(aut.stay_block, x, t, aut.domain);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    dense_accumulate(next[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                     stay[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
                    dense_accumulate(next[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                     base[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
                }
            if (next == x) return x;
            x = std::move(next);
        }
    }
    SeriesMatrix x = series_matrix_zero(t, aut.domain, n);
    const BlockRules rules = rules_from_automaton(aut, false);
    for (int id = 0; id < t.count; ++id) {
        const Word w = t.word_of(id);
        AbsoluteChart chart = build_absolute_chart(rules, w);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (chart.derives(i, j, 0, chart.len))
                    x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                     [static_cast<std::size_t>(id)] = chart_weight(chart, i, j, 0, chart.len);
    }
    return x;
}

inline DenseSeries dense_behavior(const RocAutomaton& aut, const WordTable& t) {
    const SeriesMatrix x = dense_star_block(aut, t);
    DenseSeries out = dense_zero(t, aut.domain);
    for (int j = 0; j < aut.n; ++j) {
        DenseSeries col = dense_zero(t, aut.domain);
        for (int m = 0; m < aut.n; ++m)
            dense_poly_conv_accumulate(col, aut.initial[static_cast<std::size_t>(m)],
                                       x[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)], t);
        dense_conv_poly_accumulate(out, col, aut.final_states[static_cast<std::size_t>(j)], t);
    }
    return out;
}

inline TruncatedSeries to_truncated(const DenseSeries& s, const WordTable& t, Domain d) {
    TruncatedSeries out{d, t.max_len, {}};
    for (int id = 0; id < t.count; ++id)
        if (!s[static_cast<std::size_t>(id)].is_zero())
            out.coefficients.emplace(t.word_of(id), s[static_cast<std::size_t>(id)]);
    return out;
}

}  // namespace detail

/// Entry (i,j) holds the coefficients of ((M*)_{p,eps})_{ij} for every
/// word of length <= max_len.
inline std::vector<std::vector<TruncatedSeries>> finite_star_block(const RocAutomaton& aut,
                                                                   int max_len) {
    if (max_len < 0) throw std::invalid_argument("length bound must be >= 0");
    detail::WordTable t(aut.sigma(), max_len);
    detail::SeriesMatrix x = detail::dense_star_block(aut, t);
    std::vector<std::vector<TruncatedSeries>> out(
        static_cast<std::size_t>(aut.n),
        std::vector<TruncatedSeries>(static_cast<std::size_t>(aut.n)));
    for (int i = 0; i < aut.n; ++i)
        for (int j = 0; j < aut.n; ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = detail::to_truncated(
                x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], t, aut.domain);
    return out;
}

/// The truncation of I (M*)_{p,eps} P to length <= max_len; letters on
/// initial and final entries take part in the convolution.
inline TruncatedSeries finite_behavior(const RocAutomaton& aut, int max_len) {
    if (max_len < 0) throw std::invalid_argument("length bound must be >= 0");
    detail::WordTable t(aut.sigma(), max_len);
    return detail::to_truncated(detail::dense_behavior(aut, t), t, aut.domain);
}

/// Coefficient of one word in the star block entry (i,j), computed on the
/// word's own parse chart (works for words far beyond any series bound).
inline Weight block_weight_of_word(const RocAutomaton& aut, int i, int j, const Word& w) {
    if (i < 0 || i >= aut.n || j < 0 || j >= aut.n) throw std::out_of_range("state out of range");
    const detail::BlockRules rules = detail::rules_from_automaton(aut, false);
    detail::AbsoluteChart chart = detail::build_absolute_chart(rules, w);
    if (aut.domain == Domain::Bool)
        return Weight::boolean(chart.derives(i, j, 0, chart.len));
    if (!chart.derives(i, j, 0, chart.len)) return Weight::zero(Domain::NatInf);
    return detail::chart_weight(chart, i, j, 0, chart.len);
}

/// The coefficient of w in the finite part of the behavior.
inline Weight weight_of_word(const RocAutomaton& aut, const Word& w) {
    for (int letter : w)
        if (letter < 0 || letter >= aut.sigma())
            throw std::invalid_argument("letter not in alphabet");
    // Short words go through the series engine; long words through per-word
    // charts (the two agree, and tests pin that down).
    long long words = 0, pow = 1;
    for (std::size_t l = 0; l <= w.size() && words <= 65536; ++l) {
        words += pow;
        pow *= aut.sigma() == 0 ? 0 : aut.sigma();
    }
    if (words <= 65536) {
        detail::WordTable t(aut.sigma(), static_cast<int>(w.size()));
        return detail::dense_behavior(aut, t)[static_cast<std::size_t>(t.id_of(w))];
    }
    const detail::BlockRules rules = detail::rules_from_automaton(aut, false);
    detail::AbsoluteChart chart = detail::build_absolute_chart(rules, w);
    Weight total = Weight::zero(aut.domain);
    const int len = chart.len;
    for (int m = 0; m < aut.n; ++m)
        for (const auto& [a, wi] : aut.initial[static_cast<std::size_t>(m)].terms) {
            int l = 0;
            if (a != kEpsilon) {
                if (len == 0 || w[0] != a) continue;
                l = 1;
            }
            for (int j = 0; j < aut.n; ++j)
                for (const auto& [b, wp] : aut.final_states[static_cast<std::size_t>(j)].terms) {
                    int r = len;
                    if (b != kEpsilon) {
                        if (r <= l || w[static_cast<std::size_t>(r - 1)] != b) continue;
                        --r;
                    }
                    if (!chart.derives(m, j, l, r)) continue;
                    Weight core = aut.domain == Domain::Bool
                                      ? Weight::boolean(true)
                                      : detail::chart_weight(chart, m, j, l, r);
                    total += wi * core * wp;
                }
        }
    return total;
}

}  // namespace roca
