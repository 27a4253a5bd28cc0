// validate.hpp -- the identity scoreboard: each numbered identity of the
// construction is checked executably on one automaton, engine against
// oracle, at desk-scale bounds.

#pragma once

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "roca/automaton.hpp"
#include "roca/corpus.hpp"
#include "roca/grammar.hpp"
#include "roca/omega.hpp"
#include "roca/oracle.hpp"
#include "roca/series.hpp"
#include "roca/upword.hpp"

namespace roca {

struct CheckOptions {
    int max_len = 8;           // finite-word bound
    int segment_bound = 12;    // omega-derivation segment bound
    int omega_up_bound = 4;    // |u|, |v| bound for omega agreement
    int counter_up_bound = 3;  // |u|, |v| bound for the counter unfoldings
    std::uint64_t seed = 1;    // drives sampling when enumeration overflows the cap
    long long up_sample_cap = 4096;
    int oracle_counter_bound = -1;
    long long oracle_step_bound = -1;
};

struct CheckResult {
    std::string id;
    std::string name;
    bool passed = true;
    std::string detail;  // first mismatch, empty when passed
};

namespace detail {

template <typename Fn>
inline void enumerate_words(int sigma, int max_len, Fn&& fn) {
    Word w;
    fn(w);
    if (sigma == 0) return;
    for (int len = 1; len <= max_len; ++len) {
        w.assign(static_cast<std::size_t>(len), 0);
        while (true) {
            fn(w);
            int at = len - 1;
            while (at >= 0 && w[static_cast<std::size_t>(at)] == sigma - 1) {
                w[static_cast<std::size_t>(at)] = 0;
                --at;
            }
            if (at < 0) break;
            ++w[static_cast<std::size_t>(at)];
        }
    }
}

/// All UP words with |u| <= bound, 1 <= |v| <= bound, exhaustively up to
/// the cap and seeded-random beyond it.
template <typename Fn>
inline void enumerate_upwords(int sigma, int bound, long long cap, std::uint64_t seed, Fn&& fn) {
    if (sigma == 0) return;
    long long total = 0, upow = 1;
    for (int ul = 0; ul <= bound; ++ul) {
        long long vpow = sigma;
        for (int vl = 1; vl <= bound; ++vl) {
            total += upow * vpow;
            vpow *= sigma;
        }
        upow *= sigma;
    }
    if (total <= cap) {
        std::vector<Word> prefixes;
        enumerate_words(sigma, bound, [&](const Word& u) { prefixes.push_back(u); });
        for (const Word& u : prefixes)
            for (const Word& v : prefixes) {
                if (v.empty()) continue;
                fn(UPWord{u, v});
            }
        return;
    }
    std::mt19937_64 rng(seed);
    for (long long t = 0; t < cap; ++t) {
        UPWord w;
        const int ul = roll(rng, bound + 1);
        const int vl = 1 + roll(rng, bound);
        for (int s = 0; s < ul; ++s) w.prefix.push_back(roll(rng, sigma));
        for (int s = 0; s < vl; ++s) w.period.push_back(roll(rng, sigma));
        fn(w);
    }
}

inline SeriesMatrix oracle_power_matrix(const RocAutomaton& aut, const WordTable& t, int power) {
    SeriesMatrix out = series_matrix_zero(t, aut.domain, aut.n);
    if (power == 0) {
        for (int q = 0; q < aut.n; ++q) out[q][q][0] = Weight::one(aut.domain);
        return out;
    }
    for (int id = 0; id < t.count; ++id) {
        const Word w = t.word_of(id);
        for (int q = 0; q < aut.n; ++q)
            for (int r = 0; r < aut.n; ++r)
                out[q][r][static_cast<std::size_t>(id)] =
                    oracle_block_weight(aut, q, power, r, w).second;
    }
    return out;
}

inline bool series_matrix_equal(const SeriesMatrix& a, const SeriesMatrix& b, const WordTable& t,
                                std::string* where) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            for (int id = 0; id < t.count; ++id)
                if (a[i][j][static_cast<std::size_t>(id)] != b[i][j][static_cast<std::size_t>(id)]) {
                    if (where)
                        *where = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                 ") word #" + std::to_string(id);
                    return false;
                }
    return true;
}

}  // namespace detail

/// Checks 2.1 and 2.2: the oracle's counter-i block equals both
/// X ⋄ (counter i-1 block) and the i-fold convolution power of X.
inline std::pair<CheckResult, CheckResult> check_power_identities(const RocAutomaton& aut,
                                                                  const CheckOptions& opts) {
    CheckResult step{"2.1", "star-block power identity", true, ""};
    CheckResult closed{"2.2", "star-block closed powers", true, ""};
    detail::WordTable t(aut.sigma(), opts.max_len);
    detail::SeriesMatrix x = detail::dense_star_block(aut, t);
    std::vector<detail::SeriesMatrix> oracle_blocks;
    for (int power = 0; power <= 4; ++power)
        oracle_blocks.push_back(detail::oracle_power_matrix(aut, t, power));
    for (int power = 0; power <= 3 && step.passed; ++power) {
        detail::SeriesMatrix rhs =
            detail::series_matrix_conv(x, oracle_blocks[static_cast<std::size_t>(power)], t, aut.domain);
        std::string where;
        if (!detail::series_matrix_equal(oracle_blocks[static_cast<std::size_t>(power + 1)], rhs, t,
                                         &where)) {
            step.passed = false;
            step.detail = "power " + std::to_string(power + 1) + ", " + where;
        }
    }
    detail::SeriesMatrix xp = x;
    for (int power = 1; power <= 3 && closed.passed; ++power) {
        std::string where;
        if (!detail::series_matrix_equal(oracle_blocks[static_cast<std::size_t>(power)], xp, t, &where)) {
            closed.passed = false;
            closed.detail = "power " + std::to_string(power) + ", " + where;
        }
        if (power < 3) xp = detail::series_matrix_conv(xp, x, t, aut.domain);
    }
    return {step, closed};
}

/// Check 3.1: X solves x = Axx + Cx + B coefficient-wise.
inline CheckResult check_fixpoint_residual(const RocAutomaton& aut, const CheckOptions& opts) {
    CheckResult res{"3.1", "star-block fixpoint", true, ""};
    detail::WordTable t(aut.sigma(), opts.max_len);
    detail::SeriesMatrix x = detail::dense_star_block(aut, t);
    detail::SeriesMatrix xx = detail::series_matrix_conv(x, x, t, aut.domain);
    detail::SeriesMatrix rhs = detail::poly_matrix_conv(aut.push_block, xx, t, aut.domain);
    detail::SeriesMatrix stay = detail::poly_matrix_conv(aut.stay_block, x, t, aut.domain);
    detail::SeriesMatrix base = detail::poly_matrix_embed(aut.pop_block, t, aut.domain);
    for (int i = 0; i < aut.n; ++i)
        for (int j = 0; j < aut.n; ++j) {
            detail::dense_accumulate(rhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                     stay[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            detail::dense_accumulate(rhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                     base[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
    std::string where;
    if (!detail::series_matrix_equal(x, rhs, t, &where)) {
        res.passed = false;
        res.detail = where;
    }
    return res;
}

/// Checks 2.6 and 2.7: the start-counter-2 decomposition and the one-step
/// unfolding, at membership level on the bool projection.
inline std::pair<CheckResult, CheckResult> check_counter_unfoldings(const RocAutomaton& aut,
                                                                    const CheckOptions& opts) {
    CheckResult decomp{"2.6", "counter-2 decomposition", true, ""};
    CheckResult unfold{"2.7", "omega one-step unfolding", true, ""};
    const RocAutomaton proj = bool_projection(aut);
    const detail::BlockRules rules = detail::rules_from_automaton(proj, false);
    const int n = proj.n;

    detail::enumerate_upwords(
        proj.sigma(), opts.counter_up_bound, opts.up_sample_cap, opts.seed, [&](const UPWord& w) {
            if (!decomp.passed && !unfold.passed) return;
            const int cap = static_cast<int>(w.prefix.size()) +
                            n * static_cast<int>(w.period.size()) * (n + 2);
            detail::CanonicalChart chart =
                detail::build_canonical_chart(rules, w, cap, proj.k, false);
            std::map<std::pair<int, long long>, bool> memo;
            auto omega_tail = [&](int state, long long consumed) {
                long long canon = consumed;
                const long long u = static_cast<long long>(w.prefix.size());
                const long long v = static_cast<long long>(w.period.size());
                if (canon > u) canon = u + (canon - u) % v;
                auto key = std::make_pair(state, canon);
                auto it = memo.find(key);
                if (it != memo.end()) return it->second;
                const bool r = omega_member_from(proj, state, 1, up_tail(w, canon));
                memo.emplace(key, r);
                return r;
            };

            for (int i = 0; i < n; ++i) {
                if (decomp.passed) {
                    const bool lhs = omega_member_from(proj, i, 2, w);
                    bool rhs = omega_tail(i, 0);
                    for (int j = 0; j < n && !rhs; ++j) {
                        const detail::Bits& bits = chart.mask(i * n + j, 0);
                        for (int len = 0; len <= cap && !rhs; ++len)
                            if (bits.test(len)) rhs = omega_tail(j, len);
                    }
                    if (lhs != rhs) {
                        decomp.passed = false;
                        decomp.detail = "state " + std::to_string(i + 1) + " at " +
                                        std::to_string(w.prefix.size()) + "+" +
                                        std::to_string(w.period.size()) + " letters, lhs=" +
                                        (lhs ? "accept" : "reject");
                    }
                }
                if (unfold.passed) {
                    const bool lhs = omega_member_from(proj, i, 1, w);
                    bool rhs = false;
                    const int first = up_letter_canonical(w, 0);
                    for (int m = 0; m < n && !rhs; ++m) {
                        const auto& poly = proj.push_block[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
                        if (!poly.coef(kEpsilon).is_zero()) rhs = omega_tail(m, 0);
                        if (!rhs && !poly.coef(first).is_zero()) rhs = omega_tail(m, 1);
                    }
                    for (int m1 = 0; m1 < n && !rhs; ++m1) {
                        const auto& poly = proj.push_block[static_cast<std::size_t>(i)][static_cast<std::size_t>(m1)];
                        for (int consumed = 0; consumed <= 1 && !rhs; ++consumed) {
                            if (consumed == 0 ? poly.coef(kEpsilon).is_zero()
                                              : poly.coef(first).is_zero())
                                continue;
                            const int body = consumed == 0 ? 0 : up_advance(w, 0);
                            for (int j = 0; j < n && !rhs; ++j) {
                                const detail::Bits& bits = chart.mask(m1 * n + j, body);
                                for (int len = 0; len + consumed <= cap && !rhs; ++len)
                                    if (bits.test(len)) rhs = omega_tail(j, consumed + len);
                            }
                        }
                    }
                    for (int m = 0; m < n && !rhs; ++m) {
                        const auto& poly = proj.stay_block[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
                        if (!poly.coef(kEpsilon).is_zero()) rhs = omega_tail(m, 0);
                        if (!rhs && !poly.coef(first).is_zero()) rhs = omega_tail(m, 1);
                    }
                    if (lhs != rhs) {
                        unfold.passed = false;
                        unfold.detail = "state " + std::to_string(i + 1) + " at " +
                                        std::to_string(w.prefix.size()) + "+" +
                                        std::to_string(w.period.size()) + " letters, lhs=" +
                                        (lhs ? "accept" : "reject");
                    }
                }
            }
        });
    return {decomp, unfold};
}

/// Check 4.1: the grammar's finite language equals the nonzero
/// coefficients of the finite behavior.
inline CheckResult check_finite_language_agreement(const RocAutomaton& aut,
                                                   const CheckOptions& opts) {
    CheckResult res{"4.1", "finite language agreement", true, ""};
    MixedGrammar g = triple_pair_construct(aut);
    const detail::BlockRules rules = detail::rules_from_grammar(g);
    detail::WordTable t(aut.sigma(), opts.max_len);
    detail::DenseSeries behavior = detail::dense_behavior(aut, t);
    detail::enumerate_words(aut.sigma(), opts.max_len, [&](const Word& w) {
        if (!res.passed) return;
        detail::AbsoluteChart chart = detail::build_absolute_chart(rules, w);
        const bool in_grammar = detail::chart_x0_derives(chart);
        const bool in_automaton = !behavior[static_cast<std::size_t>(t.id_of(w))].is_zero();
        if (in_grammar != in_automaton) {
            res.passed = false;
            res.detail = "word " + format_letters(aut, w) + ": grammar " +
                         (in_grammar ? "accepts" : "rejects") + ", automaton " +
                         (in_automaton ? "accepts" : "rejects");
        }
    });
    return res;
}

/// Check 4.2: bounded omega derivations against the behavior's omega part
/// on the bool projection.
inline CheckResult check_omega_agreement(const RocAutomaton& aut, const CheckOptions& opts) {
    CheckResult res{"4.2", "omega language agreement", true, ""};
    const RocAutomaton proj = bool_projection(aut);
    MixedGrammar g = triple_pair_construct(aut);
    detail::enumerate_upwords(
        proj.sigma(), opts.omega_up_bound, opts.up_sample_cap, opts.seed, [&](const UPWord& w) {
            if (!res.passed) return;
            const bool in_grammar = omega_derivation_exists(g, w, opts.segment_bound);
            const bool in_automaton = behavior_omega_member(proj, w);
            if (in_grammar != in_automaton) {
                res.passed = false;
                res.detail = std::string("grammar ") + (in_grammar ? "accepts" : "rejects") +
                             ", automaton " + (in_automaton ? "accepts" : "rejects") + " at |u|=" +
                             std::to_string(w.prefix.size()) + " |v|=" +
                             std::to_string(w.period.size());
            }
        });
    return res;
}

/// Check 4.4: distinct leftmost derivations equal distinct accepting
/// computations, infinity included. Words whose oracle report is cut by
/// bounds are skipped and reported.
inline CheckResult check_derivation_count_agreement(const RocAutomaton& aut,
                                                    const CheckOptions& opts) {
    CheckResult res{"4.4", "derivation count agreement", true, ""};
    MixedGrammar g = triple_pair_construct(aut);
    const detail::BlockRules rules = detail::rules_from_grammar(g);
    int skipped = 0;
    detail::enumerate_words(aut.sigma(), opts.max_len, [&](const Word& w) {
        if (!res.passed) return;
        RunReport report =
            oracle_count_runs(aut, w, opts.oracle_counter_bound, opts.oracle_step_bound, 0);
        if (!report.complete) {
            ++skipped;
            return;
        }
        detail::AbsoluteChart chart = detail::build_absolute_chart(rules, w);
        const Weight d = detail::chart_x0_weight(chart);
        if (d != report.count) {
            res.passed = false;
            res.detail = "d(w)=" + to_string(d) + " vs oracle " + to_string(report.count) +
                         " on a length-" + std::to_string(w.size()) + " word";
        }
    });
    if (res.passed && skipped > 0)
        res.detail = std::to_string(skipped) + " words skipped (oracle bounds)";
    return res;
}

/// The scoreboard, in the order 2.1, 2.2, 2.6, 2.7, 3.1, 4.1, 4.2, 4.4.
inline std::vector<CheckResult> validate_automaton(const RocAutomaton& aut,
                                                   const CheckOptions& opts = {}) {
    std::vector<CheckResult> results;
    auto [step, closed] = check_power_identities(aut, opts);
    auto [decomp, unfold] = check_counter_unfoldings(aut, opts);
    results.push_back(step);
    results.push_back(closed);
    results.push_back(decomp);
    results.push_back(unfold);
    results.push_back(check_fixpoint_residual(aut, opts));
    results.push_back(check_finite_language_agreement(aut, opts));
    results.push_back(check_omega_agreement(aut, opts));
    results.push_back(check_derivation_count_agreement(aut, opts));
    return results;
}

struct CompareOutcome {
    bool equivalent = true;
    std::string description;  // the first disagreement
};

/// First finite-word or UP-word disagreement between grammar semantics and
/// automaton semantics, or equivalence up to the bounds.
inline CompareOutcome compare_grammar_automaton(const RocAutomaton& aut, const CheckOptions& opts) {
    CompareOutcome out;
    MixedGrammar g = triple_pair_construct(aut);
    const detail::BlockRules rules = detail::rules_from_grammar(g);
    detail::enumerate_words(aut.sigma(), opts.max_len, [&](const Word& w) {
        if (!out.equivalent) return;
        detail::AbsoluteChart chart = detail::build_absolute_chart(rules, w);
        const bool in_grammar = detail::chart_x0_derives(chart);
        const bool in_automaton = !weight_of_word(aut, w).is_zero();
        if (in_grammar != in_automaton) {
            out.equivalent = false;
            out.description = "finite disagreement at word " + format_letters(aut, w) +
                              ": grammar " + (in_grammar ? "accepts" : "rejects") + ", automaton " +
                              (in_automaton ? "accepts" : "rejects");
        }
    });
    if (!out.equivalent) return out;
    const RocAutomaton proj = bool_projection(aut);
    detail::enumerate_upwords(
        proj.sigma(), opts.omega_up_bound, opts.up_sample_cap, opts.seed, [&](const UPWord& w) {
            if (!out.equivalent) return;
            const bool in_grammar = omega_derivation_exists(g, w, opts.segment_bound);
            const bool in_automaton = behavior_omega_member(proj, w);
            if (in_grammar != in_automaton) {
                out.equivalent = false;
                out.description = "omega disagreement at " + format_upword(aut, w) + ": grammar " +
                                  (in_grammar ? "accepts" : "rejects") + ", automaton " +
                                  (in_automaton ? "accepts" : "rejects");
            }
        });
    return out;
}

}  // namespace roca
