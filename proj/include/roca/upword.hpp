// upword.hpp -- ultimately periodic omega-words u·v^omega.

#pragma once

#include <stdexcept>

#include "roca/automaton.hpp"

namespace roca {

/// An ultimately periodic omega-word: finite prefix u, nonempty period v.
struct UPWord {
    Word prefix;
    Word period;
};

inline void require_valid(const UPWord& w) {
    if (w.period.empty()) throw std::invalid_argument("empty period");
}

/// Letter at an absolute position of u·v^omega.
inline int up_letter(const UPWord& w, long long pos) {
    if (pos < static_cast<long long>(w.prefix.size())) return w.prefix[static_cast<std::size_t>(pos)];
    return w.period[static_cast<std::size_t>((pos - w.prefix.size()) % w.period.size())];
}

/// Number of canonical positions: |u| exact prefix slots plus |v| period
/// phases. Positions >= |u| wrap inside the period.
inline int up_positions(const UPWord& w) {
    return static_cast<int>(w.prefix.size() + w.period.size());
}

inline int up_advance(const UPWord& w, int pos) {
    int next = pos + 1;
    if (next >= up_positions(w)) next = static_cast<int>(w.prefix.size());
    return next;
}

inline int up_advance_by(const UPWord& w, int pos, int steps) {
    const int u = static_cast<int>(w.prefix.size());
    const int v = static_cast<int>(w.period.size());
    long long p = pos + static_cast<long long>(steps);
    if (p < u) return static_cast<int>(p);
    return u + static_cast<int>((p - u) % v);
}

inline int up_letter_canonical(const UPWord& w, int pos) {
    if (pos < static_cast<int>(w.prefix.size())) return w.prefix[static_cast<std::size_t>(pos)];
    return w.period[static_cast<std::size_t>(pos - w.prefix.size())];
}

/// The word left after consuming `count` letters, again as a UP word.
/// Dropping past the prefix rotates the period.
inline UPWord up_tail(const UPWord& w, long long count) {
    require_valid(w);
    if (count <= static_cast<long long>(w.prefix.size())) {
        UPWord t;
        t.prefix.assign(w.prefix.begin() + static_cast<std::ptrdiff_t>(count), w.prefix.end());
        t.period = w.period;
        return t;
    }
    const long long r = (count - w.prefix.size()) % w.period.size();
    UPWord t;
    t.period.reserve(w.period.size());
    for (std::size_t s = 0; s < w.period.size(); ++s)
        t.period.push_back(w.period[(static_cast<std::size_t>(r) + s) % w.period.size()]);
    return t;
}

inline UPWord parse_upword(const RocAutomaton& aut, std::string_view prefix, std::string_view period) {
    UPWord w{parse_letters(aut, prefix), parse_letters(aut, period)};
    require_valid(w);
    return w;
}

inline std::string format_upword(const RocAutomaton& aut, const UPWord& w) {
    return format_letters(aut, w.prefix) + "(" + format_letters(aut, w.period) + ")^w";
}

}  // namespace roca
