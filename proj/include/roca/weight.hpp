// weight.hpp -- the two weight domains (bool and natinf) and their
// complete-semiring operations.

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace roca {

/// The two carrier semirings: the Boolean semiring {0,1} and the
/// completed naturals N ∪ {inf}.
enum class Domain { Bool, NatInf };

inline std::string to_string(Domain d) {
    return d == Domain::Bool ? "bool" : "natinf";
}

inline Domain parse_domain(std::string_view s) {
    if (s == "bool") return Domain::Bool;
    if (s == "natinf") return Domain::NatInf;
    throw std::invalid_argument("unknown semiring: " + std::string(s));
}

/// A single semiring element. Infinity is a distinct symbolic value,
/// never a sentinel integer; bool values are restricted to 0/1.
struct Weight {
    Domain domain = Domain::Bool;
    bool infinite = false;
    std::uint64_t value = 0;

    static Weight zero(Domain d) { return Weight{d, false, 0}; }
    static Weight one(Domain d) { return Weight{d, false, 1}; }
    static Weight boolean(bool b) { return Weight{Domain::Bool, false, b ? 1u : 0u}; }
    static Weight nat(std::uint64_t n) { return Weight{Domain::NatInf, false, n}; }
    static Weight infinity() { return Weight{Domain::NatInf, true, 0}; }

    bool is_zero() const { return !infinite && value == 0; }
    bool is_one() const { return !infinite && value == 1; }
    bool is_infinite() const { return infinite; }

    friend bool operator==(const Weight& a, const Weight& b) {
        return a.domain == b.domain && a.infinite == b.infinite &&
               (a.infinite || a.value == b.value);
    }
    friend bool operator!=(const Weight& a, const Weight& b) { return !(a == b); }
};

namespace detail {
inline void require_same_domain(const Weight& a, const Weight& b) {
    if (a.domain != b.domain)
        throw std::invalid_argument("weight domain mismatch");
}
}  // namespace detail

inline Weight operator+(const Weight& a, const Weight& b) {
    detail::require_same_domain(a, b);
    if (a.domain == Domain::Bool) return Weight::boolean(a.value != 0 || b.value != 0);
    if (a.infinite || b.infinite) return Weight::infinity();
    if (a.value > std::numeric_limits<std::uint64_t>::max() - b.value)
        throw std::overflow_error("natinf addition overflow");
    return Weight::nat(a.value + b.value);
}

inline Weight operator*(const Weight& a, const Weight& b) {
    detail::require_same_domain(a, b);
    if (a.domain == Domain::Bool) return Weight::boolean(a.value != 0 && b.value != 0);
    // 0 annihilates even against infinity.
    if (a.is_zero() || b.is_zero()) return Weight::nat(0);
    if (a.infinite || b.infinite) return Weight::infinity();
    if (a.value > std::numeric_limits<std::uint64_t>::max() / b.value)
        throw std::overflow_error("natinf multiplication overflow");
    return Weight::nat(a.value * b.value);
}

inline Weight& operator+=(Weight& a, const Weight& b) { return a = a + b; }
inline Weight& operator*=(Weight& a, const Weight& b) { return a = a * b; }

/// Kleene star of a scalar: sum of all powers. In bool, 0* = 1* = 1.
/// In natinf, 0* = 1 and a* = inf for every a >= 1, including inf.
inline Weight star(const Weight& a) {
    if (a.domain == Domain::Bool) return Weight::boolean(true);
    if (a.is_zero()) return Weight::one(Domain::NatInf);
    return Weight::infinity();
}

inline std::string to_string(const Weight& w) {
    if (w.infinite) return "inf";
    return std::to_string(w.value);
}

/// Weight literal syntax shared by all file formats: a nonnegative
/// decimal integer or the token `inf`.
inline Weight parse_weight(Domain d, std::string_view token) {
    if (token == "inf") {
        if (d == Domain::Bool)
            throw std::invalid_argument("malformed weight: inf not valid in bool");
        return Weight::infinity();
    }
    if (token.empty())
        throw std::invalid_argument("malformed weight: empty token");
    std::uint64_t v = 0;
    for (char c : token) {
        if (c < '0' || c > '9')
            throw std::invalid_argument("malformed weight: " + std::string(token));
        if (v > (std::numeric_limits<std::uint64_t>::max() - (c - '0')) / 10)
            throw std::invalid_argument("malformed weight: out of range");
        v = v * 10 + (c - '0');
    }
    if (d == Domain::Bool && v > 1)
        throw std::invalid_argument("malformed weight: bool weights are 0 or 1");
    return d == Domain::Bool ? Weight::boolean(v != 0) : Weight::nat(v);
}

}  // namespace roca
