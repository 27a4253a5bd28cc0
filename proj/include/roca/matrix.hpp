// matrix.hpp -- square matrices over a weight domain, with Kleene star by
// recursive block decomposition and the finite-matrix Buchi omega closure.

#pragma once

#include <stdexcept>
#include <vector>

#include "roca/weight.hpp"

namespace roca {

struct SquareMatrix {
    Domain domain = Domain::Bool;
    int n = 0;
    std::vector<Weight> cells;

    SquareMatrix() = default;
    SquareMatrix(Domain d, int size)
        : domain(d), n(size), cells(static_cast<std::size_t>(size) * size, Weight::zero(d)) {
        if (size < 1) throw std::invalid_argument("matrix size must be >= 1");
    }

    static SquareMatrix identity(Domain d, int size) {
        SquareMatrix m(d, size);
        for (int i = 0; i < size; ++i) m.at(i, i) = Weight::one(d);
        return m;
    }

    Weight& at(int i, int j) { return cells[static_cast<std::size_t>(i) * n + j]; }
    const Weight& at(int i, int j) const { return cells[static_cast<std::size_t>(i) * n + j]; }

    friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
        return a.domain == b.domain && a.n == b.n && a.cells == b.cells;
    }
    friend bool operator!=(const SquareMatrix& a, const SquareMatrix& b) { return !(a == b); }
};

namespace detail {
inline void require_compatible(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.domain != b.domain) throw std::invalid_argument("matrix domain mismatch");
    if (a.n != b.n) throw std::invalid_argument("matrix size mismatch");
}
}  // namespace detail

inline SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
    detail::require_compatible(a, b);
    SquareMatrix r(a.domain, a.n);
    for (std::size_t i = 0; i < a.cells.size(); ++i) r.cells[i] = a.cells[i] + b.cells[i];
    return r;
}

inline SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    detail::require_compatible(a, b);
    SquareMatrix r(a.domain, a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) {
            const Weight& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < a.n; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

namespace detail {

// Rectangular matrix used only inside the block-star recursion.
struct Rect {
    Domain domain;
    int rows, cols;
    std::vector<Weight> cells;
    Rect(Domain d, int r, int c)
        : domain(d), rows(r), cols(c), cells(static_cast<std::size_t>(r) * c, Weight::zero(d)) {}
    Weight& at(int i, int j) { return cells[static_cast<std::size_t>(i) * cols + j]; }
    const Weight& at(int i, int j) const { return cells[static_cast<std::size_t>(i) * cols + j]; }
};

inline Rect rect_of(const SquareMatrix& m, int r0, int c0, int rows, int cols) {
    Rect r(m.domain, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.at(i, j) = m.at(r0 + i, c0 + j);
    return r;
}

inline Rect mul(const Rect& a, const Rect& b) {
    Rect r(a.domain, a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const Weight& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

inline Rect add(const Rect& a, const Rect& b) {
    Rect r = a;
    for (std::size_t i = 0; i < r.cells.size(); ++i) r.cells[i] += b.cells[i];
    return r;
}

inline Rect rect_of_square(const SquareMatrix& m) { return rect_of(m, 0, 0, m.n, m.n); }

inline SquareMatrix square_of_rect(const Rect& r) {
    SquareMatrix m(r.domain, r.rows);
    for (int i = 0; i < r.rows; ++i)
        for (int j = 0; j < r.cols; ++j) m.at(i, j) = r.at(i, j);
    return m;
}

}  // namespace detail

/// Least solution of X = I + M·X, computed by recursive 2x2 block
/// decomposition with the scalar star at the base case. Exact over both
/// domains (no iteration, so natinf stars do not diverge).
inline SquareMatrix star(const SquareMatrix& m) {
    using detail::Rect;
    if (m.n == 1) {
        SquareMatrix r(m.domain, 1);
        r.at(0, 0) = star(m.at(0, 0));
        return r;
    }
    const int h = m.n / 2;
    const int t = m.n - h;
    Rect a = detail::rect_of(m, 0, 0, h, h);
    Rect b = detail::rect_of(m, 0, h, h, t);
    Rect c = detail::rect_of(m, h, 0, t, h);
    Rect d = detail::rect_of(m, h, h, t, t);

    Rect astar = detail::rect_of_square(star(detail::square_of_rect(a)));
    Rect delta = detail::add(d, detail::mul(detail::mul(c, astar), b));
    Rect dstar = detail::rect_of_square(star(detail::square_of_rect(delta)));

    Rect tl = detail::add(astar, detail::mul(detail::mul(detail::mul(detail::mul(astar, b), dstar), c), astar));
    Rect tr = detail::mul(detail::mul(astar, b), dstar);
    Rect bl = detail::mul(detail::mul(dstar, c), astar);

    SquareMatrix r(m.domain, m.n);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) r.at(i, j) = tl.at(i, j);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < t; ++j) r.at(i, j + h) = tr.at(i, j);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < h; ++j) r.at(i + h, j) = bl.at(i, j);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) r.at(i + h, j + h) = dstar.at(i, j);
    return r;
}

/// Buchi omega closure of a bool adjacency matrix: entry j is 1 iff the
/// digraph of nonzero entries has an infinite path from j that visits
/// states with index < k (0-based; the repeated states) infinitely often.
/// k = 0 yields the zero vector, k = n the classical omega closure.
inline std::vector<Weight> buchi_closure(const SquareMatrix& m, int k) {
    if (m.domain != Domain::Bool)
        throw std::invalid_argument("buchi_closure requires the bool domain");
    if (k < 0 || k > m.n) throw std::out_of_range("k out of range");
    SquareMatrix reach = star(m);       // reflexive-transitive closure
    SquareMatrix plus = m * reach;      // at least one step
    std::vector<Weight> out(m.n, Weight::zero(Domain::Bool));
    for (int j = 0; j < m.n; ++j)
        for (int r = 0; r < k; ++r)
            if (!reach.at(j, r).is_zero() && !plus.at(r, r).is_zero()) {
                out[j] = Weight::one(Domain::Bool);
                break;
            }
    return out;
}

}  // namespace roca
