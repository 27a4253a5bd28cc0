#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "roca/matrix.hpp"
#include "roca/weight.hpp"

using namespace roca;

namespace {

std::vector<Weight> bool_values() { return {Weight::boolean(false), Weight::boolean(true)}; }

std::vector<Weight> natinf_samples() {
    return {Weight::nat(0), Weight::nat(1), Weight::nat(2), Weight::nat(3), Weight::nat(7),
            Weight::infinity()};
}

void check_semiring_laws(const std::vector<Weight>& values) {
    const Domain d = values.front().domain;
    const Weight zero = Weight::zero(d), one = Weight::one(d);
    for (const Weight& a : values) {
        CHECK(a + zero == a);
        CHECK(zero + a == a);
        CHECK(a * one == a);
        CHECK(one * a == a);
        CHECK(a * zero == zero);
        CHECK(zero * a == zero);
        for (const Weight& b : values) {
            CHECK(a + b == b + a);
            for (const Weight& c : values) {
                CHECK((a + b) + c == a + (b + c));
                CHECK((a * b) * c == a * (b * c));
                CHECK(a * (b + c) == a * b + a * c);
                CHECK((a + b) * c == a * c + b * c);
            }
        }
    }
}

}  // namespace

TEST_CASE("weight operations on the two domains") {
    CHECK(Weight::boolean(true) + Weight::boolean(true) == Weight::boolean(true));
    CHECK(Weight::nat(2) + Weight::nat(3) == Weight::nat(5));
    CHECK(Weight::infinity() + Weight::nat(0) == Weight::infinity());
    CHECK(Weight::boolean(true) * Weight::boolean(false) == Weight::boolean(false));
    CHECK(Weight::nat(0) * Weight::infinity() == Weight::nat(0));
    CHECK(Weight::infinity() * Weight::nat(0) == Weight::nat(0));
    CHECK(Weight::nat(2) * Weight::infinity() == Weight::infinity());
    CHECK_THROWS_AS(Weight::boolean(true) + Weight::nat(1), std::invalid_argument);
    CHECK_THROWS_AS(Weight::nat(1) * Weight::boolean(true), std::invalid_argument);
}

TEST_CASE("scalar star") {
    CHECK(star(Weight::boolean(false)) == Weight::boolean(true));
    CHECK(star(Weight::boolean(true)) == Weight::boolean(true));
    CHECK(star(Weight::nat(0)) == Weight::nat(1));
    CHECK(star(Weight::infinity()) == Weight::infinity());

    // Divergence witness for 3*: partial sums of 3^j pass any bound.
    unsigned long long partial = 0, power = 1;
    bool diverges = false;
    for (int j = 0; j < 40 && !diverges; ++j) {
        partial += power;
        power *= 3;
        diverges = partial > (1ull << 60);
    }
    CHECK(diverges);
    CHECK(star(Weight::nat(3)) == Weight::infinity());
}

TEST_CASE("semiring laws, exhaustive over bool and sampled over natinf") {
    check_semiring_laws(bool_values());
    check_semiring_laws(natinf_samples());
}

TEST_CASE("star identity a* = 1 + a a*") {
    for (const Weight& a : bool_values())
        CHECK(star(a) == Weight::one(Domain::Bool) + a * star(a));
    for (const Weight& a : natinf_samples())
        CHECK(star(a) == Weight::one(Domain::NatInf) + a * star(a));
}

TEST_CASE("weight literals") {
    CHECK(parse_weight(Domain::NatInf, "inf") == Weight::infinity());
    CHECK(parse_weight(Domain::NatInf, "17") == Weight::nat(17));
    CHECK(parse_weight(Domain::Bool, "1") == Weight::boolean(true));
    CHECK(to_string(Weight::infinity()) == "inf");
    CHECK(to_string(Weight::nat(5)) == "5");
    CHECK_THROWS_AS(parse_weight(Domain::Bool, "2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_weight(Domain::Bool, "inf"), std::invalid_argument);
    CHECK_THROWS_AS(parse_weight(Domain::NatInf, "x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_weight(Domain::NatInf, ""), std::invalid_argument);
}

namespace {

SquareMatrix random_bool_matrix(std::mt19937_64& rng, int n) {
    SquareMatrix m(Domain::Bool, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = Weight::boolean(rng() % 3 == 0);
    return m;
}

// Independent reflexive-transitive closure by Floyd-Warshall.
SquareMatrix closure_by_warshall(const SquareMatrix& m) {
    SquareMatrix r = m;
    for (int i = 0; i < m.n; ++i) r.at(i, i) = Weight::boolean(true);
    for (int k = 0; k < m.n; ++k)
        for (int i = 0; i < m.n; ++i)
            for (int j = 0; j < m.n; ++j)
                if (!r.at(i, k).is_zero() && !r.at(k, j).is_zero())
                    r.at(i, j) = Weight::boolean(true);
    return r;
}

}  // namespace

TEST_CASE("matrix product") {
    SquareMatrix id = SquareMatrix::identity(Domain::NatInf, 3);
    SquareMatrix m(Domain::NatInf, 3);
    m.at(0, 1) = Weight::nat(4);
    m.at(2, 0) = Weight::infinity();
    CHECK(id * m == m);
    CHECK(m * id == m);

    SquareMatrix nil(Domain::Bool, 2);
    nil.at(0, 1) = Weight::boolean(true);
    SquareMatrix sq = nil * nil;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(sq.at(i, j).is_zero());

    SquareMatrix tri(Domain::NatInf, 2);
    tri.at(0, 0) = tri.at(0, 1) = tri.at(1, 1) = Weight::nat(1);
    SquareMatrix tri2 = tri * tri;
    CHECK(tri2.at(0, 0) == Weight::nat(1));
    CHECK(tri2.at(0, 1) == Weight::nat(2));
    CHECK(tri2.at(1, 0) == Weight::nat(0));
    CHECK(tri2.at(1, 1) == Weight::nat(1));

    CHECK_THROWS_AS(m * SquareMatrix(Domain::NatInf, 2), std::invalid_argument);
    CHECK_THROWS_AS(m * SquareMatrix(Domain::Bool, 3), std::invalid_argument);
}

TEST_CASE("matrix star") {
    SquareMatrix z(Domain::NatInf, 1);
    CHECK(star(z).at(0, 0) == Weight::nat(1));

    SquareMatrix edge(Domain::Bool, 2);
    edge.at(0, 1) = Weight::boolean(true);
    SquareMatrix es = star(edge);
    CHECK(es.at(0, 0) == Weight::boolean(true));
    CHECK(es.at(0, 1) == Weight::boolean(true));
    CHECK(es.at(1, 0) == Weight::boolean(false));
    CHECK(es.at(1, 1) == Weight::boolean(true));

    SquareMatrix cyc(Domain::Bool, 2);
    cyc.at(0, 1) = cyc.at(1, 0) = Weight::boolean(true);
    SquareMatrix cs = star(cyc);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(cs.at(i, j) == Weight::boolean(true));
}

TEST_CASE("matrix star equals brute-force closure over bool") {
    std::mt19937_64 rng(7);
    for (int n = 1; n <= 4; ++n)
        for (int t = 0; t < 40; ++t) {
            SquareMatrix m = random_bool_matrix(rng, n);
            CHECK(star(m) == closure_by_warshall(m));
        }
}

TEST_CASE("matrix star identity X = I + A X") {
    // Exhaustive over every 1x1 and 2x2 bool matrix, randomized above that.
    for (int bits = 0; bits < 2; ++bits) {
        SquareMatrix a(Domain::Bool, 1);
        a.at(0, 0) = Weight::boolean(bits);
        SquareMatrix x = star(a);
        CHECK(x == SquareMatrix::identity(Domain::Bool, 1) + a * x);
    }
    for (int bits = 0; bits < 16; ++bits) {
        SquareMatrix a(Domain::Bool, 2);
        for (int cell = 0; cell < 4; ++cell)
            a.cells[static_cast<std::size_t>(cell)] = Weight::boolean((bits >> cell) & 1);
        SquareMatrix x = star(a);
        CHECK(x == SquareMatrix::identity(Domain::Bool, 2) + a * x);
    }
    std::mt19937_64 rng(11);
    for (int n = 3; n <= 4; ++n)
        for (int t = 0; t < 25; ++t) {
            SquareMatrix a = random_bool_matrix(rng, n);
            SquareMatrix x = star(a);
            CHECK(x == SquareMatrix::identity(Domain::Bool, n) + a * x);
        }
    // Exact over natinf thanks to the block decomposition.
    SquareMatrix a(Domain::NatInf, 2);
    a.at(0, 1) = Weight::nat(1);
    SquareMatrix x = star(a);
    CHECK(x == SquareMatrix::identity(Domain::NatInf, 2) + a * x);
    CHECK(x.at(0, 1) == Weight::nat(1));
    SquareMatrix loop(Domain::NatInf, 1);
    loop.at(0, 0) = Weight::nat(2);
    CHECK(star(loop).at(0, 0) == Weight::infinity());
}

TEST_CASE("buchi closure of a finite matrix") {
    SquareMatrix self(Domain::Bool, 1);
    self.at(0, 0) = Weight::boolean(true);
    CHECK(buchi_closure(self, 1) == std::vector<Weight>{Weight::boolean(true)});
    CHECK(buchi_closure(self, 0) == std::vector<Weight>{Weight::boolean(false)});

    SquareMatrix acyclic(Domain::Bool, 2);
    acyclic.at(0, 1) = Weight::boolean(true);
    auto v = buchi_closure(acyclic, 2);
    CHECK(v[0].is_zero());
    CHECK(v[1].is_zero());

    CHECK_THROWS_AS(buchi_closure(SquareMatrix(Domain::NatInf, 1), 1), std::invalid_argument);
    CHECK_THROWS_AS(buchi_closure(acyclic, 3), std::out_of_range);
}

TEST_CASE("buchi closure: monotone in k, classical at k = n") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 60; ++t) {
        const int n = 1 + static_cast<int>(rng() % 4);
        SquareMatrix m = random_bool_matrix(rng, n);
        std::vector<std::vector<Weight>> by_k;
        for (int k = 0; k <= n; ++k) by_k.push_back(buchi_closure(m, k));
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                CHECK((by_k[k][j].is_zero() || !by_k[k + 1][j].is_zero()));
        for (int j = 0; j < n; ++j) CHECK(by_k[0][j].is_zero());

        // Classical omega closure by explicit path simulation: j accepts iff
        // a vertex reachable from j lies on a nonempty cycle.
        SquareMatrix reach = closure_by_warshall(m);
        for (int j = 0; j < n; ++j) {
            bool expect = false;
            for (int mid = 0; mid < n && !expect; ++mid) {
                if (reach.at(j, mid).is_zero()) continue;
                for (int nxt = 0; nxt < n && !expect; ++nxt)
                    expect = !m.at(mid, nxt).is_zero() && !reach.at(nxt, mid).is_zero();
            }
            CHECK(by_k[n][j] == Weight::boolean(expect));
        }
    }
}
