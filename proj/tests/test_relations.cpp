#include "doctest.h"

#include <random>

#include "gentle/relations.hpp"

using namespace gentle;

namespace {

Matrix<Fp> random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    Matrix<Fp> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = Fp(static_cast<long long>(rng() % Fp::modulus()));
    return m;
}

Matrix<Fp> random_invertible(std::mt19937_64& rng, std::size_t n) {
    for (;;) {
        auto m = random_matrix(rng, n, n);
        if (inverse_matrix(m)) return m;
    }
}

LinearRelation<Fp> random_relation(std::mt19937_64& rng, std::size_t s, std::size_t d) {
    std::size_t k = rng() % (s + d + 1);
    return {s, d, Subspace<Fp>::span(random_matrix(rng, k, s + d), s + d)};
}

Matrix<Fp> nilpotent_jordan(std::size_t n) {
    Matrix<Fp> m(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = Fp(1);
    return m;
}

// Naive powers: R^k U by repeated image, no early exit.
Subspace<Fp> power_image(const LinearRelation<Fp>& r, Subspace<Fp> u, int k) {
    for (int i = 0; i < k; ++i) u = image(r, u);
    return u;
}

}  // namespace

TEST_CASE("maps, converse and images") {
    FpContext ctx(3);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        auto u = Subspace<Fp>::span(random_matrix(rng, rng() % 5, 5), 5);
        CHECK(image(LinearRelation<Fp>::identity(5), u) == u);
        auto r = random_relation(rng, 4, 3);
        CHECK(converse(converse(r)) == r);
        // image under a map graph equals the matrix image
        auto f = random_matrix(rng, 5, 4);
        CHECK(image(LinearRelation<Fp>::from_map(f), u) == u.image(f));
        CHECK(preimage(LinearRelation<Fp>::from_map(f), u.image(f)).contains(u));
    }
}

TEST_CASE("composition of map graphs is the matrix product over F_3") {
    FpContext ctx(3);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        std::size_t a = 1 + rng() % 4, b = 1 + rng() % 4, c = 1 + rng() % 4;
        auto f = random_matrix(rng, a, b), g = random_matrix(rng, b, c);
        CHECK(compose(LinearRelation<Fp>::from_map(g), LinearRelation<Fp>::from_map(f)) ==
              LinearRelation<Fp>::from_map(f * g));
    }
}

TEST_CASE("associativity and the converse anti-homomorphism") {
    FpContext ctx(2);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 40; ++t) {
        auto r = random_relation(rng, 3, 2), s = random_relation(rng, 4, 3), q = random_relation(rng, 2, 3);
        CHECK(compose(q, compose(r, s)) == compose(compose(q, r), s));
        CHECK(converse(compose(r, s)) == compose(converse(s), converse(r)));
        auto u = Subspace<Fp>::span(random_matrix(rng, rng() % 4, 4), 4);
        CHECK(image(compose(r, s), u) == image(r, image(s, u)));
    }
}

TEST_CASE("restriction keeps the pairs inside the coordinate boxes") {
    FpContext ctx(5);
    // diag(2, 3) on coordinates 0 and 1; restricting to {1} leaves 3
    Matrix<Fp> f(2, 2);
    f(0, 0) = Fp(2);
    f(1, 1) = Fp(3);
    auto r = restrict_relation(LinearRelation<Fp>::from_map(f), {1}, {1});
    Matrix<Fp> three(1, 1);
    three(0, 0) = Fp(3);
    CHECK(r == LinearRelation<Fp>::from_map(three));
}

TEST_CASE("stable parts of basic relations") {
    FpContext ctx(5);
    SUBCASE("nilpotent Jordan block") {
        auto st = stable_parts(LinearRelation<Fp>::from_map(nilpotent_jordan(4)));
        CHECK(st.r_prime.dim() == 0);
        CHECK(st.r_dprime.dim() == 0);
        CHECK(st.sharp.dim() == 0);
        CHECK(st.flat.dim() == 0);
        // direct iteration: the image of V under N^4 is zero
        auto r = LinearRelation<Fp>::from_map(nilpotent_jordan(4));
        CHECK(power_image(r, Subspace<Fp>::full(4), 4).dim() == 0);
        CHECK(power_image(r, Subspace<Fp>::full(4), 3).dim() == 1);
    }
    SUBCASE("invertible map") {
        std::mt19937_64 rng(3);
        auto f = random_invertible(rng, 4);
        auto st = stable_parts(LinearRelation<Fp>::from_map(f));
        CHECK(st.sharp.dim() == 4);
        CHECK(st.flat.dim() == 0);
    }
    SUBCASE("full relation") {
        auto st = stable_parts(LinearRelation<Fp>::full(3, 3));
        CHECK(st.r_prime.dim() == 3);
        CHECK(st.sharp.dim() == 3);
        CHECK(st.flat.dim() == 3);
        auto a = stable_automorphism(LinearRelation<Fp>::full(3, 3));
        CHECK(a.theta.rows() == 0);
    }
    SUBCASE("non-endorelation is rejected") {
        CHECK_THROWS(stable_parts(LinearRelation<Fp>::full(2, 3)));
    }
}

TEST_CASE("stable automorphism of an invertible map is similar to it") {
    FpContext ctx(5);
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; ++t) {
        std::size_t n = 1 + rng() % 4;
        auto f = random_invertible(rng, n);
        auto a = stable_automorphism(LinearRelation<Fp>::from_map(f));
        CHECK(similar(a.theta, f).similar);
    }
}

TEST_CASE("stable automorphism ignores nilpotent and full summands") {
    FpContext ctx(5);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        std::size_t n = 1 + rng() % 3;
        auto f = random_invertible(rng, n);
        // f (+) nilpotent J_2 as a map, then add a 1-dim full block
        auto g = direct_sum(f, nilpotent_jordan(2));
        auto r = LinearRelation<Fp>::from_map(g);
        const std::size_t m = n + 2;
        Matrix<Fp> rows = r.graph.basis();
        // embed into (m + 1) (+) (m + 1) and add the full block on the last coordinate
        const std::size_t w = m + 1;
        Matrix<Fp> big(0, 2 * w);
        for (std::size_t i = 0; i < rows.rows(); ++i) {
            std::vector<Fp> e(2 * w, Fp(0));
            for (std::size_t j = 0; j < m; ++j) {
                e[j] = rows(i, j);
                e[w + j] = rows(i, m + j);
            }
            big.append_row(e);
        }
        std::vector<Fp> e1(2 * w, Fp(0)), e2(2 * w, Fp(0));
        e1[m] = Fp(1);
        e2[w + m] = Fp(1);
        big.append_row(e1);
        big.append_row(e2);
        LinearRelation<Fp> rel(w, w, Subspace<Fp>::span(big, 2 * w));
        auto a = stable_automorphism(rel);
        CHECK(a.parts.flat.dim() == 1);
        CHECK(a.parts.sharp.dim() == n + 1);
        CHECK(similar(a.theta, f).similar);
    }
}

TEST_CASE("random relations: chains stabilise and flat lies in sharp") {
    FpContext ctx(2);
    std::mt19937_64 rng(17);
    int automorphisms = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + rng() % 4;
        auto r = random_relation(rng, n, n);
        auto st = stable_parts(r);
        CHECK(st.sharp.contains(st.flat));
        CHECK(st.r_dprime.contains(st.r_prime));
        CHECK(st.steps <= static_cast<int>(4 * (n + 1)));
        // the fixpoints agree with naive powers
        CHECK(power_image(r, Subspace<Fp>::zero(n), static_cast<int>(n) + 1) == st.r_prime);
        CHECK(power_image(r, Subspace<Fp>::full(n), static_cast<int>(n) + 1) == st.r_dprime);
        try {
            auto a = stable_automorphism(r);
            CHECK(inverse_matrix(a.theta).has_value());
            ++automorphisms;
        } catch (const std::runtime_error&) {
            // not every random relation is split
        }
    }
    CHECK(automorphisms > 0);
}
