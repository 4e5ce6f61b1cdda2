#pragma once

#include <random>

#include "gentle/complexes.hpp"
#include "gentle/generate.hpp"

namespace gentle {

template <class S> S random_scalar(std::mt19937_64& rng, bool nonzero = false) {
    const std::uint64_t q = field_order<S>() ? field_order<S>() : 7;
    for (;;) {
        S s = field_element<S>(rng() % q);
        if (!nonzero || !is_zero(s)) return s;
    }
}

// Random element of e_u Lambda e_w made of nontrivial paths up to max_len.
template <class S>
AlgebraElem<S> random_radical_elem(const Presentation& P, int u, int w, std::mt19937_64& rng, std::size_t max_len = 3) {
    AlgebraElem<S> e;
    for (const auto& q : P.paths_from_tail(w, max_len))
        if (!q.is_trivial() && P.head(q) == u && rng() % 2) e.add(q, random_scalar<S>(rng));
    return e;
}

// Random automorphism of each degree of x: invertible constant part between
// generators on the same vertex plus random radical terms.
template <class S> std::map<int, AlgMatrix<S>> random_graded_iso(const ProjComplex<S>& x, std::mt19937_64& rng) {
    const auto& P = x.pres();
    std::map<int, AlgMatrix<S>> out;
    for (int n : x.degrees()) {
        auto idx = x.in_degree(n);
        const std::size_t k = idx.size();
        AlgMatrix<S> g(k, std::vector<AlgebraElem<S>>(k));
        for (;;) {
            Matrix<S> c(k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    if (x.gen(idx[i]).vertex == x.gen(idx[j]).vertex) c(i, j) = random_scalar<S>(rng);
            if (!inverse_matrix(c)) continue;
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) {
                    int u = x.gen(idx[i]).vertex, w = x.gen(idx[j]).vertex;
                    g[i][j] = random_radical_elem<S>(P, u, w, rng, 2);
                    if (u == w) g[i][j].add(Path::trivial(u), c(i, j));
                }
            break;
        }
        out[n] = g;
    }
    return out;
}

// x plus up to max_contractible summands D^n(Lambda e_v) in x's degree range,
// then a random graded change of basis. Returns the planted (degree, vertex).
template <class S>
std::pair<ProjComplex<S>, std::vector<std::pair<int, int>>> scramble(const ProjComplex<S>& x, std::mt19937_64& rng,
                                                                     int max_contractible = 3) {
    const auto& P = x.pres();
    auto degs = x.degrees();
    int lo = degs.empty() ? 0 : degs.front() - 1, hi = degs.empty() ? 0 : degs.back();
    std::vector<ProjComplex<S>> parts{x};
    std::vector<std::pair<int, int>> planted;
    const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(max_contractible + 1));
    for (int i = 0; i < k; ++i) {
        int v = static_cast<int>(rng() % P.num_vertices());
        int n = lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
        parts.push_back(contractible<S>(P, v, n));
        planted.push_back({n, v});
    }
    ProjComplex<S> sum = direct_sum(P, parts);
    return {apply_graded_iso(sum, random_graded_iso(sum, rng)), planted};
}

// Random invertible T-action of dimension n.
template <class S> TModule<S> random_tmodule(std::mt19937_64& rng, std::size_t n) {
    for (;;) {
        Matrix<S> m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = random_scalar<S>(rng);
        if (inverse_matrix(m)) return {m};
    }
}

// Random direct sum of shifted finite string complexes and band complexes.
// Shifts lie in [-2, 2]; bands appear only when the algebra has some.
template <class S>
DecompSpec<S> random_spec(const Alphabet& A, std::mt19937_64& rng, std::size_t max_summands, std::size_t max_pairs,
                          std::size_t max_band_dim, std::size_t max_period = 6) {
    DecompSpec<S> spec;
    const std::size_t k = 1 + rng() % max_summands;
    for (std::size_t i = 0; i < k; ++i) {
        const int sh = static_cast<int>(rng() % 5) - 2;
        if (max_band_dim > 0 && rng() % 4 == 0) {
            auto w = random_periodic_word(A, rng, max_period, true, 2, 60);
            if (w) {
                spec.bands.push_back({*w, random_tmodule<S>(rng, 1 + rng() % max_band_dim), sh});
                continue;
            }
        }
        if (rng() % 8 == 0) {
            spec.strings.push_back({Word::trivial(static_cast<int>(rng() % A.pres().num_vertices()), 1), sh});
            continue;
        }
        auto w = random_finite_word(A, rng, max_pairs, 2);
        if (w) spec.strings.push_back({*w, sh});
    }
    return spec;
}

}  // namespace gentle
