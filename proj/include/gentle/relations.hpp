#pragma once

#include <stdexcept>
#include <vector>

#include "gentle/linalg.hpp"

namespace gentle {

// A linear relation from k^src to k^dst: a subspace of k^src (+) k^dst.
// A pair (v, w) in the graph reads "w is related to v".
template <class S> struct LinearRelation {
    std::size_t src_dim = 0, dst_dim = 0;
    Subspace<S> graph;

    LinearRelation() = default;
    LinearRelation(std::size_t s, std::size_t d, Subspace<S> g) : src_dim(s), dst_dim(d), graph(std::move(g)) {
        if (graph.ambient() != s + d) throw std::invalid_argument("relation graph has the wrong ambient dimension");
    }

    static LinearRelation zero(std::size_t s, std::size_t d) { return {s, d, Subspace<S>::zero(s + d)}; }
    static LinearRelation full(std::size_t s, std::size_t d) { return {s, d, Subspace<S>::full(s + d)}; }
    static LinearRelation identity(std::size_t n) { return from_map(Matrix<S>::identity(n)); }
    // graph of v |-> v f
    static LinearRelation from_map(const Matrix<S>& f) {
        return {f.rows(), f.cols(), Subspace<S>::span(hstack(Matrix<S>::identity(f.rows()), f), f.rows() + f.cols())};
    }

    bool is_endo() const { return src_dim == dst_dim; }
    bool operator==(const LinearRelation& o) const {
        return src_dim == o.src_dim && dst_dim == o.dst_dim && graph == o.graph;
    }
    bool operator!=(const LinearRelation& o) const { return !(*this == o); }
};

namespace rel_detail {

// Rows of `b` with their columns permuted/embedded: column j of b goes to cols[j].
template <class S> Matrix<S> embed(const Matrix<S>& b, const std::vector<std::size_t>& cols, std::size_t width) {
    Matrix<S> m(b.rows(), width);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, cols[j]) = b(i, j);
    return m;
}

inline std::vector<std::size_t> iota(std::size_t from, std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = from + i;
    return v;
}

// Projection of a subspace onto a set of coordinates.
template <class S> Subspace<S> project(const Subspace<S>& u, std::size_t from, std::size_t n) {
    if (u.dim() == 0) return Subspace<S>::zero(n);
    return Subspace<S>::span(u.basis().block(0, from, u.dim(), n), n);
}

}  // namespace rel_detail

template <class S> LinearRelation<S> converse(const LinearRelation<S>& r) {
    using namespace rel_detail;
    std::vector<std::size_t> cols = iota(r.dst_dim, r.src_dim);
    auto tail = iota(0, r.dst_dim);
    cols.insert(cols.end(), tail.begin(), tail.end());
    return {r.dst_dim, r.src_dim,
            Subspace<S>::span(embed(r.graph.basis(), cols, r.src_dim + r.dst_dim), r.src_dim + r.dst_dim)};
}

// R o T: first T (U -> V), then R (V -> W).
template <class S> LinearRelation<S> compose(const LinearRelation<S>& r, const LinearRelation<S>& t) {
    using namespace rel_detail;
    if (t.dst_dim != r.src_dim) throw std::invalid_argument("compose: dimension mismatch");
    const std::size_t u = t.src_dim, v = t.dst_dim, w = r.dst_dim, all = u + v + w;
    // T (+) W and U (+) R inside U (+) V (+) W
    Matrix<S> a = embed(t.graph.basis(), iota(0, u + v), all);
    for (std::size_t k = 0; k < w; ++k) {
        std::vector<S> e(all, S(0));
        e[u + v + k] = S(1);
        a.append_row(e);
    }
    Matrix<S> b = embed(r.graph.basis(), iota(u, v + w), all);
    for (std::size_t k = 0; k < u; ++k) {
        std::vector<S> e(all, S(0));
        e[k] = S(1);
        b.append_row(e);
    }
    Subspace<S> meet = Subspace<S>::span(a, all).intersect(Subspace<S>::span(b, all));
    Matrix<S> rows(0, u + w);
    for (std::size_t i = 0; i < meet.dim(); ++i) {
        std::vector<S> x = meet.basis().row(i), y;
        y.insert(y.end(), x.begin(), x.begin() + static_cast<long>(u));
        y.insert(y.end(), x.begin() + static_cast<long>(u + v), x.end());
        rows.append_row(y);
    }
    return {u, w, Subspace<S>::span(rows, u + w)};
}

// R U = {w : (u, w) in R for some u in U}
template <class S> Subspace<S> image(const LinearRelation<S>& r, const Subspace<S>& u) {
    using namespace rel_detail;
    if (u.ambient() != r.src_dim) throw std::invalid_argument("image: dimension mismatch");
    const std::size_t all = r.src_dim + r.dst_dim;
    Matrix<S> a = embed(u.basis(), iota(0, r.src_dim), all);
    for (std::size_t k = 0; k < r.dst_dim; ++k) {
        std::vector<S> e(all, S(0));
        e[r.src_dim + k] = S(1);
        a.append_row(e);
    }
    return project(Subspace<S>::span(a, all).intersect(r.graph), r.src_dim, r.dst_dim);
}

template <class S> Subspace<S> preimage(const LinearRelation<S>& r, const Subspace<S>& w) {
    return image(converse(r), w);
}

// The relation restricted to coordinate subsets of source and target.
template <class S>
LinearRelation<S> restrict_relation(const LinearRelation<S>& r, const std::vector<std::size_t>& src_coords,
                                    const std::vector<std::size_t>& dst_coords) {
    using namespace rel_detail;
    const std::size_t all = r.src_dim + r.dst_dim;
    Matrix<S> box(0, all);
    for (auto c : src_coords) {
        std::vector<S> e(all, S(0));
        e[c] = S(1);
        box.append_row(e);
    }
    for (auto c : dst_coords) {
        std::vector<S> e(all, S(0));
        e[r.src_dim + c] = S(1);
        box.append_row(e);
    }
    Subspace<S> meet = r.graph.intersect(Subspace<S>::span(box, all));
    std::vector<std::size_t> keep = src_coords;
    for (auto c : dst_coords) keep.push_back(r.src_dim + c);
    Matrix<S> rows(0, keep.size());
    for (std::size_t i = 0; i < meet.dim(); ++i) {
        std::vector<S> y;
        for (auto c : keep) y.push_back(meet.basis()(i, c));
        rows.append_row(y);
    }
    return {src_coords.size(), dst_coords.size(), Subspace<S>::span(rows, keep.size())};
}

template <class S> struct StableParts {
    Subspace<S> r_prime;   // union of R^n 0
    Subspace<S> r_dprime;  // intersection of R^n V
    Subspace<S> sharp;
    Subspace<S> flat;
    int steps = 0;  // iterations until every chain stabilised
};

namespace rel_detail {

template <class S> Subspace<S> rise(const LinearRelation<S>& r, int& steps) {
    Subspace<S> u = Subspace<S>::zero(r.src_dim);
    for (;;) {
        Subspace<S> nx = image(r, u);
        ++steps;
        if (nx == u) return u;
        if (!nx.contains(u)) throw std::logic_error("relation powers of 0 are not increasing");
        u = nx;
    }
}

template <class S> Subspace<S> fall(const LinearRelation<S>& r, int& steps) {
    Subspace<S> u = Subspace<S>::full(r.src_dim);
    for (;;) {
        Subspace<S> nx = image(r, u);
        ++steps;
        if (nx == u) return u;
        if (!u.contains(nx)) throw std::logic_error("relation powers of V are not decreasing");
        u = nx;
    }
}

}  // namespace rel_detail

template <class S> StableParts<S> stable_parts(const LinearRelation<S>& r) {
    if (!r.is_endo()) throw std::invalid_argument("stable parts need an endorelation");
    StableParts<S> out;
    LinearRelation<S> c = converse(r);
    out.r_prime = rel_detail::rise(r, out.steps);
    out.r_dprime = rel_detail::fall(r, out.steps);
    Subspace<S> cp = rel_detail::rise(c, out.steps), cdp = rel_detail::fall(c, out.steps);
    out.sharp = out.r_dprime.intersect(cdp);
    out.flat = out.r_dprime.intersect(cp) + out.r_prime.intersect(cdp);
    return out;
}

template <class S> struct StableAutomorphism {
    StableParts<S> parts;
    Matrix<S> reps;   // rows: complement of flat in sharp
    Matrix<S> theta;  // column convention: theta(l, k) = coefficient of reps_l in the image of reps_k
};

// The automorphism of sharp/flat induced by R: m + flat |-> m' + flat where
// m' lies in sharp and is related to m.
template <class S> StableAutomorphism<S> stable_automorphism(const LinearRelation<S>& r) {
    StableAutomorphism<S> out;
    out.parts = stable_parts(r);
    const auto& sharp = out.parts.sharp;
    const auto& flat = out.parts.flat;
    const std::size_t n = r.src_dim;
    out.reps = sharp.complement_of(flat);
    const std::size_t q = out.reps.rows();
    out.theta = Matrix<S>(q, q);
    if (q == 0) return out;
    // all pairs (m, w) in R with w in sharp
    Matrix<S> box = rel_detail::embed(Matrix<S>::identity(n), rel_detail::iota(0, n), 2 * n);
    box = vstack(box, rel_detail::embed(sharp.basis(), rel_detail::iota(n, n), 2 * n));
    Subspace<S> k = r.graph.intersect(Subspace<S>::span(box, 2 * n));
    Matrix<S> firsts = k.dim() ? k.basis().block(0, 0, k.dim(), n) : Matrix<S>(0, n);
    Matrix<S> target = vstack(out.reps, flat.dim() ? flat.basis() : Matrix<S>(0, n));
    for (std::size_t j = 0; j < q; ++j) {
        auto coeff = k.dim() ? solve_left(firsts, out.reps.row(j)) : std::nullopt;
        if (!coeff) throw std::runtime_error("relation is not split: a sharp vector has no related sharp vector");
        std::vector<S> w(n, S(0));
        for (std::size_t i = 0; i < k.dim(); ++i)
            for (std::size_t c = 0; c < n; ++c) w[c] += (*coeff)[i] * k.basis()(i, n + c);
        auto x = solve_left(target, w);
        if (!x) throw std::runtime_error("related vector left the sharp part");
        for (std::size_t l = 0; l < q; ++l) out.theta(l, j) = (*x)[l];
    }
    if (!inverse_matrix(out.theta)) throw std::runtime_error("relation is not split: induced map is singular");
    return out;
}

}  // namespace gentle
