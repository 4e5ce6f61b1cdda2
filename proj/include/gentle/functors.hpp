#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gentle/complexes.hpp"
#include "gentle/relations.hpp"
#include "gentle/words.hpp"

namespace gentle {

// The underlying graded vector space of a complex of projectives: e_v M^n has
// basis the pairs (generator g of degree n, path sigma with tail v(g) and head v).
// Paths are cut at the presentation cap when the algebra is infinite-dimensional.
template <class S> class ExpandedModule {
public:
    struct Elem {
        int gen;
        Path path;
    };

    explicit ExpandedModule(const ProjComplex<S>& x) : x_(&x), P_(&x.pres()) {
        approximate_ = !P_->dimension().has_value();
        out_.resize(x.size());
        for (const auto& [k, e] : x.entries()) {
            for (const auto& [p, c] : e.terms())
                if (p.is_trivial())
                    throw std::invalid_argument("complex does not have radical images (entry " + x.gen(k.first).name +
                                                " -> " + x.gen(k.second).name + ")");
            out_[k.first].push_back({k.second, e});
        }
        for (std::size_t g = 0; g < x.size(); ++g) {
            const auto& gen = x.gen(static_cast<int>(g));
            for (const auto& q : P_->paths_from_tail(gen.vertex, static_cast<std::size_t>(P_->cap()))) {
                auto key = std::make_pair(P_->head(q), gen.degree);
                auto& sl = slices_[key];
                index_[key][{static_cast<int>(g), q}] = sl.size();
                sl.push_back({static_cast<int>(g), q});
            }
            lo_ = std::min(lo_, gen.degree);
            hi_ = std::max(hi_, gen.degree);
        }
    }

    const ProjComplex<S>& complex() const { return *x_; }
    const Presentation& pres() const { return *P_; }
    bool approximate() const { return approximate_; }
    int min_degree() const { return lo_; }
    int max_degree() const { return hi_; }
    bool empty() const { return slices_.empty(); }

    const std::vector<Elem>& slice(int v, int deg) const {
        static const std::vector<Elem> none;
        auto it = slices_.find({v, deg});
        return it == slices_.end() ? none : it->second;
    }
    std::size_t slice_dim(int v, int deg) const { return slice(v, deg).size(); }
    std::optional<std::size_t> index(int v, int deg, int gen, const Path& q) const {
        auto it = index_.find({v, deg});
        if (it == index_.end()) return std::nullopt;
        auto jt = it->second.find({gen, q});
        if (jt == it->second.end()) return std::nullopt;
        return jt->second;
    }

    // e_v rad(M^deg): the elements with a nontrivial path
    Subspace<S> rad(int v, int deg) const {
        const auto& sl = slice(v, deg);
        Matrix<S> rows(0, sl.size());
        for (std::size_t i = 0; i < sl.size(); ++i)
            if (!sl[i].path.is_trivial()) {
                std::vector<S> e(sl.size(), S(0));
                e[i] = S(1);
                rows.append_row(e);
            }
        return Subspace<S>::span(rows, sl.size());
    }
    Subspace<S> full(int v, int deg) const { return Subspace<S>::full(slice_dim(v, deg)); }
    Subspace<S> zero(int v, int deg) const { return Subspace<S>::zero(slice_dim(v, deg)); }

    // left multiplication by gamma: e_{t(gamma)} M^deg -> e_{h(gamma)} M^deg
    Matrix<S> path_map(const Path& gamma, int deg) const {
        const int t = P_->tail(gamma), h = P_->head(gamma);
        const auto& src = slice(t, deg);
        Matrix<S> m(src.size(), slice_dim(h, deg));
        for (std::size_t i = 0; i < src.size(); ++i) {
            auto z = P_->concat(gamma, src[i].path);
            if (!z) continue;
            auto j = index(h, deg, src[i].gen, *z);
            if (j) m(i, *j) = S(1);
        }
        return m;
    }

    // d_alpha: the terms of the differential on e_{h(alpha)} M^deg whose path
    // starts with alpha
    Matrix<S> d_map(int alpha, int deg) const {
        const int h = P_->arrow(alpha).head;
        const auto& src = slice(h, deg);
        Matrix<S> m(src.size(), slice_dim(h, deg + 1));
        for (std::size_t i = 0; i < src.size(); ++i) {
            const auto& [g, sigma] = src[i];
            if (!sigma.is_trivial() && sigma.first() != alpha) continue;
            for (const auto& [tgt, e] : out_[g])
                for (const auto& [p, c] : e.terms()) {
                    if (sigma.is_trivial() && p.first() != alpha) continue;
                    auto z = P_->concat(sigma, p);
                    if (!z) continue;
                    auto j = index(h, deg + 1, tgt, *z);
                    if (j) m(i, *j) += c;
                }
        }
        return m;
    }

    // Whole-vertex coordinates: slices concatenated by increasing degree.
    std::size_t vertex_dim(int v) const {
        std::size_t n = 0;
        for (int d = lo_; d <= hi_; ++d) n += slice_dim(v, d);
        return n;
    }
    std::size_t vertex_offset(int v, int deg) const {
        std::size_t n = 0;
        for (int d = lo_; d < deg; ++d) n += slice_dim(v, d);
        return n;
    }
    std::vector<std::size_t> vertex_coords(int v, int deg) const {
        std::vector<std::size_t> c;
        const std::size_t off = vertex_offset(v, deg);
        for (std::size_t i = 0; i < slice_dim(v, deg); ++i) c.push_back(off + i);
        return c;
    }
    Matrix<S> vertex_path_map(const Path& gamma) const {
        const int t = P_->tail(gamma), h = P_->head(gamma);
        Matrix<S> m(vertex_dim(t), vertex_dim(h));
        if (empty()) return m;
        for (int d = lo_; d <= hi_; ++d) m.set_block(vertex_offset(t, d), vertex_offset(h, d), path_map(gamma, d));
        return m;
    }
    Matrix<S> vertex_d_map(int alpha) const {
        const int h = P_->arrow(alpha).head;
        Matrix<S> m(vertex_dim(h), vertex_dim(h));
        if (empty()) return m;
        for (int d = lo_; d < hi_; ++d) m.set_block(vertex_offset(h, d), vertex_offset(h, d + 1), d_map(alpha, d));
        return m;
    }

private:
    const ProjComplex<S>* x_;
    const Presentation* P_;
    bool approximate_ = false;
    int lo_ = 0, hi_ = -1;
    std::vector<std::vector<std::pair<int, AlgebraElem<S>>>> out_;
    std::map<std::pair<int, int>, std::vector<Elem>> slices_;
    std::map<std::pair<int, int>, std::map<std::pair<int, Path>, std::size_t>> index_;
};

// Per-arrow components of the differential, each an endomap of e_{h(alpha)} X.
template <class S> std::vector<Matrix<S>> split_differential(const ExpandedModule<S>& m) {
    std::vector<Matrix<S>> out;
    for (std::size_t a = 0; a < m.pres().num_arrows(); ++a) out.push_back(m.vertex_d_map(static_cast<int>(a)));
    return out;
}

// The relation of a single letter on whole-vertex spaces.
template <class S> LinearRelation<S> letter_relation(const ExpandedModule<S>& m, const Letter& q) {
    switch (q.kind) {
        case Letter::Kind::Direct: return LinearRelation<S>::from_map(m.vertex_path_map(q.gamma));
        case Letter::Kind::Inverse: return converse(LinearRelation<S>::from_map(m.vertex_path_map(q.gamma)));
        case Letter::Kind::D: return LinearRelation<S>::from_map(m.vertex_d_map(q.arrow));
        case Letter::Kind::DInv: return converse(LinearRelation<S>::from_map(m.vertex_d_map(q.arrow)));
    }
    throw std::logic_error("unknown letter");
}

enum class Side { Plus, Minus };

struct FunctorIndex {
    Word B, D;
    int n = 0;
    long axis = 0;
};

// Checks head/sign compatibility and fills in the axis.
inline FunctorIndex make_index(const Alphabet& A, const Word& b, const Word& d, int n) {
    if (b.has_left_tail() || d.has_left_tail()) throw std::invalid_argument("functor index needs one-sided words");
    auto [vb, sb] = A.head_sign(b);
    auto [vd, sd] = A.head_sign(d);
    if (vb != vd || sb != -sd) throw std::invalid_argument("B and D need a common head and opposite signs");
    A.join(b, d);  // throws when B^-1 D is not a word
    return {b, d, n, A.axis(b, d)};
}

template <class S> struct FunctorValue {
    std::size_t dim = 0;
    std::size_t dim_g = 0;               // the G-functor dimension, equal to dim
    Matrix<S> basis;                     // rows: representatives of a basis of F+/F- in e_v M^n
    std::optional<Matrix<S>> t_action;   // column convention, periodic indices only
    bool approximate = false;
};

// Word subspaces of a complex with radical images, computed slice by slice.
// A pair l^-1 r of a word relates position i (right) to position i-1 (left);
// degrees change by the pair's homogeny.
template <class S> class FunctorEngine {
public:
    FunctorEngine(const Alphabet& A, const ProjComplex<S>& x) : A_(&A), m_(x) {}

    const ExpandedModule<S>& module() const { return m_; }
    const Alphabet& alphabet() const { return *A_; }

    // Image at position i-1 of a subspace U of the slice at position i.
    Subspace<S> apply_pair(const WPair& p, const Subspace<S>& u, int deg) const {
        const int a = p.gamma.first();
        if (p.type == WPair::Type::InvD) {
            Subspace<S> w = u.image(m_.d_map(a, deg));
            return w.preimage(m_.path_map(p.gamma, deg + 1));
        }
        Subspace<S> w = u.image(m_.path_map(p.gamma, deg));
        return w.preimage(m_.d_map(a, deg - 1));
    }
    LinearRelation<S> pair_relation(const WPair& p, int deg) const {
        const int a = p.gamma.first();
        if (p.type == WPair::Type::InvD)
            return compose(converse(LinearRelation<S>::from_map(m_.path_map(p.gamma, deg + 1))),
                           LinearRelation<S>::from_map(m_.d_map(a, deg)));
        return compose(converse(LinearRelation<S>::from_map(m_.d_map(a, deg - 1))),
                       LinearRelation<S>::from_map(m_.path_map(p.gamma, deg)));
    }

    // Applies pairs first..last of w (right to left) to U sitting at position
    // `last` with degree `deg`; returns the subspace at position first-1.
    Subspace<S> apply_range(const Word& w, long first, long last, Subspace<S> u, int deg) const {
        for (long i = last; i >= first; --i) {
            const WPair& p = w.pair_at(i);
            u = apply_pair(p, u, deg);
            deg -= p.H();
        }
        return u;
    }

    // C+(M) or C-(M) intersected with e_v M^n, v the head of C.
    Subspace<S> one_sided(const Word& c, Side side, int n) const {
        const Presentation& P = A_->pres();
        if (c.has_left_tail()) throw std::invalid_argument("one-sided subspaces need a finite or N-word");
        if (c.is_finite()) {
            const long m = c.length();
            int deg = n;
            for (long i = 1; i <= m; ++i) deg += c.pair_at(i).H();
            const int end_v = A_->vertex(c, m);
            const std::size_t cap = static_cast<std::size_t>(P.cap());
            auto ext = A_->extensions(c, cap);
            if (side == Side::Plus) {
                std::optional<Subspace<S>> acc;
                for (const auto& e : ext) {
                    if (e.type != WPair::Type::DInv) continue;
                    Subspace<S> u = m_.rad(P.tail(e.gamma), deg + 1);
                    u = apply_range(c, 1, m, apply_pair(e, u, deg + 1), deg);
                    acc = acc ? acc->intersect(u) : u;
                }
                if (!acc) acc = apply_range(c, 1, m, m_.full(end_v, deg), deg);
                return *acc;
            }
            Subspace<S> acc = m_.zero(end_v, deg);
            bool any = false;
            for (const auto& e : ext) {
                if (e.type != WPair::Type::InvD) continue;
                any = true;
                acc = acc + apply_pair(e, m_.full(P.head(e.gamma), deg - 1), deg - 1);
            }
            if (!any) {
                // a trivial word ends where it starts, with its own sign
                auto [hv, hs] = c.is_trivial() ? A_->head_sign(c) : A_->inverse_head_sign(c);
                for (int a : P.arrows_with_head(hv)) {
                    if (A_->signs().arrow[a] == -hs)
                        acc = acc + m_.full(hv, deg - 1).image(m_.d_map(a, deg - 1));
                    else
                        acc = acc + m_.full(P.arrow(a).tail, deg).image(m_.path_map(Path::arrow(a), deg));
                }
            }
            return apply_range(c, 1, m, acc, deg);
        }
        // N-word: core followed by the repeated block
        const long k = static_cast<long>(c.core.size()), p = static_cast<long>(c.rcyc.size());
        int deg = n;
        for (long i = 1; i <= k; ++i) deg += c.pair_at(i).H();
        const int w = A_->vertex(c, k);
        const int drift = net(c.rcyc);
        if (drift == 0) {
            Subspace<S> u = side == Side::Plus ? m_.full(w, deg) : m_.zero(w, deg);
            for (;;) {
                Subspace<S> nx = apply_range(c, k + 1, k + p, u, deg);
                if (nx == u) break;
                u = nx;
            }
            return apply_range(c, 1, k, u, deg);
        }
        // The degrees leave the support after finitely many blocks; past that
        // point every element of a chain is zero, so both sides agree.
        int lo = 0, hi = 0, run = 0;
        for (long i = 1; i <= p; ++i) {
            run += c.pair_at(k + i).H();
            lo = std::min(lo, run);
            hi = std::max(hi, run);
        }
        const int span = (m_.max_degree() - m_.min_degree()) + (hi - lo) + std::abs(deg) + 2;
        long blocks = span / std::abs(drift) + 2;
        if (m_.empty()) blocks = 0;
        const long last = k + blocks * p;
        int end_deg = deg + static_cast<int>(blocks) * drift;
        return apply_range(c, 1, last, m_.zero(A_->vertex(c, last), end_deg), end_deg);
    }

    FunctorValue<S> refined(const FunctorIndex& idx) const {
        auto [v, sb] = A_->head_sign(idx.B);
        (void)sb;
        const int n = idx.n;
        Subspace<S> bp = one_sided(idx.B, Side::Plus, n), bm = one_sided(idx.B, Side::Minus, n);
        Subspace<S> dp = one_sided(idx.D, Side::Plus, n), dm = one_sided(idx.D, Side::Minus, n);
        Subspace<S> fp = bp.intersect(dp), fm = bp.intersect(dm) + bm.intersect(dp);
        Subspace<S> gp = bm + dp.intersect(bp), gm = bm + dm.intersect(bp);
        if (!fp.contains(fm) || !gp.contains(gm)) throw std::logic_error("refined functor: F- or G- not inside F+ or G+");
        FunctorValue<S> out;
        out.dim = fp.dim() - fm.dim();
        out.dim_g = gp.dim() - gm.dim();
        out.approximate = m_.approximate();
        if (out.dim != out.dim_g) throw std::logic_error("refined functors F and G disagree in dimension");
        out.basis = fp.complement_of(fm);
        Word c = normalize(A_->join(idx.B, idx.D));
        auto per = period(c);
        if (per) {
            // E is the first period of D; its relation on e_v M^n
            LinearRelation<S> rel = LinearRelation<S>::identity(m_.slice_dim(v, n));
            int deg = n;
            std::vector<int> degs;
            for (long i = 1; i <= *per; ++i) {
                degs.push_back(deg);
                deg += idx.D.pair_at(i).H();
            }
            for (long i = *per; i >= 1; --i) rel = compose(pair_relation(idx.D.pair_at(i), degs[i - 1] + idx.D.pair_at(i).H()), rel);
            auto aut = stable_automorphism(rel);
            if (aut.parts.sharp != fp || aut.parts.flat != fm)
                throw std::logic_error("stable parts of the period relation differ from the refined functor");
            out.basis = aut.reps;
            out.t_action = aut.theta;
        }
        return out;
    }

private:
    const Alphabet* A_;
    ExpandedModule<S> m_;
};

// ---------------------------------------------------------------------------
// Closed-form values on direct sums of string and band complexes.

template <class S> struct ExpectedValue {
    std::size_t count = 0;                 // string multiplicity, or dimension for periodic indices
    std::optional<TModule<S>> module;      // periodic indices: direct sum of matching V or res V
};

namespace functor_detail {

inline std::pair<Word, Word> axis_split(const Alphabet& A, const Word& w) {
    return {A.prefix_inverse(w, 0), A.suffix_after(w, 0)};
}

}  // namespace functor_detail

template <class S>
ExpectedValue<S> thm71_expected(const Alphabet& A, const DecompSpec<S>& spec, const FunctorIndex& idx) {
    ExpectedValue<S> out;
    Word c = normalize(A.join(idx.B, idx.D));
    const bool periodic = period(c).has_value();
    for (const auto& s : spec.strings) {
        if (periodic) break;
        auto [b, d] = functor_detail::axis_split(A, s.word);
        auto r = A.r_offset(idx.B, idx.D, b, d);
        if (r && -s.shift - idx.n == *r) ++out.count;
    }
    if (!periodic) return out;
    Matrix<S> acc(0, 0);
    for (const auto& bs : spec.bands) {
        auto [b, d] = functor_detail::axis_split(A, bs.word);
        auto e = A.equivalence(c, normalize(A.join(b, d)));
        if (!e) continue;
        auto r = A.r_offset(idx.B, idx.D, b, d);
        if (!r || -bs.shift - idx.n != *r) continue;
        acc = direct_sum(acc, e->orient > 0 ? bs.V.phi : bs.V.res().phi);
    }
    out.count = acc.rows();
    out.module = TModule<S>{acc};
    return out;
}

// Every index at which a summand of the spec is detected: the splittings of
// each summand word at each of its positions (one period for bands).
template <class S> std::vector<FunctorIndex> summand_indices(const Alphabet& A, const DecompSpec<S>& spec) {
    std::vector<FunctorIndex> out;
    auto add = [&](const Word& w, int t, long first, long last) {
        auto [b0, d0] = functor_detail::axis_split(A, w);
        for (long i = first; i <= last; ++i) {
            Word b = A.split(w, i, 1), d = A.split(w, i, -1);
            auto r = A.r_offset(b, d, b0, d0);
            if (!r) throw std::logic_error("splitting is not equivalent to its own word");
            out.push_back(make_index(A, b, d, static_cast<int>(t - *r)));
        }
    };
    for (const auto& s : spec.strings)
        if (s.word.is_finite()) add(s.word, -s.shift, 0, s.word.last_position());
    for (const auto& bs : spec.bands) add(bs.word, -bs.shift, 0, *period(normalize(bs.word)) - 1);
    return out;
}

}  // namespace gentle
