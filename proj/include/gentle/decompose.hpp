#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gentle/complexes.hpp"
#include "gentle/functors.hpp"
#include "gentle/linalg.hpp"
#include "gentle/words.hpp"

namespace gentle {

// ---------------------------------------------------------------------------
// Isomorphism of shifted string and band complexes.

struct IsoResult {
    bool iso = false;
    std::optional<Equivalence> equivalence;  // second word = first^{orient}[shift]
    std::string reason;
};

namespace decompose_detail {

// Position of the (single) axis split of a word, as used by the closed-form values.
inline std::pair<Word, Word> axis_pair(const Alphabet& A, const Word& w) {
    return {A.prefix_inverse(w, 0), A.suffix_after(w, 0)};
}

// Offset r with: a summand (w2, s2) is detected at the axis index of w1 in
// degree n iff -s2 - n == r.
inline std::optional<long> offset(const Alphabet& A, const Word& w1, const Word& w2) {
    auto [b1, d1] = axis_pair(A, w1);
    auto [b2, d2] = axis_pair(A, w2);
    return A.r_offset(b1, d1, b2, d2);
}

}  // namespace decompose_detail

template <class S> IsoResult isomorphic(const Alphabet& A, const StringSummand<S>& a, const StringSummand<S>& b) {
    IsoResult r;
    Word wa = normalize(a.word), wb = normalize(b.word);
    r.equivalence = A.equivalence(wa, wb);
    if (!r.equivalence) {
        r.reason = "words are not equivalent";
        return r;
    }
    auto off = decompose_detail::offset(A, wa, wb);
    if (!off) throw std::logic_error("equivalent words without an offset");
    // (wa, sa) sits at the axis index in degree -sa
    if (-b.shift + a.shift != *off) {
        r.reason = "shift differs by " + std::to_string(-b.shift + a.shift - *off);
        return r;
    }
    r.iso = true;
    return r;
}

template <class S> IsoResult isomorphic(const Alphabet& A, const BandSummand<S>& a, const BandSummand<S>& b) {
    IsoResult r;
    Word wa = normalize(a.word), wb = normalize(b.word);
    r.equivalence = A.equivalence(wa, wb);
    if (!r.equivalence) {
        r.reason = "words are not equivalent";
        return r;
    }
    auto off = decompose_detail::offset(A, wa, wb);
    if (!off) throw std::logic_error("equivalent words without an offset");
    if (-b.shift + a.shift != *off) {
        r.reason = "shift differs by " + std::to_string(-b.shift + a.shift - *off);
        return r;
    }
    const TModule<S> w = r.equivalence->orient > 0 ? b.V : b.V.res();
    if (a.V.dim() != w.dim() || (a.V.dim() > 0 && !similar(a.V.phi, w.phi).similar)) {
        r.reason = "T-modules are not isomorphic";
        return r;
    }
    r.iso = true;
    return r;
}

template <class S> IsoResult isomorphic(const Alphabet&, const StringSummand<S>&, const BandSummand<S>&) {
    return {false, std::nullopt, "string and band complexes are never isomorphic"};
}
template <class S> IsoResult isomorphic(const Alphabet&, const BandSummand<S>&, const StringSummand<S>&) {
    return {false, std::nullopt, "string and band complexes are never isomorphic"};
}

// ---------------------------------------------------------------------------
// Krull-Remak-Schmidt comparison of two decompositions.

struct KrsResult {
    bool ok = false;
    // (is_band, index in first spec, index in second spec)
    std::vector<std::tuple<bool, std::size_t, std::size_t>> bijection;
    std::string mismatch;
};

template <class S> KrsResult krs_check(const Alphabet& A, const DecompSpec<S>& x, const DecompSpec<S>& y) {
    KrsResult out;
    if (x.strings.size() != y.strings.size()) {
        out.mismatch = "string counts differ: " + std::to_string(x.strings.size()) + " vs " + std::to_string(y.strings.size());
        return out;
    }
    std::vector<bool> used(y.strings.size(), false);
    for (std::size_t i = 0; i < x.strings.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < y.strings.size() && !found; ++j)
            if (!used[j] && isomorphic(A, x.strings[i], y.strings[j]).iso) {
                used[j] = found = true;
                out.bijection.emplace_back(false, i, j);
            }
        if (!found) {
            out.mismatch = "no partner for string " + A.str(x.strings[i].word) + " @ " + std::to_string(x.strings[i].shift);
            return out;
        }
    }
    // Bands: group by word class and shift; within a group compare the sum of
    // T-modules, oriented like the group's first member.
    struct Group {
        BandSummand<S> ref;
        std::vector<std::size_t> xs, ys;
        Matrix<S> sx = Matrix<S>(0, 0), sy = Matrix<S>(0, 0);
    };
    std::vector<Group> groups;
    auto place = [&](const BandSummand<S>& b, std::size_t idx, bool first) -> bool {
        for (auto& g : groups) {
            Word wr = normalize(g.ref.word), wb = normalize(b.word);
            auto e = A.equivalence(wr, wb);
            if (!e) continue;
            auto off = decompose_detail::offset(A, wr, wb);
            if (!off || -b.shift + g.ref.shift != *off) continue;
            const Matrix<S> phi = e->orient > 0 ? b.V.phi : b.V.res().phi;
            if (first) {
                g.xs.push_back(idx);
                g.sx = direct_sum(g.sx, phi);
            } else {
                g.ys.push_back(idx);
                g.sy = direct_sum(g.sy, phi);
            }
            return true;
        }
        if (!first) return false;
        Group g{b, {idx}, {}, b.V.phi, Matrix<S>(0, 0)};
        groups.push_back(std::move(g));
        return true;
    };
    for (std::size_t i = 0; i < x.bands.size(); ++i) place(x.bands[i], i, true);
    for (std::size_t j = 0; j < y.bands.size(); ++j)
        if (!place(y.bands[j], j, false)) {
            out.mismatch = "no partner for band " + A.str(y.bands[j].word) + " @ " + std::to_string(y.bands[j].shift);
            return out;
        }
    for (const auto& g : groups) {
        if (g.sx.rows() != g.sy.rows() || (g.sx.rows() > 0 && !similar(g.sx, g.sy).similar)) {
            out.mismatch = "band T-modules differ for " + A.str(g.ref.word) + " @ " + std::to_string(g.ref.shift);
            return out;
        }
        // pair members greedily by individual isomorphism, then in order
        std::vector<bool> taken(g.ys.size(), false);
        std::vector<std::size_t> left;
        for (auto i : g.xs) {
            bool hit = false;
            for (std::size_t k = 0; k < g.ys.size() && !hit; ++k)
                if (!taken[k] && isomorphic(A, x.bands[i], y.bands[g.ys[k]]).iso) {
                    taken[k] = hit = true;
                    out.bijection.emplace_back(true, i, g.ys[k]);
                }
            if (!hit) left.push_back(i);
        }
        std::size_t k = 0;
        for (auto i : left) {
            while (k < g.ys.size() && taken[k]) ++k;
            if (k == g.ys.size()) break;
            taken[k] = true;
            out.bijection.emplace_back(true, i, g.ys[k]);
        }
    }
    out.ok = true;
    return out;
}

// ---------------------------------------------------------------------------
// Splitting a band T-module into blocks.

template <class S> std::vector<Matrix<S>> band_blocks(const Matrix<S>& phi) {
    std::vector<Matrix<S>> out;
    for (const auto& f : invariant_factors(phi)) out.push_back(companion(f));
    return out;
}

// over F_p the blocks are indecomposable: one companion matrix per q^e
inline std::vector<Matrix<Fp>> band_blocks(const Matrix<Fp>& phi) {
    auto ed = elementary_divisors(phi);
    if (!ed) {
        std::vector<Matrix<Fp>> out;
        for (const auto& f : invariant_factors(phi)) out.push_back(companion(f));
        return out;
    }
    std::vector<Matrix<Fp>> out;
    for (const auto& [q, e] : *ed) {
        Poly<Fp> f = Poly<Fp>::constant(Fp(1));
        for (int i = 0; i < e; ++i) f = f * q;
        out.push_back(companion(f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Decomposition of a bounded complex.

struct DecomposeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DecomposeStats {
    std::size_t candidates = 0;   // nodes of the word search that survived pruning
    std::size_t classes = 0;      // distinct word classes evaluated
    std::size_t evaluations = 0;  // refined-functor evaluations
    std::vector<std::pair<int, int>> stripped;  // contractibles removed by minimize
};

namespace decompose_detail {

template <class S> class Search {
public:
    Search(const Alphabet& A, const FunctorEngine<S>& eng, std::size_t max_len)
        : A_(A), eng_(eng), m_(eng.module()), max_len_(max_len) {}

    // Some generator's word starts with D': D'M and D'0 differ modulo the radical.
    bool realized(const Word& w) const {
        const int v = A_.head_sign(w).first;
        const long len = w.length();
        const int end_v = A_.vertex(w, len);
        int drift = 0;
        for (long i = 1; i <= len; ++i) drift += w.pair_at(i).H();
        for (int n = m_.min_degree(); n <= m_.max_degree(); ++n) {
            if (m_.slice_dim(v, n) == 0) continue;
            const int end_deg = n + drift;
            const Subspace<S> rad = m_.rad(v, n);
            Subspace<S> hi = eng_.apply_range(w, 1, len, m_.full(end_v, end_deg), end_deg) + rad;
            Subspace<S> lo = eng_.apply_range(w, 1, len, m_.zero(end_v, end_deg), end_deg) + rad;
            if (hi.dim() != lo.dim()) return true;
        }
        return false;
    }

    void run(std::size_t depth_limit) {
        const auto& P = A_.pres();
        for (std::size_t v = 0; v < P.num_vertices(); ++v)
            for (int delta : {1, -1}) {
                Word root = Word::trivial(static_cast<int>(v), delta);
                if (!realized(root)) continue;
                visit(root, depth_limit);
            }
    }

    std::map<std::string, Word> strings, bands;  // class key -> representative
    std::size_t nodes = 0;

private:
    void visit(const Word& w, std::size_t depth_left) {
        ++nodes;
        note(w);
        if (depth_left == 0) return;
        for (const auto& e : A_.extensions(w, max_len_)) {
            if (!A_.can_append(w, e)) continue;
            Word nx = A_.append(w, e);
            if (!realized(nx)) continue;
            visit(nx, depth_left - 1);
        }
    }

    void note(const Word& w) {
        auto cls = A_.canonical_class(w);
        strings.emplace(cls.key, cls.rep);
        if (w.is_trivial()) return;
        // closing the block into a band
        const long p = w.length();
        if (A_.check_consecutive(w.pair_at(p), w.pair_at(1))) return;
        if (net(w.core) != 0) return;
        Word z;
        z.shape = Shape::Bi;
        z.rcyc = w.core;
        z.lcyc = w.core;
        Word band = A_.make(z);
        auto per = period(band);
        if (!per || *per != p) return;  // a proper power; its root is found separately
        auto bc = A_.canonical_class(band);
        bands.emplace(bc.key, bc.rep);
    }

    const Alphabet& A_;
    const FunctorEngine<S>& eng_;
    const ExpandedModule<S>& m_;
    std::size_t max_len_;
};

template <class S> std::map<std::pair<int, int>, long> generator_counts(const ProjComplex<S>& x) {
    std::map<std::pair<int, int>, long> c;
    for (const auto& g : x.generators()) ++c[{g.degree, g.vertex}];
    return c;
}

}  // namespace decompose_detail

template <class S>
DecompSpec<S> decompose(const Alphabet& A, const ProjComplex<S>& x, DecomposeStats* stats = nullptr) {
    const auto& P = A.pres();
    if (!P.dimension()) throw std::invalid_argument("decompose needs a finite-dimensional algebra");
    if (x.window && (x.window->open_below || x.window->open_above))
        throw std::invalid_argument("decompose needs a bounded complex");
    auto mr = minimize(x);
    const ProjComplex<S>& m = mr.complex;
    DecompSpec<S> spec;
    DecomposeStats st;
    st.stripped = mr.stripped;
    if (m.empty()) {
        if (stats) *stats = st;
        return spec;
    }
    FunctorEngine<S> eng(A, m);
    const auto& mod = eng.module();
    const std::size_t L = m.size();
    decompose_detail::Search<S> search(A, eng, static_cast<std::size_t>(P.cap()));
    search.run(L);
    st.candidates = search.nodes;
    st.classes = search.strings.size() + search.bands.size();

    auto index_at = [&](const Word& rep, int n) {
        auto [b, d] = decompose_detail::axis_pair(A, rep);
        return make_index(A, b, d, n);
    };
    for (const auto& [key, rep] : search.strings) {
        for (int n = mod.min_degree(); n <= mod.max_degree(); ++n) {
            if (mod.slice_dim(A.head_sign(decompose_detail::axis_pair(A, rep).second).first, n) == 0) continue;
            auto val = eng.refined(index_at(rep, n));
            ++st.evaluations;
            for (std::size_t k = 0; k < val.dim; ++k) spec.strings.push_back({rep, -n});
        }
    }
    for (const auto& [key, rep] : search.bands) {
        for (int n = mod.min_degree(); n <= mod.max_degree(); ++n) {
            if (mod.slice_dim(A.head_sign(decompose_detail::axis_pair(A, rep).second).first, n) == 0) continue;
            auto val = eng.refined(index_at(rep, n));
            ++st.evaluations;
            if (val.dim == 0) continue;
            if (!val.t_action) throw std::logic_error("band index without a T-action");
            for (auto& blk : band_blocks(*val.t_action)) spec.bands.push_back({rep, TModule<S>{blk}, -n});
        }
    }

    // audit: generators per (degree, vertex)
    auto want = decompose_detail::generator_counts(m);
    auto got = decompose_detail::generator_counts(realize(A, spec));
    if (want != got) {
        std::string msg = "generator audit failed:";
        std::set<std::pair<int, int>> keys;
        for (const auto& [k, c] : want) keys.insert(k);
        for (const auto& [k, c] : got) keys.insert(k);
        for (const auto& k : keys) {
            long a = want.count(k) ? want.at(k) : 0, b = got.count(k) ? got.at(k) : 0;
            if (a != b)
                msg += " degree " + std::to_string(k.first) + " vertex " + P.vertex_name(k.second) + " has " +
                       std::to_string(a) + " but the summands give " + std::to_string(b) + ";";
        }
        throw DecomposeError(msg);
    }
    if (stats) *stats = st;
    return spec;
}

// ---------------------------------------------------------------------------
// Singularity category data for finite-dimensional gentle algebras.

struct CycleEntry {
    std::vector<int> arrows;
    std::string name;  // arrow names concatenated
    std::size_t length = 0;
    Word acyclic;
};

struct SingularityReport {
    bool ok = false;
    std::string error;
    std::vector<CycleEntry> cycles;
};

inline SingularityReport singularity_report(const Alphabet& A) {
    const auto& P = A.pres();
    SingularityReport r;
    if (P.has_rho_avoiding_cycle()) {
        r.error = "hypothesis violated: the quiver has an oriented cycle without relations, so the algebra is infinite-dimensional";
        return r;
    }
    for (const auto& c : P.full_cycles()) {
        CycleEntry e;
        e.arrows = c;
        for (int a : c) e.name += P.arrow(a).name;
        e.length = c.size();
        e.acyclic = A.acyclic_word(c);
        r.cycles.push_back(std::move(e));
    }
    r.ok = true;
    return r;
}

}  // namespace gentle
