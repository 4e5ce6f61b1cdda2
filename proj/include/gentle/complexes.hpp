#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gentle/algebra.hpp"
#include "gentle/linalg.hpp"
#include "gentle/words.hpp"

namespace gentle {

// Finite-dimensional k[T,T^-1]-module: T v_k = sum_l phi(l,k) v_l.
template <class S> struct TModule {
    Matrix<S> phi;

    std::size_t dim() const { return phi.rows(); }
    static TModule identity(std::size_t n) { return {Matrix<S>::identity(n)}; }
    static TModule jordan(std::size_t n, const S& lambda) {
        Matrix<S> j(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            j(i, i) = lambda;
            if (i + 1 < n) j(i, i + 1) = S(1);
        }
        return {j};
    }
    // T and T^-1 exchanged
    TModule res() const {
        auto inv = inverse_matrix(phi);
        if (!inv) throw std::invalid_argument("T-action is singular");
        return {*inv};
    }
};

struct Generator {
    std::string name;
    int vertex;
    int degree;
};

// Degree window a complex was cut to; open edges mean generators exist beyond it.
struct Window {
    int lo = 0, hi = 0;
    bool open_below = false, open_above = false;
};

// Graded complex of projectives sum Lambda e_{v(g)}. d(b_src) = sum entry * b_dst
// with entry in e_{v(src)} Lambda e_{v(dst)} and deg(dst) = deg(src) + 1.
template <class S> class ProjComplex {
public:
    using Elem = AlgebraElem<S>;

    ProjComplex() = default;
    explicit ProjComplex(const Presentation& p) : p_(&p) {}

    const Presentation& pres() const { return *p_; }
    bool has_pres() const { return p_ != nullptr; }

    int add_generator(const std::string& name, int vertex, int degree) {
        gens_.push_back({name, vertex, degree});
        return static_cast<int>(gens_.size()) - 1;
    }
    void set_entry(int src, int dst, const Elem& e) {
        if (e.zero()) entries_.erase({src, dst});
        else entries_[{src, dst}] = e;
    }
    void add_to_entry(int src, int dst, const Elem& e) {
        Elem cur = entry(src, dst);
        cur += e;
        set_entry(src, dst, cur);
    }
    Elem entry(int src, int dst) const {
        auto it = entries_.find({src, dst});
        return it == entries_.end() ? Elem() : it->second;
    }

    std::size_t size() const { return gens_.size(); }
    const Generator& gen(int i) const { return gens_.at(i); }
    const std::vector<Generator>& generators() const { return gens_; }
    const std::map<std::pair<int, int>, Elem>& entries() const { return entries_; }
    std::optional<int> find(const std::string& name) const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name == name) return static_cast<int>(i);
        return std::nullopt;
    }

    std::vector<int> in_degree(int n) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].degree == n) out.push_back(static_cast<int>(i));
        return out;
    }
    // occupied degrees, ascending
    std::vector<int> degrees() const {
        std::vector<int> d;
        for (const auto& g : gens_) d.push_back(g.degree);
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        return d;
    }
    bool empty() const { return gens_.empty(); }

    std::optional<Window> window;  // set when cut from an unbounded complex

private:
    const Presentation* p_ = nullptr;
    std::vector<Generator> gens_;
    std::map<std::pair<int, int>, Elem> entries_;
};

struct VerifyReport {
    bool d_squared_zero = true;
    bool radical_images = true;
    bool well_typed = true;
    bool approximate = false;  // products hit the path-length cap
    std::vector<std::string> witnesses;
    bool ok() const { return d_squared_zero && radical_images && well_typed; }
};

template <class S> VerifyReport verify(const ProjComplex<S>& x) {
    VerifyReport r;
    const auto& P = x.pres();
    std::map<int, std::vector<std::pair<int, const AlgebraElem<S>*>>> out;
    for (const auto& [k, e] : x.entries()) {
        auto [src, dst] = k;
        out[src].push_back({dst, &e});
        const auto &gs = x.gen(src), &gd = x.gen(dst);
        if (gd.degree != gs.degree + 1) {
            if (r.well_typed) r.witnesses.push_back("entry " + gs.name + " -> " + gd.name + " does not raise degree by one");
            r.well_typed = false;
        }
        for (const auto& [path, c] : e.terms()) {
            if (P.head(path) != gs.vertex || P.tail(path) != gd.vertex) {
                if (r.well_typed)
                    r.witnesses.push_back("entry " + gs.name + " -> " + gd.name + " has term " + P.path_str(path) +
                                          " with the wrong end vertices");
                r.well_typed = false;
            }
            if (path.is_trivial()) {
                if (r.radical_images) r.witnesses.push_back("entry " + gs.name + " -> " + gd.name + " has a constant term");
                r.radical_images = false;
            }
        }
        if (e.truncated()) r.approximate = true;
    }
    for (std::size_t s = 0; s < x.size(); ++s) {
        std::map<int, AlgebraElem<S>> sq;
        for (auto [mid, e1] : out[static_cast<int>(s)])
            for (auto [dst, e2] : out[mid]) sq[dst] += multiply(P, *e1, *e2);
        for (const auto& [dst, e] : sq) {
            if (e.truncated()) r.approximate = true;
            if (!e.zero()) {
                if (r.d_squared_zero)
                    r.witnesses.push_back("d^2 of " + x.gen(static_cast<int>(s)).name + " has " + elem_str(P, e) + " at " +
                                          x.gen(dst).name);
                r.d_squared_zero = false;
            }
        }
    }
    return r;
}

// X[m]: X[m]^n = X^{n+m}. No sign change on the differential.
template <class S> ProjComplex<S> shift(const ProjComplex<S>& x, int m) {
    ProjComplex<S> r(x.pres());
    for (const auto& g : x.generators()) r.add_generator(g.name, g.vertex, g.degree - m);
    for (const auto& [k, e] : x.entries()) r.set_entry(k.first, k.second, e);
    if (x.window) r.window = Window{x.window->lo - m, x.window->hi - m, x.window->open_below, x.window->open_above};
    return r;
}

// Generator names get a "s<k>:" prefix when the parts are more than one.
template <class S> ProjComplex<S> direct_sum(const Presentation& p, const std::vector<ProjComplex<S>>& xs) {
    ProjComplex<S> r(p);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const int base = static_cast<int>(r.size());
        for (const auto& g : xs[k].generators())
            r.add_generator(xs.size() > 1 ? "s" + std::to_string(k) + "." + g.name : g.name, g.vertex, g.degree);
        for (const auto& [key, e] : xs[k].entries()) r.set_entry(base + key.first, base + key.second, e);
        if (xs[k].window) {
            if (!r.window) r.window = xs[k].window;
            else {
                r.window->lo = std::max(r.window->lo, xs[k].window->lo);
                r.window->hi = std::min(r.window->hi, xs[k].window->hi);
                r.window->open_below = r.window->open_below || xs[k].window->open_below;
                r.window->open_above = r.window->open_above || xs[k].window->open_above;
            }
        }
    }
    return r;
}

// Contractible D^n(Lambda e_v): generators in degrees n and n+1 joined by e_v.
template <class S> ProjComplex<S> contractible(const Presentation& p, int vertex, int n) {
    ProjComplex<S> r(p);
    int a = r.add_generator("c0", vertex, n), b = r.add_generator("c1", vertex, n + 1);
    r.set_entry(a, b, AlgebraElem<S>::idempotent(vertex));
    return r;
}

// Square matrices over the algebra.
template <class S> using AlgMatrix = std::vector<std::vector<AlgebraElem<S>>>;

template <class S> AlgMatrix<S> alg_mul(const Presentation& p, const AlgMatrix<S>& a, const AlgMatrix<S>& b) {
    const std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size();
    AlgMatrix<S> r(n, std::vector<AlgebraElem<S>>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (a[i][k].zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[k][j].zero()) r[i][j] += multiply(p, a[i][k], b[k][j]);
        }
    return r;
}

// Inverse of a square matrix over the algebra whose rows/columns carry the given
// vertices; nullopt when the constant part is singular. Geometric series in the
// radical part, exact for finite-dimensional algebras.
template <class S>
std::optional<AlgMatrix<S>> alg_inverse(const Presentation& p, const AlgMatrix<S>& g, const std::vector<int>& verts) {
    const std::size_t n = g.size();
    Matrix<S> g0(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (verts[i] == verts[j]) g0(i, j) = g[i][j].constant_at(verts[i]);
    auto inv0 = inverse_matrix(g0);
    if (!inv0) return std::nullopt;
    AlgMatrix<S> k0(n, std::vector<AlgebraElem<S>>(n)), rad(n, std::vector<AlgebraElem<S>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!is_zero((*inv0)(i, j))) k0[i][j] = AlgebraElem<S>::path(Path::trivial(verts[i]), (*inv0)(i, j));
            rad[i][j] = g[i][j];
            if (verts[i] == verts[j]) rad[i][j].add(Path::trivial(verts[i]), -g[i][j].constant_at(verts[i]));
        }
    // g = g0 (1 + m) with m = g0^-1 rad;  g^-1 = sum (-m)^k g0^-1
    AlgMatrix<S> m = alg_mul(p, k0, rad);
    AlgMatrix<S> term = k0, sum = k0;
    for (int k = 0; k <= p.cap() + 1; ++k) {
        term = alg_mul(p, m, term);
        bool zero = true;
        for (auto& row : term)
            for (auto& e : row) {
                e = -e;
                if (!e.zero()) zero = false;
            }
        if (zero) break;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) sum[i][j] += term[i][j];
    }
    return sum;
}

// Change of basis b'_i = sum_j G^n_ij b_j in each listed degree (generator
// order of in_degree(n)); unlisted degrees keep their basis.
template <class S>
ProjComplex<S> apply_graded_iso(const ProjComplex<S>& x, const std::map<int, AlgMatrix<S>>& g) {
    const auto& P = x.pres();
    std::map<int, AlgMatrix<S>> ginv;
    for (const auto& [n, m] : g) {
        auto idx = x.in_degree(n);
        if (m.size() != idx.size()) throw std::invalid_argument("graded iso has the wrong size in degree " + std::to_string(n));
        std::vector<int> verts;
        for (int i : idx) verts.push_back(x.gen(i).vertex);
        auto inv = alg_inverse(P, m, verts);
        if (!inv) throw std::invalid_argument("graded map is not invertible in degree " + std::to_string(n));
        ginv[n] = *inv;
    }
    ProjComplex<S> r(P);
    for (const auto& gn : x.generators()) r.add_generator(gn.name, gn.vertex, gn.degree);
    r.window = x.window;
    for (int n : x.degrees()) {
        auto src = x.in_degree(n), dst = x.in_degree(n + 1);
        if (dst.empty()) continue;
        AlgMatrix<S> e(src.size(), std::vector<AlgebraElem<S>>(dst.size()));
        for (std::size_t i = 0; i < src.size(); ++i)
            for (std::size_t j = 0; j < dst.size(); ++j) e[i][j] = x.entry(src[i], dst[j]);
        if (auto it = g.find(n); it != g.end()) e = alg_mul(P, it->second, e);
        if (auto it = ginv.find(n + 1); it != ginv.end()) e = alg_mul(P, e, it->second);
        for (std::size_t i = 0; i < src.size(); ++i)
            for (std::size_t j = 0; j < dst.size(); ++j) r.set_entry(src[i], dst[j], e[i][j]);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Builders

// Index range of generators of P(C) with degree in [lo, hi]; for finite words
// the whole index set. Throws without controlled homogeny.
struct IndexRange {
    long first = 0, last = 0;
    bool open_below = false, open_above = false;
};
IndexRange index_range(const Word& c, int lo, int hi);

template <class S>
ProjComplex<S> build_string(const Alphabet& A, const Word& c, std::optional<std::pair<int, int>> window = std::nullopt) {
    const auto& P = A.pres();
    ProjComplex<S> x(P);
    if (c.is_trivial()) {
        x.add_generator("b0", c.vertex, 0);
        return x;
    }
    if (!c.is_finite() && !controlled_homogeny(c))
        throw std::invalid_argument("word without controlled homogeny has infinitely generated components");
    if (!c.is_finite() && !window) throw std::invalid_argument("an infinite word needs a degree window");
    IndexRange r = c.is_finite() ? IndexRange{0, c.last_position()} : index_range(c, window->first, window->second);
    std::map<long, int> id;
    for (long i = r.first; i <= r.last; ++i) {
        long m = mu(c, i);
        if (!c.is_finite() && (m < window->first || m > window->second)) continue;
        id[i] = x.add_generator("b" + std::to_string(i), A.vertex(c, i), static_cast<int>(m));
    }
    for (const auto& [i, g] : id) {
        if (c.has_pair(i + 1) && c.pair_at(i + 1).type == WPair::Type::DInv)
            if (auto it = id.find(i + 1); it != id.end()) x.set_entry(g, it->second, AlgebraElem<S>::path(c.pair_at(i + 1).gamma));
        if (c.has_pair(i) && c.pair_at(i).type == WPair::Type::InvD)
            if (auto it = id.find(i - 1); it != id.end()) x.set_entry(g, it->second, AlgebraElem<S>::path(c.pair_at(i).gamma));
    }
    if (!c.is_finite()) x.window = Window{window->first, window->second, r.open_below, r.open_above};
    return x;
}

// Band complex: generators b_j (x) v_k for j in [0, p) in degree mu(j), with
// b_{j-p} (x) v = b_j (x) T v.
template <class S> ProjComplex<S> build_band(const Alphabet& A, const Word& c, const TModule<S>& V) {
    const auto& P = A.pres();
    Word w = normalize(c);
    auto per = period(w);
    if (!per) throw std::invalid_argument("band complexes need a periodic Z-word with zero net homogeny");
    auto phi_inv = inverse_matrix(V.phi);
    if (!phi_inv) throw std::invalid_argument("T-action is singular");
    const long p = *per;
    const std::size_t n = V.dim();
    ProjComplex<S> x(P);
    for (long j = 0; j < p; ++j)
        for (std::size_t k = 0; k < n; ++k)
            x.add_generator("b" + std::to_string(j) + "." + std::to_string(k), A.vertex(w, j), static_cast<int>(mu(w, j)));
    auto gid = [&](long j, std::size_t k) { return static_cast<int>(j * static_cast<long>(n) + static_cast<long>(k)); };
    auto place = [&](long j, long jt, const Path& gamma, const Matrix<S>& m) {
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                if (!is_zero(m(l, k))) x.add_to_entry(gid(j, k), gid(jt, l), AlgebraElem<S>::path(gamma, m(l, k)));
    };
    const Matrix<S> id = Matrix<S>::identity(n);
    for (long j = 0; j < p; ++j) {
        const WPair& next = w.pair_at(j + 1);
        if (next.type == WPair::Type::DInv) place(j, (j + 1) % p, next.gamma, j + 1 == p ? *phi_inv : id);
        const WPair& here = w.pair_at(j == 0 ? p : j);
        if (here.type == WPair::Type::InvD) place(j, j == 0 ? p - 1 : j - 1, here.gamma, j == 0 ? V.phi : id);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Expanded k-linear structure: Lambda e_v has basis the paths with tail v.

struct ExpandedBasis {
    std::vector<std::pair<int, Path>> elems;  // (generator, path)
    bool truncated = false;
    std::optional<std::size_t> index_of(int g, const Path& q) const {
        for (std::size_t i = 0; i < elems.size(); ++i)
            if (elems[i].first == g && elems[i].second == q) return i;
        return std::nullopt;
    }
};

template <class S> ExpandedBasis expanded_basis(const ProjComplex<S>& x, int n) {
    ExpandedBasis b;
    const auto& P = x.pres();
    const bool finite = P.dimension().has_value();
    for (int g : x.in_degree(n))
        for (const auto& q : P.paths_from_tail(x.gen(g).vertex, static_cast<std::size_t>(P.cap()))) b.elems.push_back({g, q});
    b.truncated = !finite;
    return b;
}

// Matrix of d^n on expanded bases (row convention: row of source element).
template <class S> Matrix<S> differential_matrix(const ProjComplex<S>& x, int n, const ExpandedBasis& src, const ExpandedBasis& dst) {
    const auto& P = x.pres();
    Matrix<S> m(src.elems.size(), dst.elems.size());
    std::map<std::pair<int, std::vector<int>>, std::size_t> col;
    std::map<int, std::size_t> triv;
    for (std::size_t j = 0; j < dst.elems.size(); ++j) {
        const auto& [g, q] = dst.elems[j];
        if (q.is_trivial()) triv[g] = j;
        else col[{g, q.arrows}] = j;
    }
    (void)n;
    for (std::size_t i = 0; i < src.elems.size(); ++i) {
        const auto& [g, sigma] = src.elems[i];
        for (const auto& [key, e] : x.entries()) {
            if (key.first != g) continue;
            for (const auto& [path, c] : e.terms()) {
                auto z = P.concat(sigma, path);
                if (!z) continue;
                if (z->is_trivial()) {
                    if (auto it = triv.find(key.second); it != triv.end()) m(i, it->second) += c;
                } else if (auto it = col.find({key.second, z->arrows}); it != col.end()) {
                    m(i, it->second) += c;
                }
            }
        }
    }
    return m;
}

struct HomologyReport {
    std::map<int, std::optional<std::size_t>> dims;  // nullopt: unknown at an open window edge
    bool approximate = false;
};

// dim ker d^n - rank d^{n-1} for n in [lo, hi].
template <class S> HomologyReport homology(const ProjComplex<S>& x, int lo, int hi, bool allow_truncation = false) {
    HomologyReport rep;
    const auto& P = x.pres();
    if (!P.dimension() && !allow_truncation)
        throw std::invalid_argument("homology over an infinite-dimensional algebra needs truncation enabled");
    rep.approximate = !P.dimension().has_value();
    std::map<int, ExpandedBasis> bases;
    auto basis = [&](int n) -> const ExpandedBasis& {
        auto it = bases.find(n);
        if (it == bases.end()) it = bases.emplace(n, expanded_basis(x, n)).first;
        return it->second;
    };
    auto rank_of = [&](int n) -> std::size_t {
        const auto &a = basis(n), &b = basis(n + 1);
        if (a.elems.empty() || b.elems.empty()) return 0;
        return rank(differential_matrix(x, n, a, b));
    };
    for (int n = lo; n <= hi; ++n) {
        bool known = true;
        if (x.window) {
            if (x.window->open_below && n - 1 < x.window->lo) known = false;
            if (x.window->open_above && n + 1 > x.window->hi) known = false;
        }
        if (!known) {
            rep.dims[n] = std::nullopt;
            continue;
        }
        rep.dims[n] = basis(n).elems.size() - rank_of(n) - rank_of(n - 1);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Minimisation: split off D^n(Lambda e_v) along entries with a constant term.

template <class S> struct MinimizeResult {
    ProjComplex<S> complex;
    std::vector<std::pair<int, int>> stripped;  // (degree n, vertex v) of D^n(Lambda e_v)
};

template <class S> MinimizeResult<S> minimize(const ProjComplex<S>& x) {
    const auto& P = x.pres();
    std::vector<Generator> gens = x.generators();
    std::map<std::pair<int, int>, AlgebraElem<S>> ent(x.entries().begin(), x.entries().end());
    std::vector<bool> alive(gens.size(), true);
    MinimizeResult<S> res;
    for (;;) {
        std::optional<std::pair<int, int>> piv;
        for (const auto& [k, e] : ent)
            if (alive[k.first] && alive[k.second] && e.has_constant_term() && gens[k.first].vertex == gens[k.second].vertex &&
                !is_zero(e.constant_at(gens[k.first].vertex))) {
                piv = k;
                break;
            }
        if (!piv) break;
        auto [s, t] = *piv;
        auto uinv = invert_local(P, ent[{s, t}], gens[s].vertex);
        if (!uinv) throw std::runtime_error("minimize: pivot is not invertible");
        // rows into t (other than s) and columns out of s (other than t)
        std::vector<std::pair<int, AlgebraElem<S>>> into_t, out_of_s;
        for (const auto& [k, e] : ent) {
            if (k.second == t && k.first != s && alive[k.first]) into_t.push_back({k.first, e});
            if (k.first == s && k.second != t && alive[k.second]) out_of_s.push_back({k.second, e});
        }
        for (const auto& [i, eit] : into_t) {
            AlgebraElem<S> f = multiply(P, eit, *uinv);
            for (const auto& [k, esk] : out_of_s) {
                AlgebraElem<S> cur = ent.count({i, k}) ? ent[{i, k}] : AlgebraElem<S>();
                cur += -multiply(P, f, esk);
                if (cur.zero()) ent.erase({i, k});
                else ent[{i, k}] = cur;
            }
        }
        alive[s] = alive[t] = false;
        for (auto it = ent.begin(); it != ent.end();) {
            if (!alive[it->first.first] || !alive[it->first.second]) it = ent.erase(it);
            else ++it;
        }
        res.stripped.push_back({gens[s].degree, gens[s].vertex});
    }
    ProjComplex<S> m(P);
    std::vector<int> newid(gens.size(), -1);
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (alive[i]) newid[i] = m.add_generator(gens[i].name, gens[i].vertex, gens[i].degree);
    for (const auto& [k, e] : ent) m.set_entry(newid[k.first], newid[k.second], e);
    m.window = x.window;
    res.complex = std::move(m);
    return res;
}

// ---------------------------------------------------------------------------
// Text format:
//   window: LO..HI [open-below] [open-above]    (optional)
//   degree N: gen NAME@VERTEX gen NAME@VERTEX ...
//   d N: SRC -> DST : EXPR

template <class S> std::string serialize_complex(const ProjComplex<S>& x) {
    const auto& P = x.pres();
    std::string out;
    if (x.window)
        out += "window: " + std::to_string(x.window->lo) + ".." + std::to_string(x.window->hi) +
               (x.window->open_below ? " open-below" : "") + (x.window->open_above ? " open-above" : "") + "\n";
    for (int n : x.degrees()) {
        out += "degree " + std::to_string(n) + ":";
        for (int g : x.in_degree(n)) out += " gen " + x.gen(g).name + "@" + P.vertex_name(x.gen(g).vertex);
        out += "\n";
    }
    for (int n : x.degrees())
        for (int s : x.in_degree(n))
            for (int t : x.in_degree(n + 1)) {
                auto e = x.entry(s, t);
                if (!e.zero())
                    out += "d " + std::to_string(n) + ": " + x.gen(s).name + " -> " + x.gen(t).name + " : " + elem_str(P, e) + "\n";
            }
    return out;
}

template <class S> ProjComplex<S> parse_complex(const Presentation& P, const std::string& text);

// ---------------------------------------------------------------------------
// Direct sums of shifted string and band complexes.

template <class S> struct StringSummand {
    Word word;
    int shift = 0;  // the summand is P(word)[shift]
};
template <class S> struct BandSummand {
    Word word;
    TModule<S> V;
    int shift = 0;
};
template <class S> struct DecompSpec {
    std::vector<StringSummand<S>> strings;
    std::vector<BandSummand<S>> bands;
    bool empty() const { return strings.empty() && bands.empty(); }
};

template <class S>
ProjComplex<S> realize(const Alphabet& A, const DecompSpec<S>& spec, std::optional<std::pair<int, int>> window = std::nullopt) {
    std::vector<ProjComplex<S>> parts;
    for (const auto& s : spec.strings) {
        std::optional<std::pair<int, int>> w;
        if (window) w = std::make_pair(window->first + s.shift, window->second + s.shift);
        parts.push_back(shift(build_string<S>(A, s.word, s.word.is_finite() ? std::nullopt : w), s.shift));
    }
    for (const auto& b : spec.bands) parts.push_back(shift(build_band<S>(A, b.word, b.V), b.shift));
    return direct_sum(A.pres(), parts);
}

}  // namespace gentle
