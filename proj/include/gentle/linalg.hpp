#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gentle/scalar.hpp"

namespace gentle {

// Dense matrix over an exact field. Vectors are rows; a matrix F of shape
// n x m represents the map v |-> v F from S^n to S^m.
template <class S> class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c, S(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }
    static Matrix from_rows(const std::vector<std::vector<S>>& rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("ragged rows");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static Matrix row_vector(const std::vector<S>& v) { return from_rows({v}, v.size()); }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    bool empty() const { return r_ == 0 || c_ == 0; }

    S& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    std::vector<S> row(std::size_t i) const {
        return std::vector<S>(a_.begin() + i * c_, a_.begin() + (i + 1) * c_);
    }
    void set_row(std::size_t i, const std::vector<S>& v) {
        for (std::size_t j = 0; j < c_; ++j) (*this)(i, j) = v[j];
    }
    void append_row(const std::vector<S>& v) {
        if (r_ == 0 && c_ == 0) c_ = v.size();
        if (v.size() != c_) throw std::invalid_argument("row length mismatch");
        a_.insert(a_.end(), v.begin(), v.end());
        ++r_;
    }
    void swap_rows(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < c_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }

    Matrix operator*(const Matrix& o) const {
        if (c_ != o.r_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix m(r_, o.c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                const S& x = (*this)(i, k);
                if (is_zero(x)) continue;
                for (std::size_t j = 0; j < o.c_; ++j) m(i, j) += x * o(k, j);
            }
        return m;
    }
    Matrix operator+(const Matrix& o) const {
        check_same(o);
        Matrix m = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
        return m;
    }
    Matrix operator-(const Matrix& o) const {
        check_same(o);
        Matrix m = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
        return m;
    }
    Matrix operator-() const {
        Matrix m = *this;
        for (auto& x : m.a_) x = -x;
        return m;
    }
    Matrix scaled(const S& s) const {
        Matrix m = *this;
        for (auto& x : m.a_) x *= s;
        return m;
    }
    bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero_matrix() const {
        for (const auto& x : a_)
            if (!is_zero(x)) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix m(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix m(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
        return m;
    }
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < r_; ++i) {
            if (i) os << "; ";
            for (std::size_t j = 0; j < c_; ++j) os << (j ? " " : "") << to_string((*this)(i, j));
        }
        os << "]";
        return os.str();
    }

private:
    void check_same(const Matrix& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("matrix shape mismatch");
    }
    std::size_t r_ = 0, c_ = 0;
    std::vector<S> a_;
};

template <class S> Matrix<S> vstack(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.rows() == 0) return Matrix<S>(b.rows(), a.cols() ? a.cols() : b.cols()) + b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack width mismatch");
    Matrix<S> m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

template <class S> Matrix<S> hstack(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack height mismatch");
    Matrix<S> m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

template <class S> Matrix<S> direct_sum(const Matrix<S>& a, const Matrix<S>& b) {
    Matrix<S> m(a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

template <class S> struct Echelon {
    Matrix<S> m;                     // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;  // pivot column of each row
};

// Reduced row echelon form; zero rows are removed.
template <class S> Echelon<S> echelon(Matrix<S> m) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && is_zero(m(p, c))) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, r);
        S inv = inverse(m(r, c));
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || is_zero(m(i, c))) continue;
            S f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return {m.block(0, 0, r, m.cols()), piv};
}

// Same row count as the input: the echelon rows followed by zero rows.
template <class S> Matrix<S> rref(const Matrix<S>& m) {
    Echelon<S> e = echelon(m);
    Matrix<S> out(m.rows(), m.cols());
    out.set_block(0, 0, e.m);
    return out;
}

template <class S> std::size_t rank(const Matrix<S>& m) { return echelon(m).pivots.size(); }

// Rows spanning {x : x m = 0}.
template <class S> Matrix<S> left_kernel(const Matrix<S>& m) {
    const std::size_t n = m.rows();
    Matrix<S> aug = hstack(m, Matrix<S>::identity(n));
    Echelon<S> e = echelon(aug);
    Matrix<S> k(0, n);
    for (std::size_t i = 0; i < e.pivots.size(); ++i)
        if (e.pivots[i] >= m.cols()) k.append_row(e.m.block(i, m.cols(), 1, n).row(0));
    return k;
}

// Columns spanning {y : m y = 0}, returned as a matrix whose columns are the basis.
template <class S> Matrix<S> right_kernel(const Matrix<S>& m) { return left_kernel(m.transpose()).transpose(); }

template <class S> std::optional<Matrix<S>> inverse_matrix(const Matrix<S>& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const std::size_t n = m.rows();
    Echelon<S> e = echelon(hstack(m, Matrix<S>::identity(n)));
    if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
    return e.m.block(0, n, n, n);
}

// Some x with x b = v, if one exists.
template <class S> std::optional<std::vector<S>> solve_left(const Matrix<S>& b, const std::vector<S>& v) {
    const std::size_t n = b.rows();
    // [b^T | v^T] column system: b^T x^T = v^T.
    Matrix<S> sys = hstack(b.transpose(), Matrix<S>::row_vector(v).transpose());
    Echelon<S> e = echelon(sys);
    std::vector<S> x(n, S(0));
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == n) return std::nullopt;
        x[e.pivots[i]] = e.m(i, n);
    }
    return x;
}

template <class S> std::vector<S> row_times(const std::vector<S>& v, const Matrix<S>& m) {
    if (v.size() != m.rows()) throw std::invalid_argument("vector-matrix shape mismatch");
    std::vector<S> out(m.cols(), S(0));
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (is_zero(v[k])) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[k] * m(k, j);
    }
    return out;
}

// Subspace of S^n stored by a reduced echelon basis.
template <class S> class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : n_(ambient), b_(0, ambient) {}

    static Subspace zero(std::size_t n) { return Subspace(n); }
    static Subspace full(std::size_t n) { return span(Matrix<S>::identity(n)); }
    static Subspace span(const Matrix<S>& rows) {
        Subspace s(rows.cols());
        Echelon<S> e = echelon(rows);
        s.b_ = e.m;
        s.piv_ = e.pivots;
        return s;
    }
    static Subspace span(const Matrix<S>& rows, std::size_t ambient) {
        if (rows.rows() == 0) return Subspace(ambient);
        if (rows.cols() != ambient) throw std::invalid_argument("span: ambient mismatch");
        return span(rows);
    }

    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return b_.rows(); }
    const Matrix<S>& basis() const { return b_; }
    const std::vector<std::size_t>& pivots() const { return piv_; }
    bool is_zero_space() const { return dim() == 0; }

    bool contains(const std::vector<S>& v) const {
        check(v.size());
        std::vector<S> w = v;
        for (std::size_t i = 0; i < b_.rows(); ++i) {
            S f = w[piv_[i]];
            if (is_zero(f)) continue;
            for (std::size_t j = 0; j < n_; ++j) w[j] -= f * b_(i, j);
        }
        for (const auto& x : w)
            if (!is_zero(x)) return false;
        return true;
    }
    bool contains(const Subspace& o) const {
        check(o.n_);
        for (std::size_t i = 0; i < o.dim(); ++i)
            if (!contains(o.b_.row(i))) return false;
        return true;
    }
    bool operator==(const Subspace& o) const { return n_ == o.n_ && b_ == o.b_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    Subspace operator+(const Subspace& o) const {
        check(o.n_);
        if (o.dim() == 0) return *this;
        if (dim() == 0) return o;
        return span(vstack(b_, o.b_));
    }
    Subspace intersect(const Subspace& o) const {
        check(o.n_);
        if (dim() == 0 || o.dim() == 0) return Subspace(n_);
        Matrix<S> k = left_kernel(vstack(b_, o.b_));
        if (k.rows() == 0) return Subspace(n_);
        return span(k.block(0, 0, k.rows(), dim()) * b_, n_);
    }
    // Image under v |-> v f.
    Subspace image(const Matrix<S>& f) const {
        if (f.rows() != n_) throw std::invalid_argument("image: shape mismatch");
        if (dim() == 0) return Subspace(f.cols());
        return span(b_ * f, f.cols());
    }
    // {v : v f in this}, a subspace of the source of f.
    Subspace preimage(const Matrix<S>& f) const {
        if (f.cols() != n_) throw std::invalid_argument("preimage: shape mismatch");
        Matrix<S> ann = annihilator();  // columns c with w c = 0 for all w here
        if (ann.cols() == 0) return full(f.rows());
        return span(left_kernel(f * ann), f.rows());
    }
    // Columns spanning the annihilator {c : b c = 0}.
    Matrix<S> annihilator() const {
        if (dim() == 0) return Matrix<S>::identity(n_);
        return right_kernel(b_);
    }
    // Rows extending a basis of `sub` (contained in this) to a basis of this.
    Matrix<S> complement_of(const Subspace& sub) const {
        check(sub.n_);
        Subspace acc = sub;
        Matrix<S> out(0, n_);
        for (std::size_t i = 0; i < dim(); ++i) {
            std::vector<S> r = b_.row(i);
            if (acc.contains(r)) continue;
            out.append_row(r);
            acc = acc + span(Matrix<S>::row_vector(r));
        }
        return out;
    }
    // Coordinates of v in the echelon basis.
    std::vector<S> coords(const std::vector<S>& v) const {
        check(v.size());
        std::vector<S> c(dim(), S(0));
        for (std::size_t i = 0; i < dim(); ++i) c[i] = v[piv_[i]];
        return c;
    }

private:
    void check(std::size_t m) const {
        if (m != n_) throw std::invalid_argument("subspace ambient dimension mismatch");
    }
    std::size_t n_ = 0;
    Matrix<S> b_;
    std::vector<std::size_t> piv_;
};

// ---------------------------------------------------------------------------
// Univariate polynomials, used for rational canonical forms.

template <class S> struct Poly {
    std::vector<S> c;  // c[i] is the coefficient of x^i; no trailing zeros

    Poly() = default;
    explicit Poly(std::vector<S> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(const S& a) { return Poly(std::vector<S>{a}); }
    static Poly x() { return Poly(std::vector<S>{S(0), S(1)}); }

    void trim() {
        while (!c.empty() && is_zero(c.back())) c.pop_back();
    }
    bool zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const S& lead() const { return c.back(); }

    Poly operator+(const Poly& o) const {
        std::vector<S> r(std::max(c.size(), o.c.size()), S(0));
        for (std::size_t i = 0; i < c.size(); ++i) r[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
        return Poly(r);
    }
    Poly operator-(const Poly& o) const {
        std::vector<S> r(std::max(c.size(), o.c.size()), S(0));
        for (std::size_t i = 0; i < c.size(); ++i) r[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r[i] -= o.c[i];
        return Poly(r);
    }
    Poly operator*(const Poly& o) const {
        if (zero() || o.zero()) return Poly();
        std::vector<S> r(c.size() + o.c.size() - 1, S(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
        return Poly(r);
    }
    bool operator==(const Poly& o) const { return c == o.c; }
    bool operator!=(const Poly& o) const { return c != o.c; }

    Poly monic() const {
        if (zero()) return *this;
        S inv = inverse(lead());
        std::vector<S> r = c;
        for (auto& a : r) a *= inv;
        return Poly(r);
    }

    std::string str() const {
        if (zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            if (is_zero(c[i])) continue;
            if (!first) os << " + ";
            first = false;
            bool one = c[i] == S(1);
            if (!one || i == 0) os << to_string(c[i]);
            if (i > 0) os << (one ? "" : "*") << "T" << (i > 1 ? "^" + std::to_string(i) : "");
        }
        return os.str();
    }
};

template <class S> std::pair<Poly<S>, Poly<S>> divmod(const Poly<S>& a, const Poly<S>& b) {
    if (b.zero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly<S>(), a};
    std::vector<S> r = a.c;
    std::vector<S> q(a.c.size() - b.c.size() + 1, S(0));
    S inv = inverse(b.lead());
    for (int i = static_cast<int>(r.size()) - 1; i >= b.degree(); --i) {
        if (is_zero(r[i])) continue;
        S f = r[i] * inv;
        q[i - b.degree()] = f;
        for (int j = 0; j <= b.degree(); ++j) r[i - b.degree() + j] -= f * b.c[j];
    }
    return {Poly<S>(q), Poly<S>(r)};
}

// Companion matrix acting on column vectors: last column holds -c_0..-c_{d-1}.
template <class S> Matrix<S> companion(const Poly<S>& f) {
    Poly<S> g = f.monic();
    const int d = g.degree();
    Matrix<S> m(d, d);
    for (int i = 1; i < d; ++i) m(i, i - 1) = S(1);
    for (int i = 0; i < d; ++i) m(i, d - 1) = -g.c[i];
    return m;
}

// Invariant factors (monic, non-constant, each dividing the next) of a square
// matrix, from the Smith normal form of xI - A over k[x].
template <class S> std::vector<Poly<S>> invariant_factors(const Matrix<S>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("invariant factors need a square matrix");
    const std::size_t n = a.rows();
    std::vector<std::vector<Poly<S>>> m(n, std::vector<Poly<S>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Poly<S> e = Poly<S>::constant(-a(i, j));
            if (i == j) e = e + Poly<S>::x();
            m[i][j] = e;
        }
    std::vector<Poly<S>> diag;
    for (std::size_t k = 0; k < n; ++k) {
        for (;;) {
            std::size_t bi = n, bj = n;
            for (std::size_t i = k; i < n; ++i)
                for (std::size_t j = k; j < n; ++j)
                    if (!m[i][j].zero() && (bi == n || m[i][j].degree() < m[bi][bj].degree())) bi = i, bj = j;
            if (bi == n) break;
            std::swap(m[k], m[bi]);
            for (std::size_t i = 0; i < n; ++i) std::swap(m[i][k], m[i][bj]);
            bool clean = true;
            for (std::size_t i = k + 1; i < n; ++i) {
                if (m[i][k].zero()) continue;
                auto [q, r] = divmod(m[i][k], m[k][k]);
                for (std::size_t j = k; j < n; ++j) m[i][j] = m[i][j] - q * m[k][j];
                if (!r.zero()) clean = false;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (m[k][j].zero()) continue;
                auto [q, r] = divmod(m[k][j], m[k][k]);
                for (std::size_t i = k; i < n; ++i) m[i][j] = m[i][j] - q * m[i][k];
                if (!r.zero()) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (std::size_t i = k + 1; i < n && divides; ++i)
                for (std::size_t j = k + 1; j < n && divides; ++j)
                    if (!divmod(m[i][j], m[k][k]).second.zero()) {
                        for (std::size_t jj = k; jj < n; ++jj) m[k][jj] = m[k][jj] + m[i][jj];
                        divides = false;
                    }
            if (divides) break;
        }
        if (!m[k][k].zero()) diag.push_back(m[k][k].monic());
    }
    std::vector<Poly<S>> out;
    for (auto& p : diag)
        if (p.degree() >= 1) out.push_back(p);
    std::sort(out.begin(), out.end(), [](const Poly<S>& x, const Poly<S>& y) { return x.degree() < y.degree(); });
    return out;
}

template <class S> Matrix<S> rational_canonical_form(const Matrix<S>& a) {
    Matrix<S> out(0, 0);
    for (const auto& f : invariant_factors(a)) out = direct_sum(out, companion(f));
    return out;
}

template <class S> struct Similarity {
    bool similar = false;
    std::optional<Matrix<S>> witness;  // P with g = P f P^{-1}
};

// Decides similarity through invariant factors. When similar, searches for an
// explicit conjugator among solutions of g P = P f.
template <class S>
Similarity<S> similar(const Matrix<S>& f, const Matrix<S>& g, std::uint64_t seed = 1) {
    if (f.rows() != f.cols() || g.rows() != g.cols()) throw std::invalid_argument("similar: non-square input");
    if (!inverse_matrix(f) || !inverse_matrix(g)) throw std::invalid_argument("similar: singular input");
    Similarity<S> res;
    if (f.rows() != g.rows()) return res;
    if (invariant_factors(f) != invariant_factors(g)) return res;
    res.similar = true;
    const std::size_t n = f.rows();
    // Unknown P flattened row-major; solve (g P - P f)_{ij} = 0.
    Matrix<S> sys(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t eq = i * n + j;
            for (std::size_t k = 0; k < n; ++k) {
                sys(k * n + j, eq) += g(i, k);
                sys(i * n + k, eq) -= f(k, j);
            }
        }
    Matrix<S> sols = left_kernel(sys);
    std::mt19937_64 rng(seed);
    const std::uint64_t q = field_order<S>() ? field_order<S>() : 7;
    for (int attempt = 0; attempt < 400 && sols.rows() > 0; ++attempt) {
        std::vector<S> coeff(sols.rows());
        for (auto& c : coeff) c = field_element<S>(rng() % q);
        if (attempt < static_cast<int>(sols.rows())) {
            for (std::size_t t = 0; t < coeff.size(); ++t) coeff[t] = S(t == static_cast<std::size_t>(attempt) ? 1 : 0);
        }
        std::vector<S> flat = row_times(coeff, sols);
        Matrix<S> p(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(i, j) = flat[i * n + j];
        if (inverse_matrix(p)) {
            res.witness = p;
            break;
        }
    }
    return res;
}

// Factorisation of a monic polynomial over F_p by trial division with monic
// polynomials of increasing degree. Returns nullopt when the search would be
// too large.
std::optional<std::vector<std::pair<Poly<Fp>, int>>> factor_fp(const Poly<Fp>& f, std::uint64_t budget = 200000);

// Elementary divisors q^e of a matrix over F_p.
std::optional<std::vector<std::pair<Poly<Fp>, int>>> elementary_divisors(const Matrix<Fp>& a);

}  // namespace gentle
