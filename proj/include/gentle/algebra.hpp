#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gentle/scalar.hpp"

namespace gentle {

struct Arrow {
    std::string name;
    int tail;  // source vertex
    int head;  // target vertex
};

// A path stored leftmost arrow first, so arrows[0] = f(path) is applied last.
// The trivial path e_v has no arrows and carries its vertex.
struct Path {
    int vertex = 0;  // only meaningful when trivial
    std::vector<int> arrows;

    static Path trivial(int v) { return Path{v, {}}; }
    static Path arrow(int a) { return Path{0, {a}}; }
    bool is_trivial() const { return arrows.empty(); }
    std::size_t length() const { return arrows.size(); }
    int first() const { return arrows.front(); }
    int last() const { return arrows.back(); }

    // length first, then lexicographic by arrow index; trivial paths by vertex
    bool operator<(const Path& o) const {
        if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
        if (arrows.empty()) return vertex < o.vertex;
        return arrows < o.arrows;
    }
    bool operator==(const Path& o) const {
        return arrows == o.arrows && (!arrows.empty() || vertex == o.vertex);
    }
    bool operator!=(const Path& o) const { return !(*this == o); }
};

struct ValidationReport {
    std::vector<std::string> failures;
    bool gentle() const { return failures.empty(); }
};

class Presentation {
public:
    static constexpr int kDefaultCap = 24;

    Presentation() = default;

    int add_vertex(const std::string& name);
    int add_arrow(const std::string& name, const std::string& tail, const std::string& head);
    // Relation alpha*beta: beta first, then alpha.
    void add_relation(const std::string& alpha, const std::string& beta);
    void remove_relation(const std::string& alpha, const std::string& beta);
    void set_cap(int cap) { cap_ = cap; }

    int cap() const { return cap_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_arrows() const { return arrows_.size(); }
    const std::string& vertex_name(int v) const { return vertices_.at(v); }
    const Arrow& arrow(int a) const { return arrows_.at(a); }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::set<std::pair<int, int>>& rho() const { return rho_; }

    std::optional<int> find_vertex(const std::string& name) const;
    std::optional<int> find_arrow(const std::string& name) const;
    int vertex_index(const std::string& name) const;
    int arrow_index(const std::string& name) const;

    bool in_rho(int alpha, int beta) const { return rho_.count({alpha, beta}) > 0; }
    // alpha*beta is a path (beta then alpha) not lying in rho
    bool composes(int alpha, int beta) const {
        return arrows_[beta].head == arrows_[alpha].tail && !in_rho(alpha, beta);
    }
    std::vector<int> arrows_with_head(int v) const;
    std::vector<int> arrows_with_tail(int v) const;

    int head(const Path& p) const { return p.is_trivial() ? p.vertex : arrows_[p.first()].head; }
    int tail(const Path& p) const { return p.is_trivial() ? p.vertex : arrows_[p.last()].tail; }
    bool is_rho_avoiding(const Path& p) const;
    // p*q, nullopt when not composable or the junction is in rho
    std::optional<Path> concat(const Path& p, const Path& q) const;

    ValidationReport validate() const;
    // Nontrivial rho-avoiding paths of length at most max_len, length-then-lex order.
    std::vector<Path> pa_rho(std::size_t max_len) const;
    // Rho-avoiding paths (trivial included) with the given tail, up to max_len.
    std::vector<Path> paths_from_tail(int v, std::size_t max_len) const;
    // True when some rho-avoiding path has unbounded length.
    bool has_rho_avoiding_cycle() const;
    // Number of basis paths, nullopt when infinite.
    std::optional<std::size_t> dimension() const;
    // Full cycles as arrow sequences alpha_1..alpha_n with alpha_i alpha_{i+1} and
    // alpha_n alpha_1 in rho, one per rotation class, starting at the smallest arrow.
    std::vector<std::vector<int>> full_cycles() const;

    std::string path_str(const Path& p) const;
    std::optional<Path> parse_path(const std::string& text) const;

    std::string serialize() const;
    static Presentation parse(const std::string& text);
    static Presentation load(const std::string& filename);

    static Presentation alp();
    static Presentation gp();

private:
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::set<std::pair<int, int>> rho_;
    int cap_ = kDefaultCap;
};

// Finite linear combination of rho-avoiding paths.
template <class S> class AlgebraElem {
public:
    AlgebraElem() = default;
    static AlgebraElem path(const Path& p, const S& c = S(1)) {
        AlgebraElem e;
        if (!is_zero(c)) e.terms_[p] = c;
        return e;
    }
    static AlgebraElem idempotent(int v) { return path(Path::trivial(v)); }

    const std::map<Path, S>& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }
    bool truncated() const { return truncated_; }
    void mark_truncated() { truncated_ = true; }

    S coeff(const Path& p) const {
        auto it = terms_.find(p);
        return it == terms_.end() ? S(0) : it->second;
    }
    S constant_at(int v) const { return coeff(Path::trivial(v)); }
    // Sum of trivial-path coefficients, i.e. the image in Lambda / rad.
    bool has_constant_term() const {
        for (const auto& [p, c] : terms_)
            if (p.is_trivial()) return true;
        return false;
    }

    void add(const Path& p, const S& c) {
        if (is_zero(c)) return;
        auto it = terms_.find(p);
        if (it == terms_.end()) {
            terms_.emplace(p, c);
            return;
        }
        it->second += c;
        if (is_zero(it->second)) terms_.erase(it);
    }
    AlgebraElem& operator+=(const AlgebraElem& o) {
        for (const auto& [p, c] : o.terms_) add(p, c);
        truncated_ = truncated_ || o.truncated_;
        return *this;
    }
    AlgebraElem operator+(const AlgebraElem& o) const {
        AlgebraElem r = *this;
        r += o;
        return r;
    }
    AlgebraElem operator-() const {
        AlgebraElem r = *this;
        for (auto& [p, c] : r.terms_) c = -c;
        return r;
    }
    AlgebraElem operator-(const AlgebraElem& o) const { return *this + (-o); }
    AlgebraElem scaled(const S& s) const {
        if (is_zero(s)) return AlgebraElem();
        AlgebraElem r = *this;
        for (auto& [p, c] : r.terms_) c *= s;
        return r;
    }
    bool operator==(const AlgebraElem& o) const { return terms_ == o.terms_; }
    bool operator!=(const AlgebraElem& o) const { return !(*this == o); }

private:
    std::map<Path, S> terms_;
    bool truncated_ = false;
};

template <class S>
AlgebraElem<S> multiply(const Presentation& p, const AlgebraElem<S>& a, const AlgebraElem<S>& b) {
    AlgebraElem<S> r;
    for (const auto& [x, cx] : a.terms())
        for (const auto& [y, cy] : b.terms()) {
            auto z = p.concat(x, y);
            if (!z) continue;
            if (static_cast<int>(z->length()) > p.cap()) {
                r.mark_truncated();
                continue;
            }
            r.add(*z, cx * cy);
        }
    if (a.truncated() || b.truncated()) r.mark_truncated();
    return r;
}

template <class S> AlgebraElem<S> unit(const Presentation& p) {
    AlgebraElem<S> u;
    for (std::size_t v = 0; v < p.num_vertices(); ++v) u.add(Path::trivial(static_cast<int>(v)), S(1));
    return u;
}

template <class S> std::string elem_str(const Presentation& p, const AlgebraElem<S>& e) {
    if (e.zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [path, c] : e.terms()) {
        std::string cs = to_string(c);
        bool neg = !cs.empty() && cs[0] == '-';
        if (neg) cs.erase(0, 1);
        if (!first) out += neg ? " - " : " + ";
        else if (neg) out += "-";
        first = false;
        if (cs != "1") out += cs + "*";
        out += p.path_str(path);
    }
    return out;
}

// Parses sums of terms like "2*a*b", "-s", "e_0", "1/2*c".
template <class S> AlgebraElem<S> parse_elem(const Presentation& p, const std::string& text);

// Inverse of an element with invertible constant part in e_v Lambda e_v, as a
// truncated geometric series.
template <class S> std::optional<AlgebraElem<S>> invert_local(const Presentation& p, const AlgebraElem<S>& e, int v);

}  // namespace gentle
