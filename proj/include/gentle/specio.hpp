#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gentle/complexes.hpp"
#include "gentle/words.hpp"

namespace gentle {

// T-modules as text: "[a b; c d]" (column convention) or "J(n,lambda)".
template <class S> std::string tmodule_str(const TModule<S>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.phi.rows(); ++i) {
        if (i) out += "; ";
        for (std::size_t j = 0; j < v.phi.cols(); ++j) out += (j ? " " : "") + to_string(v.phi(i, j));
    }
    return out + "]";
}

namespace specio_detail {

inline std::string strip(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace specio_detail

template <class S> TModule<S> parse_tmodule(const std::string& text) {
    using specio_detail::strip;
    std::string t = strip(text);
    if (t.size() > 3 && t[0] == 'J' && t[1] == '(' && t.back() == ')') {
        auto comma = t.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("expected J(n,lambda)");
        int n = std::stoi(t.substr(2, comma - 2));
        if (n <= 0) throw std::invalid_argument("J(n,lambda) needs n >= 1");
        S lam = parse_scalar<S>(strip(t.substr(comma + 1, t.size() - comma - 2)));
        if (is_zero(lam)) throw std::invalid_argument("the eigenvalue of a band module must be nonzero");
        return TModule<S>::jordan(static_cast<std::size_t>(n), lam);
    }
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw std::invalid_argument("expected [a b; c d] or J(n,lambda)");
    std::vector<std::vector<S>> rows;
    std::string body = t.substr(1, t.size() - 2);
    std::stringstream rs(body);
    std::string row;
    while (std::getline(rs, row, ';')) {
        std::istringstream es(row);
        std::vector<S> r;
        std::string tok;
        while (es >> tok) r.push_back(parse_scalar<S>(tok));
        rows.push_back(r);
    }
    const std::size_t n = rows.size();
    for (const auto& r : rows)
        if (r.size() != n) throw std::invalid_argument("T-module matrix must be square");
    TModule<S> v{Matrix<S>::from_rows(rows, n)};
    if (n == 0 || !inverse_matrix(v.phi)) throw std::invalid_argument("T-module matrix must be invertible");
    return v;
}

// One summand per line:
//   string WORD @ SHIFT
//   band WORD @ SHIFT : MATRIX
template <class S> std::string serialize_spec(const Alphabet& A, const DecompSpec<S>& spec) {
    std::string out;
    for (const auto& s : spec.strings) out += "string " + A.str(s.word) + " @ " + std::to_string(s.shift) + "\n";
    for (const auto& b : spec.bands)
        out += "band " + A.str(b.word) + " @ " + std::to_string(b.shift) + " : " + tmodule_str(b.V) + "\n";
    return out;
}

template <class S> void parse_summand_line(const Alphabet& A, const std::string& line, DecompSpec<S>& spec) {
    using specio_detail::strip;
    std::string t = strip(line);
    const bool band = t.rfind("band ", 0) == 0;
    if (!band && t.rfind("string ", 0) != 0) throw std::invalid_argument("expected 'string ...' or 'band ...'");
    t = t.substr(band ? 5 : 7);
    auto at = t.find('@');
    if (at == std::string::npos) throw std::invalid_argument("missing '@ SHIFT'");
    Word w = A.parse(strip(t.substr(0, at)));
    std::string rest = t.substr(at + 1);
    if (band) {
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("band summand needs ': MATRIX'");
        int sh = std::stoi(strip(rest.substr(0, colon)));
        if (!period(normalize(w))) throw std::invalid_argument("band word must be periodic");
        spec.bands.push_back({w, parse_tmodule<S>(rest.substr(colon + 1)), sh});
    } else {
        if (!w.is_finite()) throw std::invalid_argument("string summands need a finite word");
        spec.strings.push_back({w, std::stoi(strip(rest))});
    }
}

template <class S> DecompSpec<S> parse_spec(const Alphabet& A, const std::string& text) {
    DecompSpec<S> spec;
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        if (specio_detail::strip(line).empty()) continue;
        try {
            parse_summand_line(A, line, spec);
        } catch (const std::exception& e) {
            throw std::invalid_argument("line " + std::to_string(ln) + ": " + e.what());
        }
    }
    return spec;
}

// Graphviz text for a quiver (relations as dotted arcs between arrow labels)
// and for a complex (generators ranked by degree, entries as edge labels).
inline std::string quiver_dot(const Presentation& P) {
    std::string out = "digraph quiver {\n  rankdir=LR;\n";
    for (const auto& v : P.vertices()) out += "  \"" + v + "\";\n";
    for (const auto& a : P.arrows())
        out += "  \"" + P.vertex_name(a.tail) + "\" -> \"" + P.vertex_name(a.head) + "\" [label=\"" + a.name + "\"];\n";
    for (const auto& [a, b] : P.rho())
        out += "  // relation " + P.arrow(a).name + "*" + P.arrow(b).name + "\n";
    return out + "}\n";
}

template <class S> std::string complex_dot(const ProjComplex<S>& x) {
    const auto& P = x.pres();
    std::string out = "digraph complex {\n  rankdir=LR;\n";
    for (int n : x.degrees()) {
        out += "  subgraph \"cluster_deg" + std::to_string(n) + "\" {\n    label=\"degree " + std::to_string(n) + "\";\n";
        for (int g : x.in_degree(n))
            out += "    \"" + x.gen(g).name + "\" [label=\"" + x.gen(g).name + " : e" + P.vertex_name(x.gen(g).vertex) + "\"];\n";
        out += "  }\n";
    }
    for (const auto& [k, e] : x.entries())
        out += "  \"" + x.gen(k.first).name + "\" -> \"" + x.gen(k.second).name + "\" [label=\"" + elem_str(P, e) + "\"];\n";
    return out + "}\n";
}

}  // namespace gentle
