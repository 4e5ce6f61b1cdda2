#include "gentle/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace gentle {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'')) return false;
    return true;
}

}  // namespace

int Presentation::add_vertex(const std::string& name) {
    if (!valid_name(name)) throw std::invalid_argument("bad vertex name '" + name + "'");
    if (find_vertex(name)) throw std::invalid_argument("duplicate vertex '" + name + "'");
    vertices_.push_back(name);
    return static_cast<int>(vertices_.size()) - 1;
}

int Presentation::add_arrow(const std::string& name, const std::string& tail, const std::string& head) {
    if (!valid_name(name) || name.rfind("d_", 0) == 0 || name.rfind("e_", 0) == 0)
        throw std::invalid_argument("bad arrow name '" + name + "'");
    if (find_arrow(name)) throw std::invalid_argument("duplicate arrow '" + name + "'");
    arrows_.push_back({name, vertex_index(tail), vertex_index(head)});
    return static_cast<int>(arrows_.size()) - 1;
}

void Presentation::add_relation(const std::string& alpha, const std::string& beta) {
    rho_.insert({arrow_index(alpha), arrow_index(beta)});
}

void Presentation::remove_relation(const std::string& alpha, const std::string& beta) {
    rho_.erase({arrow_index(alpha), arrow_index(beta)});
}

std::optional<int> Presentation::find_vertex(const std::string& name) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

std::optional<int> Presentation::find_arrow(const std::string& name) const {
    for (std::size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

int Presentation::vertex_index(const std::string& name) const {
    auto v = find_vertex(name);
    if (!v) throw std::invalid_argument("unknown vertex '" + name + "'");
    return *v;
}

int Presentation::arrow_index(const std::string& name) const {
    auto a = find_arrow(name);
    if (!a) throw std::invalid_argument("unknown arrow '" + name + "'");
    return *a;
}

std::vector<int> Presentation::arrows_with_head(int v) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].head == v) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> Presentation::arrows_with_tail(int v) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].tail == v) out.push_back(static_cast<int>(i));
    return out;
}

bool Presentation::is_rho_avoiding(const Path& p) const {
    for (std::size_t i = 0; i + 1 < p.arrows.size(); ++i)
        if (!composes(p.arrows[i], p.arrows[i + 1])) return false;
    return true;
}

std::optional<Path> Presentation::concat(const Path& p, const Path& q) const {
    if (tail(p) != head(q)) return std::nullopt;
    if (p.is_trivial()) return q;
    if (q.is_trivial()) return p;
    if (in_rho(p.last(), q.first())) return std::nullopt;
    Path r;
    r.arrows = p.arrows;
    r.arrows.insert(r.arrows.end(), q.arrows.begin(), q.arrows.end());
    return r;
}

ValidationReport Presentation::validate() const {
    ValidationReport rep;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        int v_ = static_cast<int>(v);
        if (arrows_with_head(v_).size() > 2)
            rep.failures.push_back("condition (I) fails at vertex " + vertices_[v] + ": head of more than two arrows");
        if (arrows_with_tail(v_).size() > 2)
            rep.failures.push_back("condition (I) fails at vertex " + vertices_[v] + ": tail of more than two arrows");
    }
    for (const auto& [a, b] : rho_)
        if (arrows_[b].head != arrows_[a].tail)
            rep.failures.push_back("condition (II) fails at relation " + arrows_[a].name + "*" + arrows_[b].name +
                                   ": not a path of length 2");
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
        int b = static_cast<int>(i);
        int rel_left = 0, rel_right = 0, free_left = 0, free_right = 0;
        for (std::size_t j = 0; j < arrows_.size(); ++j) {
            int a = static_cast<int>(j);
            if (in_rho(a, b)) ++rel_left;
            if (in_rho(b, a)) ++rel_right;
            if (arrows_[a].tail == arrows_[b].head && !in_rho(a, b)) ++free_left;
            if (arrows_[b].tail == arrows_[a].head && !in_rho(b, a)) ++free_right;
        }
        const std::string& n = arrows_[i].name;
        if (rel_left > 1) rep.failures.push_back("condition (III) fails at arrow " + n + ": several relations end with it");
        if (rel_right > 1) rep.failures.push_back("condition (III) fails at arrow " + n + ": several relations start with it");
        if (free_left > 1)
            rep.failures.push_back("condition (IV) fails at arrow " + n + ": several paths of length 2 outside rho continue it");
        if (free_right > 1)
            rep.failures.push_back("condition (IV) fails at arrow " + n + ": several paths of length 2 outside rho precede it");
    }
    return rep;
}

std::vector<Path> Presentation::pa_rho(std::size_t max_len) const {
    std::vector<Path> out, layer;
    if (max_len == 0) return out;
    for (std::size_t a = 0; a < arrows_.size(); ++a) layer.push_back(Path::arrow(static_cast<int>(a)));
    for (std::size_t len = 1; len <= max_len && !layer.empty(); ++len) {
        std::sort(layer.begin(), layer.end());
        out.insert(out.end(), layer.begin(), layer.end());
        std::vector<Path> next;
        for (const auto& p : layer)
            for (std::size_t a = 0; a < arrows_.size(); ++a)
                if (composes(p.last(), static_cast<int>(a))) {
                    Path q = p;
                    q.arrows.push_back(static_cast<int>(a));
                    next.push_back(q);
                }
        layer = std::move(next);
    }
    return out;
}

std::vector<Path> Presentation::paths_from_tail(int v, std::size_t max_len) const {
    std::vector<Path> out{Path::trivial(v)};
    std::vector<Path> layer;
    for (int a : arrows_with_tail(v)) layer.push_back(Path::arrow(a));
    for (std::size_t len = 1; len <= max_len && !layer.empty(); ++len) {
        std::sort(layer.begin(), layer.end());
        out.insert(out.end(), layer.begin(), layer.end());
        std::vector<Path> next;
        for (const auto& p : layer)
            for (std::size_t a = 0; a < arrows_.size(); ++a)
                if (composes(static_cast<int>(a), p.first())) {
                    Path q;
                    q.arrows.push_back(static_cast<int>(a));
                    q.arrows.insert(q.arrows.end(), p.arrows.begin(), p.arrows.end());
                    next.push_back(q);
                }
        layer = std::move(next);
    }
    return out;
}

bool Presentation::has_rho_avoiding_cycle() const {
    // DFS for a cycle in the graph a -> b whenever a*b composes outside rho
    const std::size_t n = arrows_.size();
    std::vector<int> state(n, 0);
    std::function<bool(int)> dfs = [&](int a) {
        state[a] = 1;
        for (std::size_t b = 0; b < n; ++b) {
            if (!composes(a, static_cast<int>(b))) continue;
            if (state[b] == 1) return true;
            if (state[b] == 0 && dfs(static_cast<int>(b))) return true;
        }
        state[a] = 2;
        return false;
    };
    for (std::size_t a = 0; a < n; ++a)
        if (state[a] == 0 && dfs(static_cast<int>(a))) return true;
    return false;
}

std::optional<std::size_t> Presentation::dimension() const {
    if (has_rho_avoiding_cycle()) return std::nullopt;
    return vertices_.size() + pa_rho(arrows_.size() + 1).size();
}

std::vector<std::vector<int>> Presentation::full_cycles() const {
    std::vector<std::vector<int>> out;
    std::set<int> seen;
    const int n = static_cast<int>(arrows_.size());
    for (int start = 0; start < n; ++start) {
        if (seen.count(start)) continue;
        std::vector<int> cyc{start};
        int cur = start;
        bool closed = false;
        for (int step = 0; step < n; ++step) {
            int nxt = -1;
            for (int b = 0; b < n; ++b)
                if (in_rho(cur, b)) {
                    nxt = b;
                    break;
                }
            if (nxt < 0) break;
            if (nxt == start) {
                closed = true;
                break;
            }
            if (std::find(cyc.begin(), cyc.end(), nxt) != cyc.end()) break;
            cyc.push_back(nxt);
            cur = nxt;
        }
        if (!closed) continue;
        // a product of shorter cycles revisits a vertex
        std::set<int> tails;
        for (int a : cyc) tails.insert(arrows_[a].tail);
        if (tails.size() != cyc.size()) continue;
        if (*std::min_element(cyc.begin(), cyc.end()) != start) continue;
        for (int a : cyc) seen.insert(a);
        out.push_back(cyc);
    }
    return out;
}

std::string Presentation::path_str(const Path& p) const {
    if (p.is_trivial()) return "e_" + vertices_.at(p.vertex);
    std::string s;
    for (std::size_t i = 0; i < p.arrows.size(); ++i) {
        if (i) s += "*";
        s += arrows_.at(p.arrows[i]).name;
    }
    return s;
}

std::optional<Path> Presentation::parse_path(const std::string& text) const {
    std::string t = trim(text);
    if (t.rfind("e_", 0) == 0) {
        auto v = find_vertex(t.substr(2));
        if (!v) return std::nullopt;
        return Path::trivial(*v);
    }
    Path p;
    for (const auto& tok : split(t, '*')) {
        std::string name = tok;
        int power = 1;
        auto caret = tok.find('^');
        if (caret != std::string::npos) {
            name = trim(tok.substr(0, caret));
            try {
                std::size_t used = 0;
                power = std::stoi(tok.substr(caret + 1), &used);
                if (used != tok.size() - caret - 1) return std::nullopt;
            } catch (...) {
                return std::nullopt;
            }
            if (power < 1) return std::nullopt;
        }
        auto a = find_arrow(name);
        if (!a) return std::nullopt;
        for (int k = 0; k < power; ++k) p.arrows.push_back(*a);
    }
    if (p.arrows.empty()) return std::nullopt;
    for (std::size_t i = 0; i + 1 < p.arrows.size(); ++i)
        if (arrows_[p.arrows[i + 1]].head != arrows_[p.arrows[i]].tail) return std::nullopt;
    return p;
}

std::string Presentation::serialize() const {
    std::ostringstream os;
    os << "vertices:";
    for (const auto& v : vertices_) os << " " << v;
    os << "\n";
    for (const auto& a : arrows_) os << "arrow " << a.name << ": " << vertices_[a.tail] << " -> " << vertices_[a.head] << "\n";
    os << "relations:";
    bool first = true;
    for (const auto& [a, b] : rho_) {
        os << (first ? " " : ", ") << arrows_[a].name << "*" << arrows_[b].name;
        first = false;
    }
    os << "\n";
    if (cap_ != kDefaultCap) os << "cap: " << cap_ << "\n";
    return os.str();
}

Presentation Presentation::parse(const std::string& text) {
    Presentation p;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool have_vertices = false;
    std::vector<std::pair<int, std::string>> pending_relations;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + msg);
        };
        try {
            if (line.rfind("vertices:", 0) == 0) {
                if (have_vertices) fail("vertices declared twice");
                have_vertices = true;
                std::istringstream vs(line.substr(9));
                std::string v;
                while (vs >> v) p.add_vertex(v);
            } else if (line.rfind("arrow ", 0) == 0) {
                auto colon = line.find(':');
                auto arrow_pos = line.find("->");
                if (colon == std::string::npos || arrow_pos == std::string::npos || arrow_pos < colon)
                    fail("expected 'arrow NAME: SRC -> TGT'");
                p.add_arrow(trim(line.substr(6, colon - 6)), trim(line.substr(colon + 1, arrow_pos - colon - 1)),
                            trim(line.substr(arrow_pos + 2)));
            } else if (line.rfind("relations:", 0) == 0) {
                pending_relations.emplace_back(lineno, line.substr(10));
            } else if (line.rfind("cap:", 0) == 0) {
                int cap = std::stoi(trim(line.substr(4)));
                if (cap <= 0) fail("cap must be positive");
                p.set_cap(cap);
            } else {
                fail("unrecognised line '" + line + "'");
            }
        } catch (const std::invalid_argument& e) {
            std::string msg = e.what();
            if (msg.rfind("line ", 0) == 0) throw;
            fail(msg);
        }
    }
    for (const auto& [ln, rels] : pending_relations) {
        if (trim(rels).empty()) continue;
        for (const auto& r : split(rels, ',')) {
            auto parts = split(r, '*');
            if (parts.size() != 2)
                throw std::invalid_argument("line " + std::to_string(ln) + ": relation '" + r + "' is not NAME*NAME");
            try {
                p.add_relation(parts[0], parts[1]);
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument("line " + std::to_string(ln) + ": " + e.what());
            }
        }
    }
    if (!have_vertices) throw std::invalid_argument("missing 'vertices:' line");
    return p;
}

Presentation Presentation::load(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot open '" + filename + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Presentation Presentation::alp() {
    return parse(
        "vertices: 0 1 2 3 4\n"
        "arrow a: 0 -> 1\narrow b: 1 -> 2\narrow c: 2 -> 0\n"
        "arrow r: 0 -> 4\narrow s: 4 -> 3\narrow t: 3 -> 0\n"
        "relations: b*a, c*b, a*c, s*r, t*s, r*t\n");
}

Presentation Presentation::gp() {
    return parse("vertices: v\narrow x: v -> v\narrow y: v -> v\nrelations: x*y, y*x\n");
}

template <class S> AlgebraElem<S> parse_elem(const Presentation& p, const std::string& text) {
    AlgebraElem<S> out;
    std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty algebra element");
    if (t == "0") return out;
    // split into signed terms at top-level + and -
    std::vector<std::pair<bool, std::string>> terms;
    std::string cur;
    bool neg = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        char ch = t[i];
        bool sep = (ch == '+' || ch == '-') && (i == 0 || t[i - 1] != '^') && !(ch == '-' && i > 0 && t[i - 1] == '/');
        if (sep) {
            if (!trim(cur).empty()) {
                terms.emplace_back(neg, trim(cur));
                cur.clear();
                neg = (ch == '-');
            } else if (ch == '-') {
                neg = !neg;
            }
        } else {
            cur += ch;
        }
    }
    if (trim(cur).empty()) throw std::invalid_argument("dangling sign in '" + text + "'");
    terms.emplace_back(neg, trim(cur));
    for (const auto& [negative, term] : terms) {
        S coeff(1);
        std::string rest = term;
        auto star = term.find('*');
        std::string head = trim(star == std::string::npos ? term : term.substr(0, star));
        if (!head.empty() && (std::isdigit(static_cast<unsigned char>(head[0])))) {
            coeff = parse_scalar<S>(head);
            if (star == std::string::npos) {
                throw std::invalid_argument("scalar term '" + term + "' needs an idempotent, e.g. 2*e_v");
            }
            rest = term.substr(star + 1);
        }
        auto path = p.parse_path(rest);
        if (!path) throw std::invalid_argument("bad path '" + trim(rest) + "'");
        if (!p.is_rho_avoiding(*path)) continue;  // lies in the ideal
        out.add(*path, negative ? -coeff : coeff);
    }
    return out;
}

template <class S> std::optional<AlgebraElem<S>> invert_local(const Presentation& p, const AlgebraElem<S>& e, int v) {
    S lam = e.constant_at(v);
    if (is_zero(lam)) return std::nullopt;
    for (const auto& [path, c] : e.terms())
        if (p.head(path) != v || p.tail(path) != v) return std::nullopt;
    S li = inverse(lam);
    AlgebraElem<S> r = e - AlgebraElem<S>::idempotent(v).scaled(lam);
    AlgebraElem<S> q = r.scaled(-li);  // e = lam(1 - q)
    AlgebraElem<S> sum = AlgebraElem<S>::idempotent(v), power = AlgebraElem<S>::idempotent(v);
    for (int k = 0; k < p.cap() + 1; ++k) {
        power = multiply(p, power, q);
        if (power.zero()) break;
        sum += power;
    }
    return sum.scaled(li);
}

template AlgebraElem<Fp> parse_elem<Fp>(const Presentation&, const std::string&);
template AlgebraElem<Rational> parse_elem<Rational>(const Presentation&, const std::string&);
template std::optional<AlgebraElem<Fp>> invert_local<Fp>(const Presentation&, const AlgebraElem<Fp>&, int);
template std::optional<AlgebraElem<Rational>> invert_local<Rational>(const Presentation&, const AlgebraElem<Rational>&, int);

}  // namespace gentle
