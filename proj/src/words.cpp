#include "gentle/words.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <stdexcept>

namespace gentle {

// ---------------------------------------------------------------------------
// Word basics

Word Word::finite(std::vector<WPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("finite word needs at least one pair");
    Word w;
    w.shape = Shape::Finite;
    w.core = std::move(pairs);
    w.core_start = 1;
    return w;
}

namespace {

long mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

std::vector<WPair> primitive(const std::vector<WPair>& b) {
    const std::size_t n = b.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = b[i] == b[i - d];
        if (ok) return std::vector<WPair>(b.begin(), b.begin() + d);
    }
    return b;
}

void rotate_left(std::vector<WPair>& b) { std::rotate(b.begin(), b.begin() + 1, b.end()); }
void rotate_right(std::vector<WPair>& b) { std::rotate(b.rbegin(), b.rbegin() + 1, b.rend()); }

}  // namespace

bool Word::has_pair(long i) const {
    switch (shape) {
        case Shape::Trivial: return false;
        case Shape::Finite: return i >= 1 && i <= static_cast<long>(core.size());
        case Shape::Right: return i >= 1;
        case Shape::Left: return i <= 0;
        case Shape::Bi: return true;
    }
    return false;
}

bool Word::has_position(long i) const {
    switch (shape) {
        case Shape::Trivial: return i == 0;
        case Shape::Finite: return i >= 0 && i <= static_cast<long>(core.size());
        case Shape::Right: return i >= 0;
        case Shape::Left: return i <= 0;
        case Shape::Bi: return true;
    }
    return false;
}

const WPair& Word::pair_at(long i) const {
    if (!has_pair(i)) throw std::out_of_range("no pair at index " + std::to_string(i));
    const long cs = core_start, ce = core_start + static_cast<long>(core.size());
    if (i >= cs && i < ce) return core[i - cs];
    if (i >= ce) return rcyc[mod(i - ce, static_cast<long>(rcyc.size()))];
    return lcyc[mod(i - cs, static_cast<long>(lcyc.size()))];
}

long Word::first_position() const {
    if (has_left_tail()) throw std::logic_error("word has no first position");
    return 0;
}

long Word::last_position() const {
    if (has_right_tail()) throw std::logic_error("word has no last position");
    return shape == Shape::Finite ? static_cast<long>(core.size()) : 0;
}

bool Word::operator==(const Word& o) const {
    if (shape != o.shape) return false;
    switch (shape) {
        case Shape::Trivial: return vertex == o.vertex && delta == o.delta;
        case Shape::Finite: return core == o.core;
        case Shape::Right: return core == o.core && rcyc == o.rcyc;
        case Shape::Left: return core == o.core && lcyc == o.lcyc;
        case Shape::Bi: return core == o.core && lcyc == o.lcyc && rcyc == o.rcyc && core_start == o.core_start;
    }
    return false;
}

int net(const std::vector<WPair>& block) {
    int s = 0;
    for (const auto& p : block) s += p.H();
    return s;
}

Word normalize(Word w) {
    switch (w.shape) {
        case Shape::Trivial:
            w.core.clear();
            w.lcyc.clear();
            w.rcyc.clear();
            w.core_start = 1;
            return w;
        case Shape::Finite:
            w.core_start = 1;
            return w;
        case Shape::Right:
            w.rcyc = primitive(w.rcyc);
            while (!w.core.empty() && w.core.back() == w.rcyc.back()) {
                w.core.pop_back();
                rotate_right(w.rcyc);
            }
            w.core_start = 1;
            return w;
        case Shape::Left:
            w.lcyc = primitive(w.lcyc);
            while (!w.core.empty() && w.core.front() == w.lcyc.front()) {
                w.core.erase(w.core.begin());
                rotate_left(w.lcyc);
            }
            w.core_start = 1 - static_cast<long>(w.core.size());
            return w;
        case Shape::Bi: {
            w.lcyc = primitive(w.lcyc);
            w.rcyc = primitive(w.rcyc);
            while (!w.core.empty() && w.core.back() == w.rcyc.back()) {
                w.core.pop_back();
                rotate_right(w.rcyc);
            }
            while (!w.core.empty() && w.core.front() == w.lcyc.front()) {
                w.core.erase(w.core.begin());
                rotate_left(w.lcyc);
                ++w.core_start;
            }
            if (!w.core.empty()) return w;
            if (w.lcyc == w.rcyc) {
                // pure periodic: start the block at index 1
                const long p = static_cast<long>(w.rcyc.size());
                std::vector<WPair> b(p);
                for (long k = 0; k < p; ++k) b[k] = w.rcyc[mod(1 + k - w.core_start, p)];
                w.lcyc = w.rcyc = b;
                w.core_start = 1;
                return w;
            }
            // extend the right periodic region leftwards as far as possible
            const long bound = static_cast<long>(w.lcyc.size() * w.rcyc.size()) + 2;
            for (long k = 0; k < bound && w.lcyc.back() == w.rcyc.back(); ++k) {
                rotate_right(w.lcyc);
                rotate_right(w.rcyc);
                --w.core_start;
            }
            return w;
        }
    }
    return w;
}

Word shift(const Word& w, long t) {
    if (w.shape != Shape::Bi) return w;
    Word r = w;
    r.core_start -= t;
    return normalize(r);
}

long mu(const Word& w, long i) {
    if (!w.has_position(i)) throw std::out_of_range("position " + std::to_string(i) + " not in the index set");
    long s = 0;
    if (i > 0)
        for (long k = 1; k <= i; ++k) s += w.pair_at(k).H();
    else
        for (long k = i + 1; k <= 0; ++k) s -= w.pair_at(k).H();
    return s;
}

bool is_pure_periodic(const Word& w) { return w.shape == Shape::Bi && w.core.empty() && w.lcyc == w.rcyc; }

std::optional<long> period(const Word& w) {
    if (!is_pure_periodic(w) || net(w.rcyc) != 0) return std::nullopt;
    return static_cast<long>(w.rcyc.size());
}

bool controlled_homogeny(const Word& w) {
    switch (w.shape) {
        case Shape::Trivial:
        case Shape::Finite: return true;
        case Shape::Right: return net(w.rcyc) != 0;
        case Shape::Left: return net(w.lcyc) != 0;
        case Shape::Bi: return net(w.lcyc) != 0 && net(w.rcyc) != 0;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Signs

Signs assign_signs(const Presentation& p) {
    Signs s;
    s.arrow.assign(p.num_arrows(), 0);
    s.inv.assign(p.num_arrows(), 0);
    for (std::size_t v = 0; v < p.num_vertices(); ++v) {
        // letters with head v: (arrow, is_inverse)
        std::vector<std::pair<int, bool>> letters;
        for (std::size_t a = 0; a < p.num_arrows(); ++a) {
            if (p.arrow(static_cast<int>(a)).head == static_cast<int>(v)) letters.emplace_back(static_cast<int>(a), false);
            if (p.arrow(static_cast<int>(a)).tail == static_cast<int>(v)) letters.emplace_back(static_cast<int>(a), true);
        }
        const std::size_t n = letters.size();
        if (n == 0) continue;
        auto allowed = [&](const std::pair<int, bool>& x, const std::pair<int, bool>& y) {
            if (x.second == y.second) return false;
            const auto& inv = x.second ? x : y;
            const auto& dir = x.second ? y : x;
            return p.in_rho(inv.first, dir.first);
        };
        bool found = false;
        for (std::uint32_t mask = 0; mask < (1u << n) && !found; mask += 2) {  // first letter stays +1
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i)
                for (std::size_t j = i + 1; j < n && ok; ++j)
                    if (((mask >> i) & 1u) == ((mask >> j) & 1u) && !allowed(letters[i], letters[j])) ok = false;
            if (!ok) continue;
            found = true;
            for (std::size_t i = 0; i < n; ++i) {
                int sg = ((mask >> i) & 1u) ? -1 : 1;
                if (letters[i].second) s.inv[letters[i].first] = sg;
                else s.arrow[letters[i].first] = sg;
            }
        }
        if (!found)
            throw std::invalid_argument("no sign assignment exists at vertex " + p.vertex_name(static_cast<int>(v)));
    }
    return s;
}

bool signs_valid(const Presentation& p, const Signs& s) {
    for (std::size_t v = 0; v < p.num_vertices(); ++v) {
        std::vector<std::pair<int, bool>> letters;
        for (std::size_t a = 0; a < p.num_arrows(); ++a) {
            if (p.arrow(static_cast<int>(a)).head == static_cast<int>(v)) letters.emplace_back(static_cast<int>(a), false);
            if (p.arrow(static_cast<int>(a)).tail == static_cast<int>(v)) letters.emplace_back(static_cast<int>(a), true);
        }
        for (std::size_t i = 0; i < letters.size(); ++i)
            for (std::size_t j = i + 1; j < letters.size(); ++j) {
                auto [a, ia] = letters[i];
                auto [b, ib] = letters[j];
                int sa = ia ? s.inv[a] : s.arrow[a];
                int sb = ib ? s.inv[b] : s.arrow[b];
                if (sa != sb) continue;
                if (ia == ib) return false;
                int inv = ia ? a : b, dir = ia ? b : a;
                if (!p.in_rho(inv, dir)) return false;
            }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(const Presentation& p) : p_(&p), s_(assign_signs(p)) {}

int Alphabet::head(const Letter& q) const {
    switch (q.kind) {
        case Letter::Kind::Direct: return p_->head(q.gamma);
        case Letter::Kind::Inverse: return p_->tail(q.gamma);
        case Letter::Kind::D:
        case Letter::Kind::DInv: return p_->arrow(q.arrow).head;
    }
    return 0;
}

int Alphabet::sign(const Letter& q) const {
    switch (q.kind) {
        case Letter::Kind::Direct: return s_.arrow[q.gamma.first()];
        case Letter::Kind::Inverse: return s_.inv[q.gamma.last()];
        case Letter::Kind::D:
        case Letter::Kind::DInv: return -s_.arrow[q.arrow];
    }
    return 0;
}

std::optional<int> Alphabet::arrow_with_head_sign(int v, int sg) const {
    for (int a : p_->arrows_with_head(v))
        if (s_.arrow[a] == sg) return a;
    return std::nullopt;
}

std::optional<int> Alphabet::arrow_with_tail_inv_sign(int v, int sg) const {
    for (int a : p_->arrows_with_tail(v))
        if (s_.inv[a] == sg) return a;
    return std::nullopt;
}

std::optional<std::string> Alphabet::check_pair(const WPair& pr) const {
    if (pr.gamma.is_trivial()) return "pair uses a trivial path";
    for (int a : pr.gamma.arrows)
        if (a < 0 || a >= static_cast<int>(p_->num_arrows())) return "unknown arrow";
    for (std::size_t i = 0; i + 1 < pr.gamma.arrows.size(); ++i)
        if (p_->arrow(pr.gamma.arrows[i + 1]).head != p_->arrow(pr.gamma.arrows[i]).tail)
            return "path " + p_->path_str(pr.gamma) + " is not composable";
    if (!p_->is_rho_avoiding(pr.gamma)) return "path " + p_->path_str(pr.gamma) + " lies in the ideal";
    return std::nullopt;
}

std::optional<std::string> Alphabet::check_consecutive(const WPair& a, const WPair& b) const {
    using T = WPair::Type;
    const Path &g = a.gamma, &l = b.gamma;
    if (a.type == T::InvD && b.type == T::DInv) {
        if (p_->head(g) != p_->head(l)) return "gamma^-1 d d^-1 lambda needs h(gamma)=h(lambda)";
        if (g.first() == l.first()) return "gamma^-1 d d^-1 lambda needs f(gamma)!=f(lambda)";
    } else if (a.type == T::DInv && b.type == T::DInv) {
        if (!p_->in_rho(g.last(), l.first())) return "d^-1 gamma d^-1 lambda needs l(gamma)f(lambda) in rho";
    } else if (a.type == T::DInv && b.type == T::InvD) {
        if (p_->tail(g) != p_->tail(l)) return "d^-1 gamma lambda^-1 d needs t(gamma)=t(lambda)";
        if (g.last() == l.last()) return "d^-1 gamma lambda^-1 d needs l(gamma)!=l(lambda)";
    } else {
        if (!p_->in_rho(l.last(), g.first())) return "gamma^-1 d lambda^-1 d needs l(lambda)f(gamma) in rho";
    }
    return std::nullopt;
}

int Alphabet::left_vertex(const WPair& pr) const {
    return pr.type == WPair::Type::InvD ? p_->tail(pr.gamma) : p_->head(pr.gamma);
}

int Alphabet::right_vertex(const WPair& pr) const {
    return pr.type == WPair::Type::InvD ? p_->head(pr.gamma) : p_->tail(pr.gamma);
}

std::optional<WordError> Alphabet::validate(const Word& w) const {
    if (w.shape == Shape::Trivial) {
        if (w.vertex < 0 || w.vertex >= static_cast<int>(p_->num_vertices())) return WordError{0, "unknown vertex"};
        if (w.delta != 1 && w.delta != -1) return WordError{0, "sign must be +1 or -1"};
        return std::nullopt;
    }
    if (w.shape == Shape::Finite && w.core.empty()) return WordError{0, "finite word without pairs"};
    if (w.has_left_tail() && w.lcyc.empty()) return WordError{0, "empty left cycle"};
    if (w.has_right_tail() && w.rcyc.empty()) return WordError{0, "empty right cycle"};
    long lo = w.has_left_tail() ? w.core_start - 2 * static_cast<long>(w.lcyc.size()) - 1 : 1;
    long hi = w.has_right_tail() ? w.right_region_start() + 2 * static_cast<long>(w.rcyc.size()) + 1 : w.last_position();
    for (long i = lo; i <= hi; ++i) {
        if (auto e = check_pair(w.pair_at(i))) return WordError{i, *e};
        if (i < hi)
            if (auto e = check_consecutive(w.pair_at(i), w.pair_at(i + 1))) return WordError{i + 1, *e};
    }
    return std::nullopt;
}

Word Alphabet::make(const Word& w) const {
    Word n = normalize(w);
    if (auto e = validate(n)) throw std::invalid_argument("invalid word at pair " + std::to_string(e->pair_index) + ": " + e->message);
    return n;
}

int Alphabet::vertex(const Word& w, long i) const {
    if (!w.has_position(i)) throw std::out_of_range("position " + std::to_string(i) + " not in the index set");
    if (w.is_trivial()) return w.vertex;
    if (w.has_pair(i + 1)) return left_vertex(w.pair_at(i + 1));
    return right_vertex(w.pair_at(i));
}

std::pair<int, int> Alphabet::head_sign(const Word& w) const {
    if (w.is_trivial()) return {w.vertex, w.delta};
    if (w.has_left_tail()) throw std::logic_error("head and sign need a word with a first letter");
    const WPair& f = w.pair_at(1);
    if (f.type == WPair::Type::InvD) return {p_->tail(f.gamma), s_.inv[f.gamma.last()]};
    return {p_->head(f.gamma), -s_.arrow[f.gamma.first()]};
}

std::pair<int, int> Alphabet::inverse_head_sign(const Word& w) const {
    if (w.is_trivial()) return {w.vertex, -w.delta};
    return head_sign(inverse(w));
}

Word Alphabet::inverse(const Word& w) const {
    Word r;
    r.shape = w.shape;
    switch (w.shape) {
        case Shape::Trivial: return Word::trivial(w.vertex, -w.delta);
        case Shape::Finite:
            for (auto it = w.core.rbegin(); it != w.core.rend(); ++it) r.core.push_back(invert_pair(*it));
            return r;
        case Shape::Right:
        case Shape::Left:
        case Shape::Bi: {
            r.shape = w.shape == Shape::Right ? Shape::Left : w.shape == Shape::Left ? Shape::Right : Shape::Bi;
            for (auto it = w.core.rbegin(); it != w.core.rend(); ++it) r.core.push_back(invert_pair(*it));
            for (auto it = w.rcyc.rbegin(); it != w.rcyc.rend(); ++it) r.lcyc.push_back(invert_pair(*it));
            for (auto it = w.lcyc.rbegin(); it != w.lcyc.rend(); ++it) r.rcyc.push_back(invert_pair(*it));
            r.core_start = 2 - w.core_start - static_cast<long>(w.core.size());
            if (r.shape == Shape::Right) r.core_start = 1;
            return normalize(r);
        }
    }
    return r;
}

Word Alphabet::compose(const Word& c, const Word& d) const {
    if (c.has_right_tail()) throw std::invalid_argument("compose: left factor must be finite or a -N-word");
    if (d.has_left_tail()) throw std::invalid_argument("compose: right factor must be finite or an N-word");
    auto [hc, sc] = inverse_head_sign(c);
    auto [hd, sd] = head_sign(d);
    if (hc != hd) throw std::invalid_argument("compose: head mismatch");
    if (sc != -sd) throw std::invalid_argument("compose: sign mismatch");
    if (c.is_trivial()) return d;
    if (d.is_trivial()) return c;
    Word r;
    if (c.shape == Shape::Finite && d.shape == Shape::Finite) {
        r = Word::finite(c.core);
        r.core.insert(r.core.end(), d.core.begin(), d.core.end());
    } else if (c.shape == Shape::Finite) {
        r.shape = Shape::Right;
        r.core = c.core;
        r.core.insert(r.core.end(), d.core.begin(), d.core.end());
        r.rcyc = d.rcyc;
    } else if (d.shape == Shape::Finite) {
        r.shape = Shape::Left;
        r.core = c.core;
        r.core.insert(r.core.end(), d.core.begin(), d.core.end());
        r.lcyc = c.lcyc;
    } else {
        r.shape = Shape::Bi;
        r.core = c.core;
        r.core.insert(r.core.end(), d.core.begin(), d.core.end());
        r.lcyc = c.lcyc;
        r.rcyc = d.rcyc;
        r.core_start = 1 - static_cast<long>(c.core.size());
    }
    return make(r);
}

namespace {

// d^-1 pairs > end of word > gamma^-1 d pairs; shorter d^-1 gamma is bigger,
// longer gamma^-1 d is bigger.
std::pair<int, long> order_key(const Word& w, long i) {
    if (!w.has_pair(i)) return {1, 0};
    const WPair& p = w.pair_at(i);
    if (p.type == WPair::Type::DInv) return {2, -static_cast<long>(p.gamma.length())};
    return {0, static_cast<long>(p.gamma.length())};
}

}  // namespace

int Alphabet::compare(const Word& a, const Word& b) const {
    if (head_sign(a) != head_sign(b)) throw std::invalid_argument("compare: words differ in head or sign");
    long bound;
    auto len = [](const Word& w) { return static_cast<long>(w.core.size()); };
    if (a.is_finite() && b.is_finite()) {
        bound = std::max(len(a), len(b)) + 1;
    } else {
        long la = a.has_right_tail() ? static_cast<long>(a.rcyc.size()) : 1;
        long lb = b.has_right_tail() ? static_cast<long>(b.rcyc.size()) : 1;
        bound = std::max(len(a), len(b)) + std::lcm(la, lb) + 2;
    }
    for (long i = 1; i <= bound; ++i) {
        auto ka = order_key(a, i), kb = order_key(b, i);
        if (ka != kb) return ka < kb ? -1 : 1;
        if (ka.first == 1) return 0;
        const WPair &pa = a.pair_at(i), &pb = b.pair_at(i);
        if (pa != pb) return pa.gamma.arrows < pb.gamma.arrows ? -1 : 1;  // not reached in one W_{v,delta}
    }
    return 0;
}

std::optional<Equivalence> Alphabet::equivalence(const Word& c, const Word& cp) const {
    Word target = normalize(cp);
    for (int o : {1, -1}) {
        Word x = o > 0 ? normalize(c) : inverse(c);
        if (x.shape != target.shape) continue;
        if (x.shape != Shape::Bi) {
            if (x == target) return Equivalence{o, 0};
            continue;
        }
        if (is_pure_periodic(x)) {
            const long p = static_cast<long>(x.rcyc.size());
            for (long m = 0; m < p; ++m)
                if (shift(x, m) == target) return Equivalence{o, m};
            continue;
        }
        long m = x.core_start - target.core_start;
        if (shift(x, m) == target) return Equivalence{o, m};
    }
    return std::nullopt;
}

WordClass Alphabet::canonical_class(const Word& c) const {
    WordClass best;
    bool have = false;
    for (int o : {1, -1}) {
        Word x = o > 0 ? normalize(c) : inverse(c);
        std::vector<long> shifts{0};
        if (x.shape == Shape::Bi) {
            if (is_pure_periodic(x)) {
                shifts.clear();
                for (long m = 0; m < static_cast<long>(x.rcyc.size()); ++m) shifts.push_back(m);
            } else {
                shifts = {x.core_start - 1};
            }
        }
        for (long m : shifts) {
            Word y = shift(x, m);
            std::string key = str(y);
            if (!have || key < best.key) {
                best = {y, key, o, m};
                have = true;
            }
        }
    }
    return best;
}

long Alphabet::correspond(const Word& c, const Equivalence& e, long j) const {
    if (c.shape == Shape::Bi) return e.orient > 0 ? j + e.shift : -(j + e.shift);
    if (e.orient > 0) return j;
    if (c.is_finite()) return c.last_position() - j;
    return -j;
}

Word Alphabet::suffix_after(const Word& c, long i) const {
    if (!c.has_position(i)) throw std::out_of_range("suffix: bad position");
    if (c.is_trivial()) return c;
    if (!c.has_pair(i + 1)) {
        auto [v, s] = head_sign(prefix_inverse(c, i));
        return Word::trivial(v, -s);
    }
    Word r;
    if (c.has_right_tail()) {
        r.shape = Shape::Right;
        const long rs = c.right_region_start();
        for (long k = i + 1; k < rs; ++k) r.core.push_back(c.pair_at(k));
        for (long k = 0; k < static_cast<long>(c.rcyc.size()); ++k) r.rcyc.push_back(c.pair_at(std::max(i + 1, rs) + k));
    } else {
        r.shape = Shape::Finite;
        for (long k = i + 1; k <= c.last_position(); ++k) r.core.push_back(c.pair_at(k));
    }
    return normalize(r);
}

Word Alphabet::prefix_inverse(const Word& c, long i) const {
    if (!c.has_position(i)) throw std::out_of_range("prefix: bad position");
    if (c.is_trivial()) return inverse(c);
    if (!c.has_pair(i)) {
        auto [v, s] = head_sign(suffix_after(c, i));
        return Word::trivial(v, -s);
    }
    Word pre;
    if (c.has_left_tail()) {
        pre.shape = Shape::Left;
        const long L = static_cast<long>(c.lcyc.size());
        const long start = std::min(i + 1, c.core_start);
        for (long k = start; k <= i; ++k) pre.core.push_back(c.pair_at(k));
        for (long k = 0; k < L; ++k) pre.lcyc.push_back(c.pair_at(start - L + k));
        pre.core_start = 1 - static_cast<long>(pre.core.size());
    } else {
        pre.shape = Shape::Finite;
        for (long k = 1; k <= i; ++k) pre.core.push_back(c.pair_at(k));
    }
    return inverse(normalize(pre));
}

Word Alphabet::split(const Word& c, long i, int delta) const {
    Word s = suffix_after(c, i);
    if (head_sign(s).second == delta) return s;
    return prefix_inverse(c, i);
}

long Alphabet::axis(const Word& b, const Word& d) const {
    const bool bi = b.has_right_tail(), di = d.has_right_tail();
    if (bi && di) return 0;
    if (bi) return -d.length();
    return b.length();
}

std::optional<long> Alphabet::r_offset(const Word& b, const Word& d, const Word& bp, const Word& dp) const {
    Word c = join(b, d), cp = join(bp, dp);
    auto e = equivalence(c, cp);
    if (!e) return std::nullopt;
    return mu(c, correspond(c, *e, axis(bp, dp))) - mu(c, axis(b, d));
}

namespace {

bool block_matches_cycle(const std::vector<WPair>& block, const std::vector<std::vector<int>>& cycles) {
    if (block.empty()) return false;
    const auto t = block.front().type;
    std::vector<int> arrows;
    for (const auto& p : block) {
        if (p.type != t || p.gamma.length() != 1) return false;
        arrows.push_back(p.gamma.first());
    }
    if (t == WPair::Type::InvD) std::reverse(arrows.begin(), arrows.end());
    for (const auto& cyc : cycles) {
        if (cyc.size() != arrows.size()) continue;
        for (std::size_t r = 0; r < cyc.size(); ++r) {
            bool ok = true;
            for (std::size_t k = 0; k < cyc.size() && ok; ++k) ok = arrows[k] == cyc[(k + r) % cyc.size()];
            if (ok) return true;
        }
    }
    return false;
}

}  // namespace

Boundedness Alphabet::boundedness(const Word& w) const {
    Boundedness b;
    auto cycles = p_->full_cycles();
    bool any = false, all = true;
    if (w.has_right_tail()) {
        int n = net(w.rcyc);
        if (n > 0) b.mu_bounded_above = false;
        if (n < 0) b.mu_bounded_below = false;
        any = true;
        all = all && block_matches_cycle(w.rcyc, cycles);
    }
    if (w.has_left_tail()) {
        int n = net(w.lcyc);  // walking left subtracts n per block
        if (n > 0) b.mu_bounded_below = false;
        if (n < 0) b.mu_bounded_above = false;
        any = true;
        all = all && block_matches_cycle(w.lcyc, cycles);
    }
    b.tails_are_full_cycle_words = any && all;
    return b;
}

bool Alphabet::is_acyclic_string(const Word& w) const {
    Word n = normalize(w);
    return is_pure_periodic(n) && block_matches_cycle(n.rcyc, p_->full_cycles());
}

Word Alphabet::acyclic_word(const std::vector<int>& cycle) const {
    Word w;
    w.shape = Shape::Bi;
    for (auto it = cycle.rbegin(); it != cycle.rend(); ++it) w.rcyc.push_back({WPair::Type::InvD, Path::arrow(*it)});
    w.lcyc = w.rcyc;
    return make(w);
}

std::vector<Path> Alphabet::paths_with_first(int arrow, std::size_t max_len) const {
    std::vector<Path> out, layer{Path::arrow(arrow)};
    for (std::size_t len = 1; len <= max_len && !layer.empty(); ++len) {
        out.insert(out.end(), layer.begin(), layer.end());
        std::vector<Path> next;
        for (const auto& q : layer)
            for (std::size_t b = 0; b < p_->num_arrows(); ++b)
                if (p_->composes(q.last(), static_cast<int>(b))) {
                    Path r = q;
                    r.arrows.push_back(static_cast<int>(b));
                    next.push_back(r);
                }
        layer = std::move(next);
    }
    return out;
}

std::vector<Path> Alphabet::paths_with_last(int arrow, std::size_t max_len) const {
    std::vector<Path> out, layer{Path::arrow(arrow)};
    for (std::size_t len = 1; len <= max_len && !layer.empty(); ++len) {
        out.insert(out.end(), layer.begin(), layer.end());
        std::vector<Path> next;
        for (const auto& q : layer)
            for (std::size_t b = 0; b < p_->num_arrows(); ++b)
                if (p_->composes(static_cast<int>(b), q.first())) {
                    Path r;
                    r.arrows.push_back(static_cast<int>(b));
                    r.arrows.insert(r.arrows.end(), q.arrows.begin(), q.arrows.end());
                    next.push_back(r);
                }
        layer = std::move(next);
    }
    return out;
}

std::vector<WPair> Alphabet::extensions(const Word& w, std::size_t max_len) const {
    if (!w.is_finite()) throw std::invalid_argument("extensions need a finite word");
    std::optional<int> first_arrow, last_arrow;  // for d^-1 lambda, for lambda^-1 d
    if (w.is_trivial()) {
        first_arrow = arrow_with_head_sign(w.vertex, -w.delta);
        last_arrow = arrow_with_tail_inv_sign(w.vertex, w.delta);
    } else {
        const WPair& a = w.pair_at(w.last_position());
        const Path& g = a.gamma;
        if (a.type == WPair::Type::InvD) {
            for (int x : p_->arrows_with_head(p_->head(g)))
                if (x != g.first()) first_arrow = x;
            for (std::size_t b = 0; b < p_->num_arrows(); ++b)
                if (p_->in_rho(static_cast<int>(b), g.first())) last_arrow = static_cast<int>(b);
        } else {
            for (std::size_t b = 0; b < p_->num_arrows(); ++b)
                if (p_->in_rho(g.last(), static_cast<int>(b))) first_arrow = static_cast<int>(b);
            for (int x : p_->arrows_with_tail(p_->tail(g)))
                if (x != g.last()) last_arrow = x;
        }
    }
    std::vector<WPair> out;
    if (first_arrow)
        for (auto& q : paths_with_first(*first_arrow, max_len)) out.push_back({WPair::Type::DInv, q});
    if (last_arrow)
        for (auto& q : paths_with_last(*last_arrow, max_len)) out.push_back({WPair::Type::InvD, q});
    return out;
}

bool Alphabet::can_append(const Word& w, const WPair& next) const {
    if (!w.is_finite() || check_pair(next)) return false;
    if (w.is_trivial()) {
        Word one = Word::finite({next});
        return head_sign(one) == std::make_pair(w.vertex, w.delta);
    }
    return !check_consecutive(w.pair_at(w.last_position()), next);
}

Word Alphabet::append(const Word& w, const WPair& next) const {
    if (!can_append(w, next)) throw std::invalid_argument("pair cannot be appended");
    if (w.is_trivial()) return Word::finite({next});
    Word r = w;
    r.core.push_back(next);
    return r;
}

// ---------------------------------------------------------------------------
// Text form

std::string Alphabet::letter_str(const Letter& q) const {
    auto power_name = [&](const Path& g, bool inv) -> std::string {
        bool same = std::all_of(g.arrows.begin(), g.arrows.end(), [&](int a) { return a == g.first(); });
        const std::string& n = p_->arrow(g.first()).name;
        if (g.length() == 1) return inv ? n + "^-1" : n;
        if (same) return n + "^" + (inv ? "-" : "") + std::to_string(g.length());
        return inv ? "(" + p_->path_str(g) + ")^-1" : p_->path_str(g);
    };
    switch (q.kind) {
        case Letter::Kind::Direct: return power_name(q.gamma, false);
        case Letter::Kind::Inverse: return power_name(q.gamma, true);
        case Letter::Kind::D: return "d_" + p_->arrow(q.arrow).name;
        case Letter::Kind::DInv: return "d_" + p_->arrow(q.arrow).name + "^-1";
    }
    return "";
}

std::string Alphabet::pair_str(const WPair& pr) const {
    if (pr.type == WPair::Type::InvD)
        return letter_str({Letter::Kind::Inverse, pr.gamma, 0}) + " " + letter_str({Letter::Kind::D, {}, pr.gamma.first()});
    return letter_str({Letter::Kind::DInv, {}, pr.gamma.first()}) + " " + letter_str({Letter::Kind::Direct, pr.gamma, 0});
}

std::string Alphabet::str(const Word& w) const {
    auto block = [&](long from, long to) {
        std::string s;
        for (long i = from; i <= to; ++i) s += (s.empty() ? "" : " ") + pair_str(w.pair_at(i));
        return s;
    };
    auto cyc = [&](const std::vector<WPair>& b) {
        std::string s;
        for (const auto& p : b) s += (s.empty() ? "" : " ") + pair_str(p);
        return s;
    };
    switch (w.shape) {
        case Shape::Trivial: return "1_{" + p_->vertex_name(w.vertex) + "," + (w.delta > 0 ? "+" : "-") + "}";
        case Shape::Finite: return block(1, w.last_position());
        case Shape::Right: {
            std::string c = cyc(w.core);
            return (c.empty() ? "" : c + " ") + "(" + cyc(w.rcyc) + ")^inf";
        }
        case Shape::Left: {
            std::string c = cyc(w.core);
            return "^inf(" + cyc(w.lcyc) + ")" + (c.empty() ? "" : " " + c);
        }
        case Shape::Bi: {
            if (is_pure_periodic(w) && w.core_start == 1) return "^inf(" + cyc(w.rcyc) + ")^inf";
            const long lo = std::min(w.core_start, 1L);
            const long hi = std::max(w.right_region_start() - 1, 0L);
            const long L = static_cast<long>(w.lcyc.size()), R = static_cast<long>(w.rcyc.size());
            std::vector<WPair> lb, rb;
            for (long k = 0; k < L; ++k) lb.push_back(w.pair_at(lo - L + k));
            for (long k = 0; k < R; ++k) rb.push_back(w.pair_at(hi + 1 + k));
            std::string left = block(lo, 0), right = block(1, hi);
            std::string s = "^inf(" + cyc(lb) + ")";
            if (!left.empty()) s += " " + left;
            s += " |";
            if (!right.empty()) s += " " + right;
            return s + " (" + cyc(rb) + ")^inf";
        }
    }
    return "";
}

namespace {

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<Word> Alphabet::from_letters(const std::vector<Letter>& letters, std::string* error) const {
    auto fail = [&](const std::string& m) -> std::optional<Word> {
        if (error) *error = m;
        return std::nullopt;
    };
    if (letters.empty() || letters.size() % 2) return fail("a word needs a positive even number of letters");
    std::vector<WPair> pairs;
    for (std::size_t i = 0; i < letters.size(); i += 2) {
        const Letter &l = letters[i], &r = letters[i + 1];
        const long idx = static_cast<long>(i / 2 + 1);
        if (l.kind == Letter::Kind::Inverse && r.kind == Letter::Kind::D) {
            if (l.gamma.is_trivial() || r.arrow != l.gamma.first())
                return fail("pair " + std::to_string(idx) + ": d must carry the first arrow of the path");
            pairs.push_back({WPair::Type::InvD, l.gamma});
        } else if (l.kind == Letter::Kind::DInv && r.kind == Letter::Kind::Direct) {
            if (r.gamma.is_trivial() || l.arrow != r.gamma.first())
                return fail("pair " + std::to_string(idx) + ": d must carry the first arrow of the path");
            pairs.push_back({WPair::Type::DInv, r.gamma});
        } else {
            return fail("pair " + std::to_string(idx) + ": malformed pair " + letter_str(l) + " " + letter_str(r));
        }
    }
    Word w = Word::finite(pairs);
    if (auto e = validate(w)) return fail("pair " + std::to_string(e->pair_index) + ": " + e->message);
    return w;
}

Word Alphabet::parse(const std::string& input) const {
    const std::string text = strip(input);
    auto fail = [&](const std::string& m) -> Word { throw std::invalid_argument("word '" + text + "': " + m); };
    if (text.rfind("1_{", 0) == 0) {
        if (text.back() != '}') fail("bad trivial word");
        std::string body = text.substr(3, text.size() - 4);
        auto comma = body.find(',');
        if (comma == std::string::npos) fail("bad trivial word");
        auto v = p_->find_vertex(strip(body.substr(0, comma)));
        std::string sg = strip(body.substr(comma + 1));
        if (!v) fail("unknown vertex");
        if (sg != "+" && sg != "-" && sg != "+1" && sg != "-1") fail("sign must be + or -");
        return Word::trivial(*v, sg[0] == '-' ? -1 : 1);
    }

    auto parse_letter = [&](const std::string& tok) -> Letter {
        Letter q;
        if (tok.rfind("d_", 0) == 0) {
            std::string name = tok.substr(2);
            q.kind = Letter::Kind::D;
            if (name.size() > 3 && name.compare(name.size() - 3, 3, "^-1") == 0) {
                name = name.substr(0, name.size() - 3);
                q.kind = Letter::Kind::DInv;
            }
            auto a = p_->find_arrow(name);
            if (!a) fail("unknown arrow in '" + tok + "'");
            q.arrow = *a;
            return q;
        }
        std::string body = tok;
        bool inv = false;
        if (body.find('*') != std::string::npos) {
            if (body.size() > 3 && body.compare(body.size() - 3, 3, "^-1") == 0) {
                inv = true;
                body = body.substr(0, body.size() - 3);
            }
        } else {
            auto caret = body.find("^-");
            if (caret != std::string::npos) {
                inv = true;
                std::string k = body.substr(caret + 2);
                body = body.substr(0, caret) + (k == "1" ? "" : "^" + k);
            }
        }
        auto path = p_->parse_path(body);
        if (!path || path->is_trivial()) fail("bad letter '" + tok + "'");
        q.kind = inv ? Letter::Kind::Inverse : Letter::Kind::Direct;
        q.gamma = *path;
        return q;
    };

    auto letters_of = [&](const std::string& s) {
        std::vector<Letter> out;
        std::size_t i = 0;
        while (i < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[i]))) {
                ++i;
                continue;
            }
            if (s[i] == '(') {
                auto close = s.find(')', i);
                if (close == std::string::npos) fail("unbalanced parenthesis");
                if (s.compare(close + 1, 3, "^-1") != 0) fail("expected ^-1 after a parenthesised path");
                Letter q = parse_letter(s.substr(i + 1, close - i - 1));
                if (q.kind != Letter::Kind::Direct) fail("bad parenthesised path");
                q.kind = Letter::Kind::Inverse;
                out.push_back(q);
                i = close + 4;
                continue;
            }
            std::size_t j = i;
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(') ++j;
            out.push_back(parse_letter(s.substr(i, j - i)));
            i = j;
        }
        return out;
    };

    auto to_pairs = [&](const std::vector<Letter>& ls, const std::string& where) {
        if (ls.size() % 2) fail(where + " has an odd number of letters");
        std::vector<WPair> out;
        if (ls.empty()) return out;
        std::string err;
        // pair-shape checks only; consecutive checks happen on the assembled word
        for (std::size_t i = 0; i < ls.size(); i += 2) {
            auto w = from_letters({ls[i], ls[i + 1]}, &err);
            if (!w) fail(where + " " + err);
            out.push_back(w->core[0]);
        }
        return out;
    };

    std::string rest = text, left_block, right_block;
    bool has_left = false, has_right = false;
    if (rest.rfind("^inf(", 0) == 0) {
        int depth = 0;
        std::size_t close = std::string::npos;
        for (std::size_t i = 4; i < rest.size(); ++i) {
            if (rest[i] == '(') ++depth;
            if (rest[i] == ')' && --depth == 0) {
                close = i;
                break;
            }
        }
        if (close == std::string::npos) fail("unbalanced left tail");
        left_block = rest.substr(5, close - 5);
        has_left = true;
        rest = rest.substr(close + 1);
        if (rest.rfind("^inf", 0) == 0) {
            if (!strip(rest.substr(4)).empty()) fail("text after ^inf(E)^inf");
            right_block = left_block;
            has_right = true;
            rest = "|";
        }
    }
    {
        std::string r = strip(rest);
        if (!has_right && r.size() >= 4 && r.compare(r.size() - 4, 4, "^inf") == 0) {
            std::size_t close = r.size() - 5;
            if (r[close] != ')') fail("expected (BLOCK)^inf");
            int depth = 0;
            std::size_t open = std::string::npos;
            for (std::size_t i = close + 1; i-- > 0;) {
                if (r[i] == ')') ++depth;
                if (r[i] == '(' && --depth == 0) {
                    open = i;
                    break;
                }
            }
            if (open == std::string::npos) fail("unbalanced right tail");
            right_block = r.substr(open + 1, close - open - 1);
            has_right = true;
            rest = r.substr(0, open);
        }
    }
    std::string before = rest, after;
    bool has_axis = false;
    if (auto bar = rest.find('|'); bar != std::string::npos) {
        has_axis = true;
        before = rest.substr(0, bar);
        after = rest.substr(bar + 1);
        if (after.find('|') != std::string::npos) fail("more than one axis marker");
    }
    auto pb = to_pairs(letters_of(before), "core");
    auto pa = to_pairs(letters_of(after), "core");
    std::vector<WPair> core = pb;
    core.insert(core.end(), pa.begin(), pa.end());

    Word w;
    if (has_left && has_right) {
        w.shape = Shape::Bi;
        w.lcyc = to_pairs(letters_of(left_block), "left tail");
        w.rcyc = to_pairs(letters_of(right_block), "right tail");
        if (w.lcyc.empty() || w.rcyc.empty()) fail("empty periodic block");
        w.core = core;
        w.core_start = has_axis ? 1 - static_cast<long>(pb.size()) : 1;
    } else if (has_right) {
        if (has_axis && !pb.empty()) fail("an N-word has its axis at the start");
        w.shape = Shape::Right;
        w.rcyc = to_pairs(letters_of(right_block), "right tail");
        if (w.rcyc.empty()) fail("empty periodic block");
        w.core = core;
    } else if (has_left) {
        if (has_axis && !pa.empty()) fail("a -N-word has its axis at the end");
        w.shape = Shape::Left;
        w.lcyc = to_pairs(letters_of(left_block), "left tail");
        if (w.lcyc.empty()) fail("empty periodic block");
        w.core = core;
        w.core_start = 1 - static_cast<long>(core.size());
    } else {
        if (core.empty()) fail("empty word");
        w = Word::finite(core);
    }
    Word raw = w;
    if (auto e = validate(raw)) fail("pair " + std::to_string(e->pair_index) + ": " + e->message);
    return normalize(raw);
}

}  // namespace gentle
