#include "gentle/complexes.hpp"

#include <sstream>

namespace gentle {

IndexRange index_range(const Word& c, int lo, int hi) {
    IndexRange r;
    if (c.is_finite()) {
        r.last = c.is_trivial() ? 0 : c.last_position();
        return r;
    }
    if (!controlled_homogeny(c)) throw std::invalid_argument("word without controlled homogeny");
    if (c.has_right_tail()) {
        const long R = static_cast<long>(c.rcyc.size());
        const long n = net(c.rcyc);
        long minp = 0, maxp = 0, s = 0;
        for (const auto& p : c.rcyc) {
            s += p.H();
            minp = std::min(minp, s);
            maxp = std::max(maxp, s);
        }
        long pos = c.right_region_start() - 1;
        long m = mu(c, pos);
        while (!((n > 0 && m + minp > hi) || (n < 0 && m + maxp < lo))) {
            pos += R;
            m += n;
        }
        r.last = pos;
        (n > 0 ? r.open_above : r.open_below) = true;
    } else {
        r.last = 0;
    }
    if (c.has_left_tail()) {
        const long L = static_cast<long>(c.lcyc.size());
        const long n = net(c.lcyc);
        long minq = 0, maxq = 0, s = 0;
        for (auto it = c.lcyc.rbegin(); it != c.lcyc.rend(); ++it) {
            s -= it->H();
            minq = std::min(minq, s);
            maxq = std::max(maxq, s);
        }
        long pos = c.core_start - 1;
        long m = mu(c, pos);
        while (!((n > 0 && m + maxq < lo) || (n < 0 && m + minq > hi))) {
            pos -= L;
            m -= n;
        }
        r.first = pos;
        (n > 0 ? r.open_below : r.open_above) = true;
    } else {
        r.first = 0;
    }
    for (long i = r.first; i <= r.last; ++i) {
        long m = mu(c, i);
        if (m > hi) r.open_above = true;
        if (m < lo) r.open_below = true;
    }
    return r;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

template <class S> ProjComplex<S> parse_complex(const Presentation& P, const std::string& text) {
    ProjComplex<S> x(P);
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    auto fail = [&](const std::string& m) { throw std::invalid_argument("line " + std::to_string(ln) + ": " + m); };
    std::vector<std::tuple<int, std::string, std::string, std::string, int>> pending;
    while (std::getline(in, line)) {
        ++ln;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("window:", 0) == 0) {
            std::istringstream ws(line.substr(7));
            std::string range, flag;
            ws >> range;
            auto dots = range.find("..", 1);
            if (dots == std::string::npos) fail("expected 'window: LO..HI'");
            Window w;
            try {
                w.lo = std::stoi(range.substr(0, dots));
                w.hi = std::stoi(range.substr(dots + 2));
            } catch (const std::exception&) {
                fail("bad window bounds");
            }
            while (ws >> flag) {
                if (flag == "open-below") w.open_below = true;
                else if (flag == "open-above") w.open_above = true;
                else fail("unknown window flag '" + flag + "'");
            }
            x.window = w;
        } else if (line.rfind("degree", 0) == 0) {
            auto colon = line.find(':');
            if (colon == std::string::npos) fail("expected 'degree N:'");
            int n = 0;
            try {
                n = std::stoi(trim(line.substr(6, colon - 6)));
            } catch (const std::exception&) {
                fail("bad degree");
            }
            std::istringstream gs(line.substr(colon + 1));
            std::string tok;
            while (gs >> tok) {
                if (tok != "gen") fail("expected 'gen NAME@VERTEX'");
                if (!(gs >> tok)) fail("missing generator after 'gen'");
                auto at = tok.rfind('@');
                if (at == std::string::npos) fail("generator '" + tok + "' lacks @VERTEX");
                auto v = P.find_vertex(tok.substr(at + 1));
                if (!v) fail("unknown vertex '" + tok.substr(at + 1) + "'");
                if (x.find(tok.substr(0, at))) fail("duplicate generator '" + tok.substr(0, at) + "'");
                x.add_generator(tok.substr(0, at), *v, n);
            }
        } else if (line[0] == 'd' && line.size() > 1 && (line[1] == ' ' || line[1] == '\t')) {
            auto colon = line.find(':');
            auto arrow = line.find("->");
            if (colon == std::string::npos || arrow == std::string::npos || arrow < colon) fail("expected 'd N: SRC -> DST : EXPR'");
            auto colon2 = line.rfind(':');
            if (colon2 == std::string::npos || colon2 < arrow) fail("missing ': EXPR'");
            pending.emplace_back(std::stoi(trim(line.substr(1, colon - 1))), trim(line.substr(colon + 1, arrow - colon - 1)),
                                 trim(line.substr(arrow + 2, colon2 - arrow - 2)), trim(line.substr(colon2 + 1)), ln);
        } else {
            fail("unrecognised line");
        }
    }
    for (const auto& [n, src, dst, expr, l] : pending) {
        ln = l;
        auto s = x.find(src), t = x.find(dst);
        if (!s) fail("unknown generator '" + src + "'");
        if (!t) fail("unknown generator '" + dst + "'");
        if (x.gen(*s).degree != n) fail("generator '" + src + "' is not in degree " + std::to_string(n));
        try {
            x.add_to_entry(*s, *t, parse_elem<S>(P, expr));
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    return x;
}

template ProjComplex<Fp> parse_complex<Fp>(const Presentation&, const std::string&);
template ProjComplex<Rational> parse_complex<Rational>(const Presentation&, const std::string&);

}  // namespace gentle
