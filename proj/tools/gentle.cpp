#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gentle/decompose.hpp"
#include "gentle/functors.hpp"
#include "gentle/scramble.hpp"
#include "gentle/specio.hpp"

using namespace gentle;
using ojson = nlohmann::ordered_json;

namespace {

// Exit codes: 0 ok, 1 negative verdict (not gentle, verify failed), 2 input or runtime error.
constexpr int kNegative = 1;
constexpr int kError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ordered key/value report. Text mode prints "key: value" per entry; JSON
// mode folds repeated keys into arrays.
class Report {
public:
    void add(const std::string& key, const std::string& value) { items_.push_back({key, value}); }
    void add(const std::string& key, long value) { items_.push_back({key, value}); }
    void add_json(const std::string& key, ojson value) { items_.push_back({key, std::move(value)}); }
    void yes_no(const std::string& key, bool v) { add(key, v ? "yes" : "no"); }
    // Lines already in "key: value" form (complex files).
    void add_lines(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            auto c = line.find(": ");
            if (c == std::string::npos) add("line", line);
            else add(line.substr(0, c), line.substr(c + 2));
        }
    }
    void print(bool json) const {
        if (!json) {
            for (const auto& [k, v] : items_) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            return;
        }
        ojson out = ojson::object();
        std::map<std::string, int> count;
        for (const auto& [k, v] : items_) ++count[k];
        for (const auto& [k, v] : items_) {
            if (count[k] == 1) out[k] = v;
            else out[k].push_back(v);
        }
        std::cout << out.dump(2) << "\n";
    }

private:
    std::vector<std::pair<std::string, ojson>> items_;
};

struct Options {
    std::string field;
    int cap = -1;
    std::string window;
    std::uint64_t seed = 0;
    bool json = false;

    std::string alg, word, word2, file, tmodule, out, b, d;
    int degree = 0;
    int contractibles = 2;
    std::size_t max_len = 0, summands = 3, max_pairs = 5, band_dim = 2;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

std::optional<std::pair<int, int>> parse_window(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto dots = text.find("..", 1);
    if (dots == std::string::npos) throw UsageError("window must look like a..b, got '" + text + "'");
    int lo = 0, hi = 0;
    try {
        lo = std::stoi(text.substr(0, dots));
        hi = std::stoi(text.substr(dots + 2));
    } catch (const std::exception&) {
        throw UsageError("bad window bounds in '" + text + "'");
    }
    if (lo > hi) throw UsageError("empty window " + text);
    return std::make_pair(lo, hi);
}

Presentation load_algebra(const Options& o) {
    Presentation P = Presentation::load(o.alg);
    if (o.cap > 0) P.set_cap(o.cap);
    return P;
}

std::string shape_name(Shape s) {
    switch (s) {
        case Shape::Trivial: return "trivial";
        case Shape::Finite: return "finite";
        case Shape::Right: return "N-word";
        case Shape::Left: return "-N-word";
        case Shape::Bi: return "Z-word";
    }
    return "?";
}

template <class S> std::string matrix_str(const Matrix<S>& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) out += "; ";
        for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? " " : "") + to_string(m(i, j));
    }
    return out + "]";
}

// ---------------------------------------------------------------------------
// Field-free commands.

int cmd_validate(const Options& o, Report& r) {
    auto P = load_algebra(o);
    auto rep = P.validate();
    r.add("vertices", static_cast<long>(P.num_vertices()));
    r.add("arrows", static_cast<long>(P.num_arrows()));
    r.add("relations", static_cast<long>(P.rho().size()));
    r.yes_no("gentle", rep.gentle());
    for (const auto& f : rep.failures) r.add("failure", f);
    if (!o.out.empty()) {
        write_file(o.out, P.serialize());
        r.add("written", o.out);
    }
    return rep.gentle() ? 0 : kNegative;
}

int cmd_paths(const Options& o, Report& r) {
    auto P = load_algebra(o);
    auto dim = P.dimension();
    const std::size_t len = o.max_len ? o.max_len : static_cast<std::size_t>(P.cap());
    auto paths = P.pa_rho(len);
    if (dim) r.add("pa_rho", static_cast<long>(paths.size()));
    else r.add("pa_rho", "infinite");
    if (!dim) r.add("truncated_at_length", static_cast<long>(len));
    for (const auto& p : paths) r.add("path", P.path_str(p));
    if (dim) r.add("dimension", static_cast<long>(*dim));
    else r.add("dimension", "infinite");
    auto cycles = P.full_cycles();
    r.add("full_cycles", static_cast<long>(cycles.size()));
    for (const auto& c : cycles) {
        std::string name;
        for (int a : c) name += P.arrow(a).name;
        r.add("full_cycle", name);
    }
    return 0;
}

int cmd_word(const std::string& sub, const Options& o, Report& r) {
    auto P = load_algebra(o);
    Alphabet A(P);
    Word w = A.parse(o.word);
    if (sub == "normalize") {
        r.add("word", A.str(w));
        r.add("class", A.canonical_class(w).key);
        return 0;
    }
    if (sub == "compare") {
        Word w2 = A.parse(o.word2);
        const int c = A.compare(w, w2);
        r.add("compare", c < 0 ? "<" : c > 0 ? ">" : "=");
        if (auto e = A.equivalence(w, w2)) {
            r.add("equivalent", "yes");
            r.add("orient", static_cast<long>(e->orient));
            r.add("shift", e->shift);
        } else {
            r.add("equivalent", "no");
        }
        return 0;
    }
    r.add("word", A.str(w));
    r.add("shape", shape_name(w.shape));
    r.add("length", w.length());
    if (!w.has_left_tail()) {
        auto [v, s] = A.head_sign(w);
        r.add("head", P.vertex_name(v));
        r.add("sign", s > 0 ? "+" : "-");
    }
    r.yes_no("controlled_homogeny", w.is_finite() || controlled_homogeny(w));
    if (w.is_finite()) {
        std::string mus;
        for (long i = w.is_trivial() ? 0 : w.first_position(); i <= (w.is_trivial() ? 0 : w.last_position()); ++i)
            mus += (mus.empty() ? "" : " ") + std::to_string(mu(w, i));
        r.add("homogeny", mus);
    }
    if (w.shape == Shape::Bi)
        if (auto p = period(w)) r.add("period", *p);
    r.yes_no("acyclic_string", A.is_acyclic_string(w));
    r.add("class", A.canonical_class(w).key);
    return 0;
}

int cmd_singcat(const Options& o, Report& r) {
    auto P = load_algebra(o);
    Alphabet A(P);
    auto rep = singularity_report(A);
    if (!rep.ok) {
        r.add("error", rep.error);
        return kNegative;
    }
    for (const auto& c : rep.cycles) {
        if (o.json) {
            r.add_json("cycle", ojson{{"arrows", c.name}, {"length", c.length}, {"acyclic", A.str(c.acyclic)}});
        } else {
            r.add("cycle", c.name + " length=" + std::to_string(c.length) + " acyclic=" + A.str(c.acyclic));
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Commands that need a coefficient field.

template <class S> ProjComplex<S> build_from_word(const Alphabet& A, const Options& o) {
    Word w = A.parse(o.word);
    if (w.shape == Shape::Bi && period(normalize(w))) {
        TModule<S> V = o.tmodule.empty() ? TModule<S>::identity(1) : parse_tmodule<S>(o.tmodule);
        return build_band<S>(A, w, V);
    }
    if (!o.tmodule.empty()) throw UsageError("--tmodule only applies to periodic words");
    auto win = parse_window(o.window);
    return build_string<S>(A, w, w.is_finite() ? std::nullopt : win);
}

template <class S> void report_verify(const ProjComplex<S>& x, Report& r, const std::string& prefix = "") {
    auto v = verify(x);
    r.yes_no(prefix + "d_squared_zero", v.d_squared_zero);
    r.yes_no(prefix + "radical_images", v.radical_images);
    r.yes_no(prefix + "well_typed", v.well_typed);
    if (v.approximate) r.add(prefix + "approximate", "yes");
    for (const auto& w : v.witnesses) r.add(prefix + "witness", w);
    r.add(prefix + "verify", v.ok() ? "ok" : "failed");
}

template <class S> void emit_complex(const ProjComplex<S>& x, const Options& o, Report& r) {
    const std::string text = serialize_complex(x);
    if (!o.out.empty()) {
        write_file(o.out, text);
        r.add("written", o.out);
    } else {
        r.add_lines(text);
    }
}

template <class S> int cmd_complex(const std::string& sub, const Options& o, Report& r) {
    auto P = load_algebra(o);
    Alphabet A(P);
    r.add("field", field_name<S>());
    if (sub == "build") {
        auto x = build_from_word<S>(A, o);
        r.add("generators", static_cast<long>(x.size()));
        emit_complex(x, o, r);
        auto v = verify(x);
        r.add("verify", v.ok() ? "ok" : "failed");
        return v.ok() ? 0 : kNegative;
    }
    if (sub == "random") {
        std::mt19937_64 rng(o.seed);
        auto spec = random_spec<S>(A, rng, o.summands, o.max_pairs, o.band_dim);
        auto [x, planted] = scramble(realize(A, spec), rng, static_cast<std::size_t>(o.contractibles));
        std::istringstream lines(serialize_spec(A, spec));
        for (std::string l; std::getline(lines, l);) r.add("summand", l);
        r.add("planted", static_cast<long>(planted.size()));
        emit_complex(x, o, r);
        return 0;
    }
    auto x = parse_complex<S>(P, read_file(o.file));
    if (sub == "verify") {
        report_verify(x, r);
        return verify(x).ok() ? 0 : kNegative;
    }
    if (sub == "minimize") {
        auto m = minimize(x);
        r.add("stripped", static_cast<long>(m.stripped.size()));
        for (const auto& [n, v] : m.stripped) r.add("contractible", "degree " + std::to_string(n) + " vertex " + P.vertex_name(v));
        emit_complex(m.complex, o, r);
        return 0;
    }
    if (sub == "scramble") {
        std::mt19937_64 rng(o.seed);
        auto [y, planted] = scramble(x, rng, static_cast<std::size_t>(o.contractibles));
        r.add("planted", static_cast<long>(planted.size()));
        emit_complex(y, o, r);
        return 0;
    }
    if (sub == "homology") {
        auto win = parse_window(o.window);
        if (!win) {
            if (x.empty()) throw UsageError("empty complex: pass --window");
            auto deg = x.degrees();
            win = std::make_pair(deg.front() - 1, deg.back() + 1);
        }
        auto h = homology(x, win->first, win->second, true);
        if (h.approximate) r.add("approximate", "yes");
        for (const auto& [n, d] : h.dims) r.add("H^" + std::to_string(n), d ? std::to_string(*d) : "unknown");
        return 0;
    }
    throw UsageError("unknown complex command '" + sub + "'");
}

bool is_file(const std::string& s) { return std::ifstream(s).good(); }

template <class S> int cmd_iso(const Options& o, Report& r) {
    auto P = load_algebra(o);
    Alphabet A(P);
    if (is_file(o.word) && is_file(o.word2)) {
        auto x = parse_spec<S>(A, read_file(o.word));
        auto y = parse_spec<S>(A, read_file(o.word2));
        auto k = krs_check(A, x, y);
        r.yes_no("iso", k.ok);
        if (!k.ok) r.add("reason", k.mismatch);
        return 0;
    }
    DecompSpec<S> x, y;
    parse_summand_line(A, o.word, x);
    parse_summand_line(A, o.word2, y);
    IsoResult res;
    if (!x.strings.empty() && !y.strings.empty()) res = isomorphic(A, x.strings[0], y.strings[0]);
    else if (!x.bands.empty() && !y.bands.empty()) res = isomorphic(A, x.bands[0], y.bands[0]);
    else res.reason = "a string complex is never isomorphic to a band complex";
    r.yes_no("iso", res.iso);
    if (res.equivalence) {
        r.add("orient", static_cast<long>(res.equivalence->orient));
        r.add("word_shift", res.equivalence->shift);
    }
    if (!res.reason.empty()) r.add("reason", res.reason);
    return 0;
}

template <class S> int cmd_functor(const Options& o, Report& r) {
    auto P = load_algebra(o);
    Alphabet A(P);
    auto x = parse_complex<S>(P, read_file(o.file));
    r.add("field", field_name<S>());
    FunctorIndex idx;
    if (!o.word.empty()) {
        if (!o.b.empty() || !o.d.empty()) throw UsageError("give either --word or B and D");
        auto [b, d] = decompose_detail::axis_pair(A, A.parse(o.word));
        idx = make_index(A, b, d, o.degree);
        r.add("B", A.str(b));
        r.add("D", A.str(d));
    } else {
        if (o.b.empty() || o.d.empty()) throw UsageError("functor needs B and D, or --word");
        idx = make_index(A, A.parse(o.b), A.parse(o.d), o.degree);
    }
    FunctorEngine<S> eng(A, x);
    auto val = eng.refined(idx);
    r.add("dim", static_cast<long>(val.dim));
    for (std::size_t i = 0; i < val.basis.rows(); ++i) {
        std::vector<S> row;
        for (std::size_t j = 0; j < val.basis.cols(); ++j) row.push_back(val.basis(i, j));
        r.add("basis", matrix_str(Matrix<S>::row_vector(row)));
    }
    if (val.t_action && val.dim > 0) {
        r.add("t_action", matrix_str(*val.t_action));
        r.add("t_action_canonical", matrix_str(rational_canonical_form(*val.t_action)));
    }
    if (val.approximate) r.add("approximate", "yes");
    return 0;
}

template <class S> int cmd_decompose(const Options& o, Report& r) {
    auto P = load_algebra(o);
    Alphabet A(P);
    auto x = parse_complex<S>(P, read_file(o.file));
    DecomposeStats st;
    DecompSpec<S> spec;
    try {
        spec = decompose(A, x, &st);
    } catch (const DecomposeError& e) {
        r.add("error", e.what());
        return kError;
    }
    r.add("field", field_name<S>());
    r.add("summands", static_cast<long>(spec.strings.size() + spec.bands.size()));
    r.add("stripped", static_cast<long>(st.stripped.size()));
    const std::string text = serialize_spec(A, spec);
    std::istringstream lines(text);
    for (std::string l; std::getline(lines, l);) r.add("summand", l);
    if (!o.out.empty()) {
        write_file(o.out, text);
        r.add("written", o.out);
    }
    return 0;
}

template <class S> int cmd_emit_dot(const Options& o, Report& r) {
    auto P = load_algebra(o);
    Alphabet A(P);
    std::string dot;
    if (!o.file.empty()) dot = complex_dot(parse_complex<S>(P, read_file(o.file)));
    else if (!o.word.empty()) dot = complex_dot(build_from_word<S>(A, o));
    else dot = quiver_dot(P);
    if (!o.out.empty()) {
        write_file(o.out, dot);
        r.add("written", o.out);
        return 0;
    }
    std::cout << dot;
    return 0;
}

template <class S> int run_field(const std::string& cmd, const std::string& sub, const Options& o, Report& r) {
    if (cmd == "complex") return cmd_complex<S>(sub, o, r);
    if (cmd == "iso") return cmd_iso<S>(o, r);
    if (cmd == "functor") return cmd_functor<S>(o, r);
    if (cmd == "decompose") return cmd_decompose<S>(o, r);
    if (cmd == "emit-dot") return cmd_emit_dot<S>(o, r);
    throw UsageError("unknown command '" + cmd + "'");
}

int dispatch(const std::string& cmd, const std::string& sub, const Options& o, Report& r) {
    if (cmd == "validate") return cmd_validate(o, r);
    if (cmd == "paths") return cmd_paths(o, r);
    if (cmd == "word") return cmd_word(sub, o, r);
    if (cmd == "singcat") return cmd_singcat(o, r);
    if (o.field == "Q" || o.field == "q") return run_field<Rational>(cmd, sub, o, r);
    std::uint32_t p = 0;
    try {
        p = static_cast<std::uint32_t>(std::stoul(o.field));
    } catch (const std::exception&) {
        throw UsageError("--field must be a prime or Q, got '" + o.field + "'");
    }
    bool prime = p >= 2;
    for (std::uint32_t q = 2; prime && q * q <= p; ++q) prime = p % q != 0;
    if (!prime) throw UsageError("--field must be a prime or Q, got '" + o.field + "'");
    FpContext ctx(p);
    return run_field<Fp>(cmd, sub, o, r);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gentle algebras, homotopy words and complexes of projectives"};
    app.require_subcommand(1);
    Options o;
    const char* env = std::getenv("GENTLE_FIELD");
    o.field = env && *env ? env : "2";
    app.add_option("--field", o.field, "coefficient field: a prime p or Q (default $GENTLE_FIELD, else 2)");
    app.add_option("--cap", o.cap, "path-length cap for infinite-dimensional algebras");
    app.add_option("--window", o.window, "degree window a..b");
    app.add_option("--seed", o.seed, "seed for randomized commands");
    app.add_flag("--json", o.json, "structured JSON report");

    auto alg = [&](CLI::App* c) { c->add_option("algebra", o.alg, "algebra file")->required()->check(CLI::ExistingFile); };
    auto out = [&](CLI::App* c) { c->add_option("-o,--output", o.out, "write the result to a file"); };

    auto* validate = app.add_subcommand("validate", "check the gentle conditions");
    alg(validate);
    out(validate);
    auto* paths = app.add_subcommand("paths", "relation-avoiding paths, dimension and full cycles");
    alg(paths);
    paths->add_option("--max-len", o.max_len, "longest path listed");

    auto* word = app.add_subcommand("word", "homotopy words");
    word->require_subcommand(1);
    for (const char* s : {"check", "normalize", "compare"}) {
        auto* c = word->add_subcommand(s, std::string(s) + " a word");
        alg(c);
        c->add_option("word", o.word)->required();
        if (std::string(s) == "compare") c->add_option("other", o.word2)->required();
    }

    auto* complex = app.add_subcommand("complex", "complexes of projectives");
    complex->require_subcommand(1);
    {
        auto* c = complex->add_subcommand("build", "string or band complex of a word");
        alg(c);
        c->add_option("word", o.word)->required();
        c->add_option("--tmodule", o.tmodule, "band module: [a b; c d] or J(n,lambda)");
        out(c);
        for (const char* s : {"verify", "minimize", "homology", "scramble"}) {
            auto* k = complex->add_subcommand(s, std::string(s) + " a complex file");
            alg(k);
            k->add_option("complex", o.file)->required()->check(CLI::ExistingFile);
            if (std::string(s) != "verify" && std::string(s) != "homology") out(k);
            if (std::string(s) == "scramble") k->add_option("--contractibles", o.contractibles, "contractible summands to plant");
        }
        auto* rnd = complex->add_subcommand("random", "scrambled realization of a random decomposition");
        alg(rnd);
        out(rnd);
        rnd->add_option("--summands", o.summands, "at most this many summands");
        rnd->add_option("--max-pairs", o.max_pairs, "longest string word");
        rnd->add_option("--band-dim", o.band_dim, "largest band module");
        rnd->add_option("--contractibles", o.contractibles, "contractible summands to plant");
    }

    auto* iso = app.add_subcommand("iso", "isomorphism of two summands, or KRS comparison of two spec files");
    alg(iso);
    iso->add_option("first", o.word, "'string WORD @ SHIFT', 'band WORD @ SHIFT : MATRIX' or a spec file")->required();
    iso->add_option("second", o.word2)->required();

    auto* functor = app.add_subcommand("functor", "refined functor F_{B,D,n} of a complex");
    alg(functor);
    functor->add_option("complex", o.file)->required()->check(CLI::ExistingFile);
    functor->add_option("n", o.degree, "degree")->required();
    functor->add_option("B", o.b, "one-sided word B");
    functor->add_option("D", o.d, "one-sided word D with the head of B and opposite sign");
    functor->add_option("--word", o.word, "take B, D from the axis split of this word");

    auto* decompose_cmd = app.add_subcommand("decompose", "string and band summands of a bounded complex");
    alg(decompose_cmd);
    decompose_cmd->add_option("complex", o.file)->required()->check(CLI::ExistingFile);
    out(decompose_cmd);

    auto* singcat = app.add_subcommand("singcat", "full cycles and their acyclic words");
    alg(singcat);

    auto* dot = app.add_subcommand("emit-dot", "graphviz text for the quiver, a word's complex or a complex file");
    alg(dot);
    dot->add_option("word", o.word, "word whose complex is drawn");
    dot->add_option("--complex", o.file, "complex file to draw")->check(CLI::ExistingFile);
    dot->add_option("--tmodule", o.tmodule, "band module for a periodic word");
    out(dot);

    for (auto* c : app.get_subcommands({})) {
        c->fallthrough();
        for (auto* s : c->get_subcommands({})) s->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    std::string cmd, sub;
    for (auto* c : app.get_subcommands()) {
        cmd = c->get_name();
        for (auto* s : c->get_subcommands()) sub = s->get_name();
    }
    Report r;
    int status = 0;
    try {
        status = dispatch(cmd, sub, o, r);
    } catch (const std::exception& e) {
        if (o.json) {
            r.add("error", e.what());
            r.print(true);
        } else {
            r.print(false);
            std::cerr << "error: " << e.what() << "\n";
        }
        return kError;
    }
    r.print(o.json);
    return status;
}
