#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gentle/algebra.hpp"

namespace gentle {

// A letter of the alphabet: gamma, gamma^-1, d_alpha or d_alpha^-1.
struct Letter {
    enum class Kind { Direct, Inverse, D, DInv };
    Kind kind = Kind::Direct;
    Path gamma;     // Direct / Inverse
    int arrow = 0;  // D / DInv
};

// One pair l^-1 r of a word. InvD is gamma^-1 d_{f(gamma)} (homogeny -1),
// DInv is d_{f(gamma)}^-1 gamma (homogeny +1).
struct WPair {
    enum class Type { InvD, DInv };
    Type type = Type::InvD;
    Path gamma;

    int H() const { return type == Type::InvD ? -1 : 1; }
    bool operator==(const WPair& o) const { return type == o.type && gamma == o.gamma; }
    bool operator!=(const WPair& o) const { return !(*this == o); }
    bool operator<(const WPair& o) const {
        if (type != o.type) return type < o.type;
        return gamma < o.gamma;
    }
};

inline WPair invert_pair(const WPair& p) {
    return {p.type == WPair::Type::InvD ? WPair::Type::DInv : WPair::Type::InvD, p.gamma};
}

enum class Shape { Trivial, Finite, Right, Left, Bi };

// Words with eventually periodic tails. Pair i sits between positions i-1 and i.
//  Finite: pairs 1..m (core), positions 0..m.
//  Right:  core then rcyc repeated, pairs 1,2,...
//  Left:   lcyc repeated then core, last pair has index 0.
//  Bi:     lcyc^inf core rcyc^inf with core[0] at pair index core_start (when
//          the core is empty, core_start is the index of the first rcyc pair).
struct Word {
    Shape shape = Shape::Trivial;
    int vertex = 0;  // trivial words only
    int delta = 1;   // trivial words only
    std::vector<WPair> core, lcyc, rcyc;
    long core_start = 1;

    static Word trivial(int v, int d) {
        Word w;
        w.vertex = v;
        w.delta = d;
        return w;
    }
    static Word finite(std::vector<WPair> pairs);

    bool is_trivial() const { return shape == Shape::Trivial; }
    bool is_finite() const { return shape == Shape::Trivial || shape == Shape::Finite; }
    bool has_left_tail() const { return shape == Shape::Left || shape == Shape::Bi; }
    bool has_right_tail() const { return shape == Shape::Right || shape == Shape::Bi; }
    // number of pairs of a finite word
    long length() const { return shape == Shape::Finite ? static_cast<long>(core.size()) : 0; }
    bool has_pair(long i) const;
    bool has_position(long i) const;
    const WPair& pair_at(long i) const;
    long first_position() const;  // only without a left tail
    long last_position() const;   // only without a right tail
    // start of the right periodic region (first pair index drawn from rcyc)
    long right_region_start() const { return core_start + static_cast<long>(core.size()); }

    bool operator==(const Word& o) const;
    bool operator!=(const Word& o) const { return !(*this == o); }
};

struct Signs {
    std::vector<int> arrow;  // s(alpha)
    std::vector<int> inv;    // s(alpha^-1)
};

struct WordError {
    long pair_index;
    std::string message;
};

struct Boundedness {
    bool mu_bounded_above = true;
    bool mu_bounded_below = true;
    bool tails_are_full_cycle_words = false;  // true only when some tail exists and all match
};

struct WordClass {
    Word rep;          // canonical representative
    std::string key;   // its serialisation
    int orient = 1;    // rep = C^{orient}[shift]
    long shift = 0;
};

struct Equivalence {
    int orient;  // C' = C^{orient}[shift]
    long shift;
};

// Everything that needs the presentation and its sign assignment.
class Alphabet {
public:
    explicit Alphabet(const Presentation& p);

    const Presentation& pres() const { return *p_; }
    const Signs& signs() const { return s_; }

    // --- letters and signs
    int head(const Letter& q) const;
    int sign(const Letter& q) const;
    int sign_of_path(const Path& g) const { return s_.arrow[g.first()]; }
    int sign_of_inverse_path(const Path& g) const { return s_.inv[g.last()]; }
    // arrow with head v and the given sign, if any
    std::optional<int> arrow_with_head_sign(int v, int sign) const;
    // arrow with tail v whose inverse has the given sign, if any
    std::optional<int> arrow_with_tail_inv_sign(int v, int sign) const;

    // --- pair-level checks
    std::optional<std::string> check_pair(const WPair& p) const;
    std::optional<std::string> check_consecutive(const WPair& a, const WPair& b) const;
    // left/right vertices of a pair
    int left_vertex(const WPair& p) const;
    int right_vertex(const WPair& p) const;

    // --- words
    std::optional<WordError> validate(const Word& w) const;
    Word make(const Word& w) const;  // normalise + validate, throws on error
    Word parse(const std::string& text) const;
    std::optional<Word> from_letters(const std::vector<Letter>& letters, std::string* error = nullptr) const;
    std::string str(const Word& w) const;
    std::string pair_str(const WPair& p) const;
    std::string letter_str(const Letter& q) const;

    int vertex(const Word& w, long i) const;
    // head and sign of a word with a first pair (trivial, finite or right)
    std::pair<int, int> head_sign(const Word& w) const;
    std::pair<int, int> inverse_head_sign(const Word& w) const;

    Word compose(const Word& c, const Word& d) const;
    // B^-1 D
    Word join(const Word& b, const Word& d) const { return compose(inverse(b), d); }
    Word inverse(const Word& w) const;

    // Total order on words with common head and sign: negative, 0, positive.
    int compare(const Word& a, const Word& b) const;

    std::optional<Equivalence> equivalence(const Word& c, const Word& cprime) const;
    WordClass canonical_class(const Word& c) const;

    // Splittings: C_{>i} and (C_{<=i})^{-1}, both with head v_C(i).
    Word suffix_after(const Word& c, long i) const;
    Word prefix_inverse(const Word& c, long i) const;
    // whichever of the two has sign delta
    Word split(const Word& c, long i, int delta) const;
    // axis of (B,D): position of C = B^-1 D where the split happens
    long axis(const Word& b, const Word& d) const;
    // r(B,D;B',D'), nullopt when B^-1 D and B'^-1 D' are inequivalent
    std::optional<long> r_offset(const Word& b, const Word& d, const Word& bp, const Word& dp) const;
    // position of C corresponding to position j of C' = C^{orient}[shift]
    long correspond(const Word& c, const Equivalence& e, long j) const;

    Boundedness boundedness(const Word& w) const;
    bool is_acyclic_string(const Word& w) const;
    Word acyclic_word(const std::vector<int>& cycle) const;

    // Pairs that may follow the last pair of a finite word (or start a trivial
    // word), with paths of length at most max_len.
    std::vector<WPair> extensions(const Word& w, std::size_t max_len) const;
    // Does pairing `next` after the last pair of w give a word?
    bool can_append(const Word& w, const WPair& next) const;
    Word append(const Word& w, const WPair& next) const;

    std::vector<Path> paths_with_first(int arrow, std::size_t max_len) const;
    std::vector<Path> paths_with_last(int arrow, std::size_t max_len) const;

private:
    const Presentation* p_;
    Signs s_;
};

Signs assign_signs(const Presentation& p);
// Checks the sign convention: distinct letters sharing a head share a sign
// only when they are {alpha^-1, beta} with alpha*beta in rho.
bool signs_valid(const Presentation& p, const Signs& s);

// Word functions that do not need the presentation.
Word normalize(Word w);
Word shift(const Word& w, long t);
long mu(const Word& w, long i);
int net(const std::vector<WPair>& block);
std::optional<long> period(const Word& w);  // minimal period of a periodic Z-word
bool controlled_homogeny(const Word& w);
bool is_pure_periodic(const Word& w);  // Z-word with empty core and equal cycles

}  // namespace gentle
