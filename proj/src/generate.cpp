#include "gentle/generate.hpp"

namespace gentle {

namespace {

std::vector<WPair> random_walk(const Alphabet& A, std::mt19937_64& rng, std::size_t len, std::size_t max_path_len) {
    const auto& P = A.pres();
    std::uniform_int_distribution<int> vd(0, static_cast<int>(P.num_vertices()) - 1), sd(0, 1);
    Word w = Word::trivial(vd(rng), sd(rng) ? 1 : -1);
    std::vector<WPair> out;
    while (out.size() < len) {
        auto ext = A.extensions(w, max_path_len);
        if (ext.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, ext.size() - 1);
        w = A.append(w, ext[pick(rng)]);
        out.push_back(w.core.back());
    }
    return out;
}

bool closes(const Alphabet& A, const std::vector<WPair>& w, std::size_t j, std::size_t k) {
    return !A.check_consecutive(w[k], w[j]);
}

int block_net(const std::vector<WPair>& w, std::size_t j, std::size_t k) {
    int n = 0;
    for (std::size_t i = j; i <= k; ++i) n += w[i].H();
    return n;
}

}  // namespace

std::optional<Word> random_finite_word(const Alphabet& A, std::mt19937_64& rng, std::size_t max_pairs,
                                       std::size_t max_path_len) {
    std::uniform_int_distribution<std::size_t> ld(1, std::max<std::size_t>(1, max_pairs));
    for (int attempt = 0; attempt < 50; ++attempt) {
        auto w = random_walk(A, rng, ld(rng), max_path_len);
        if (!w.empty()) return A.make(Word::finite(w));
    }
    return std::nullopt;
}

std::optional<Word> random_periodic_word(const Alphabet& A, std::mt19937_64& rng, std::size_t max_block,
                                         bool want_zero_net, std::size_t max_path_len, int attempts) {
    for (int attempt = 0; attempt < attempts; ++attempt) {
        auto w = random_walk(A, rng, 2 * max_block + 2, max_path_len);
        std::vector<std::pair<std::size_t, std::size_t>> cands;
        for (std::size_t j = 0; j < w.size(); ++j)
            for (std::size_t k = j; k < w.size() && k - j + 1 <= max_block; ++k)
                if (closes(A, w, j, k) && (block_net(w, j, k) == 0) == want_zero_net) cands.emplace_back(j, k);
        if (cands.empty()) continue;
        auto [j, k] = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
        Word c;
        c.shape = Shape::Bi;
        c.rcyc.assign(w.begin() + j, w.begin() + k + 1);
        c.lcyc = c.rcyc;
        return A.make(c);
    }
    return std::nullopt;
}

std::optional<Word> random_right_word(const Alphabet& A, std::mt19937_64& rng, std::size_t max_core,
                                      std::size_t max_block, std::size_t max_path_len, int attempts) {
    for (int attempt = 0; attempt < attempts; ++attempt) {
        auto w = random_walk(A, rng, max_core + 2 * max_block, max_path_len);
        std::vector<std::pair<std::size_t, std::size_t>> cands;
        for (std::size_t j = 0; j <= max_core && j < w.size(); ++j)
            for (std::size_t k = j; k < w.size() && k - j + 1 <= max_block; ++k)
                if (closes(A, w, j, k) && block_net(w, j, k) != 0) cands.emplace_back(j, k);
        if (cands.empty()) continue;
        auto [j, k] = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
        Word c;
        c.shape = Shape::Right;
        c.core.assign(w.begin(), w.begin() + j);
        c.rcyc.assign(w.begin() + j, w.begin() + k + 1);
        return A.make(c);
    }
    return std::nullopt;
}

std::optional<Word> random_bi_word(const Alphabet& A, std::mt19937_64& rng, std::size_t max_core,
                                   std::size_t max_block, std::size_t max_path_len, int attempts) {
    for (int attempt = 0; attempt < attempts; ++attempt) {
        auto w = random_walk(A, rng, max_core + 3 * max_block, max_path_len);
        std::vector<std::size_t> lefts;
        for (std::size_t a = 0; a < w.size() && a < max_block; ++a)
            if (closes(A, w, 0, a) && block_net(w, 0, a) != 0) lefts.push_back(a);
        if (lefts.empty()) continue;
        std::size_t a = lefts[std::uniform_int_distribution<std::size_t>(0, lefts.size() - 1)(rng)];
        std::vector<std::pair<std::size_t, std::size_t>> cands;
        for (std::size_t j = a + 1; j <= a + 1 + max_core && j < w.size(); ++j)
            for (std::size_t k = j; k < w.size() && k - j + 1 <= max_block; ++k)
                if (closes(A, w, j, k) && block_net(w, j, k) != 0) cands.emplace_back(j, k);
        if (cands.empty()) continue;
        auto [j, k] = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
        Word c;
        c.shape = Shape::Bi;
        c.lcyc.assign(w.begin(), w.begin() + a + 1);
        c.core.assign(w.begin() + a + 1, w.begin() + j);
        c.rcyc.assign(w.begin() + j, w.begin() + k + 1);
        c.core_start = 1;
        return A.make(c);
    }
    return std::nullopt;
}

}  // namespace gentle
