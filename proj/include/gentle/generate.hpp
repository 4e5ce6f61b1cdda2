#pragma once

#include <optional>
#include <random>

#include "gentle/words.hpp"

namespace gentle {

// Random words by walking the extension graph. Path lengths are capped by
// max_path_len so the alphabet stays finite.
std::optional<Word> random_finite_word(const Alphabet& A, std::mt19937_64& rng, std::size_t max_pairs,
                                       std::size_t max_path_len = 3);
// A primitive block E with E E a word, as a periodic Z-word; nullopt after
// the attempt budget. With want_zero_net the block has net homogeny 0 (a band).
std::optional<Word> random_periodic_word(const Alphabet& A, std::mt19937_64& rng, std::size_t max_block,
                                         bool want_zero_net, std::size_t max_path_len = 3, int attempts = 400);
// N-word: finite prefix followed by a periodic tail.
std::optional<Word> random_right_word(const Alphabet& A, std::mt19937_64& rng, std::size_t max_core,
                                      std::size_t max_block, std::size_t max_path_len = 3, int attempts = 400);
// Z-word with independent left and right tails and a core.
std::optional<Word> random_bi_word(const Alphabet& A, std::mt19937_64& rng, std::size_t max_core,
                                   std::size_t max_block, std::size_t max_path_len = 3, int attempts = 400);

}  // namespace gentle
