#pragma once

#include <cstdint>
#include <vector>

#include "tweetsignal/lstm.hpp"
#include "tweetsignal/rng.hpp"

namespace tstest {

/// Uniform ids in [0, vocab_size] (or [1, vocab_size] without padding).
tweetsignal::TokenSequence random_sequence(tweetsignal::Rng& rng, const tweetsignal::LstmConfig& c,
                                           bool allow_pad = true);

/// Label is the presence of token 1; the other tokens are noise in [2, vocab].
std::vector<tweetsignal::LstmExample> planted(std::size_t n, std::size_t vocab, std::size_t length,
                                              std::uint64_t seed);

}  // namespace tstest
