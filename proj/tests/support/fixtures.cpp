#include "fixtures.hpp"

namespace tstest {

using namespace tweetsignal;

TokenSequence random_sequence(Rng& rng, const LstmConfig& c, bool allow_pad) {
  TokenSequence s;
  for (std::size_t i = 0; i < c.max_length; ++i) {
    s.ids.push_back(static_cast<std::int32_t>(allow_pad ? rng.below(c.vocab_size + 1) : 1 + rng.below(c.vocab_size)));
  }
  return s;
}

std::vector<LstmExample> planted(std::size_t n, std::size_t vocab, std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LstmExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = rng.below(2) == 1;
    TokenSequence s;
    const std::size_t used = 2 + rng.below(length - 1);
    for (std::size_t k = 0; k < used; ++k) s.ids.push_back(static_cast<std::int32_t>(2 + rng.below(vocab - 1)));
    if (positive) s.ids[rng.below(used)] = 1;
    s.ids.resize(length, 0);
    out.push_back({s, label_from_bool(positive)});
  }
  return out;
}

}  // namespace tstest
