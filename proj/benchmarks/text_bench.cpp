#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "tweetsignal/features.hpp"
#include "tweetsignal/textprep.hpp"

using namespace tweetsignal;

namespace {

const std::vector<std::string> kWords{"running",   "generalizations", "oscillators", "relational", "hopefulness",
                                      "conditional", "adjustments",   "happily",     "rallying",   "stocks"};

const std::string kTweet =
    "@trader $ACME is RALLYING!!! breaking out above resistance https://t.co/xyz #bullish can't stop won't stop";

void BM_StemToken(benchmark::State& state) {
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(stem_token(kWords[i++ % kWords.size()]));
}
BENCHMARK(BM_StemToken);

void BM_Preprocess(benchmark::State& state) {
  const auto& stop = StopwordList::builtin();
  for (auto _ : state) benchmark::DoNotOptimize(preprocess(kTweet, stop));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * kTweet.size()));
}
BENCHMARK(BM_Preprocess);

void BM_EncodeBinary(benchmark::State& state) {
  std::vector<TokenList> corpus;
  for (std::size_t i = 0; i < 5000; ++i) corpus.push_back({"t" + std::to_string(i), "t" + std::to_string(i / 2)});
  const auto vocab = Vocabulary::build(corpus, 5000);
  const auto tokens = preprocess(kTweet, StopwordList::builtin());
  for (auto _ : state) benchmark::DoNotOptimize(encode_binary(tokens, vocab));
}
BENCHMARK(BM_EncodeBinary);

}  // namespace
