#include <benchmark/benchmark.h>

#include <vector>

#include "tweetsignal/lstm.hpp"
#include "tweetsignal/naive_bayes.hpp"
#include "tweetsignal/random_forest.hpp"
#include "tweetsignal/rng.hpp"

using namespace tweetsignal;

namespace {

struct Data {
  std::vector<BinaryVector> x;
  std::vector<Label> y;
};

// Sparse rows; the label follows feature 0 with some noise.
Data sparse_data(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Data d;
  for (std::size_t i = 0; i < rows; ++i) {
    BinaryVector v;
    v.bits.assign(cols, 0);
    for (int k = 0; k < 8; ++k) v.bits[rng.below(cols)] = 1;
    d.y.push_back(label_from_bool((v.bits[0] == 1) != (rng.below(10) == 0)));
    d.x.push_back(std::move(v));
  }
  return d;
}

void BM_NbFit(benchmark::State& state) {
  const auto d = sparse_data(static_cast<std::size_t>(state.range(0)), 2000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_nb(d.x, d.y));
}
BENCHMARK(BM_NbFit)->Arg(500)->Arg(2000);

void BM_NbPredict(benchmark::State& state) {
  const auto d = sparse_data(1000, static_cast<std::size_t>(state.range(0)), 2);
  const auto m = fit_nb(d.x, d.y);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(predict_nb(m, d.x[i++ % d.x.size()]));
}
BENCHMARK(BM_NbPredict)->Arg(500)->Arg(5000);

void BM_ForestFit(benchmark::State& state) {
  const auto d = sparse_data(1000, 500, 3);
  ForestParams p;
  p.n_estimators = static_cast<std::size_t>(state.range(0));
  p.n_threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(fit_forest(d.x, d.y, p));
}
BENCHMARK(BM_ForestFit)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ForestPredict(benchmark::State& state) {
  const auto d = sparse_data(1000, 500, 4);
  ForestParams p;
  p.n_estimators = 200;
  p.n_threads = 1;
  const auto f = fit_forest(d.x, d.y, p);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(predict_forest(f, d.x[i++ % d.x.size()]));
}
BENCHMARK(BM_ForestPredict);

TokenSequence sequence(Rng& rng, const LstmConfig& c) {
  TokenSequence s;
  for (std::size_t i = 0; i < c.max_length; ++i) s.ids.push_back(static_cast<std::int32_t>(1 + rng.below(c.vocab_size)));
  return s;
}

void BM_LstmForward(benchmark::State& state) {
  const LstmConfig c{5000, 32, 30, 64, 24};
  const auto net = LstmNetwork::initialized(c, 1);
  Rng rng(5);
  const auto seq = sequence(rng, c);
  for (auto _ : state) benchmark::DoNotOptimize(forward(net, seq));
}
BENCHMARK(BM_LstmForward);

void BM_LstmEpoch(benchmark::State& state) {
  const LstmConfig c{2000, 32, 30, 64, 24};
  Rng rng(6);
  std::vector<LstmExample> data;
  for (int i = 0; i < 256; ++i) data.push_back({sequence(rng, c), label_from_bool(rng.below(2) == 1)});
  TrainOptions o;
  o.epochs = 1;
  o.validation_split = 0;
  for (auto _ : state) {
    auto net = LstmNetwork::initialized(c, 1);
    benchmark::DoNotOptimize(train(net, data, o));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * data.size()));
}
BENCHMARK(BM_LstmEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
