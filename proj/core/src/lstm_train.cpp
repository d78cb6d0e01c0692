#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "tweetsignal/error.hpp"
#include "tweetsignal/lstm.hpp"
#include "tweetsignal/rng.hpp"

namespace tweetsignal {

namespace {

// Batch gradients are split into this many contiguous shards, each summed in
// example order and then added together in shard order.
constexpr std::size_t kGradientShards = 4;

class Adam {
 public:
  Adam(std::size_t n, const AdamParams& params) : p_(params), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::span<double> theta, std::span<const double> grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(p_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(p_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m_[i] = p_.beta1 * m_[i] + (1.0 - p_.beta1) * grad[i];
      v_[i] = p_.beta2 * v_[i] + (1.0 - p_.beta2) * grad[i] * grad[i];
      const double m_hat = m_[i] / c1;
      const double v_hat = v_[i] / c2;
      theta[i] -= p_.learning_rate * m_hat / (std::sqrt(v_hat) + p_.epsilon);
    }
  }

 private:
  AdamParams p_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

struct BatchResult {
  double loss_sum = 0;
  std::size_t correct = 0;
};

// Sums per-example gradients of the batch into `grad` (which is zeroed first).
BatchResult batch_gradient(const LstmNetwork& net, std::span<const LstmExample> data,
                           std::span<const std::size_t> batch, std::vector<std::vector<double>>& shards,
                           std::span<double> grad) {
  const std::size_t n_shards = std::min(kGradientShards, batch.size());
  std::vector<BatchResult> results(n_shards);
  auto run_shard = [&](std::size_t s) {
    auto& g = shards[s];
    std::fill(g.begin(), g.end(), 0.0);
    const std::size_t lo = batch.size() * s / n_shards;
    const std::size_t hi = batch.size() * (s + 1) / n_shards;
    for (std::size_t k = lo; k < hi; ++k) {
      const auto& ex = data[batch[k]];
      const auto r = accumulate_gradient(net, ex.sequence, ex.label, g);
      results[s].loss_sum += r.loss;
      if (label_from_bool(r.probability >= 0.5) == ex.label) ++results[s].correct;
    }
  };
  {
    std::vector<std::jthread> workers;
    for (std::size_t s = 1; s < n_shards; ++s) workers.emplace_back(run_shard, s);
    run_shard(0);
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  BatchResult total;
  for (std::size_t s = 0; s < n_shards; ++s) {
    const auto& g = shards[s];
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g[i];
    total.loss_sum += results[s].loss_sum;
    total.correct += results[s].correct;
  }
  return total;
}

void check_finite(std::span<const double> params) {
  for (double v : params) {
    if (!std::isfinite(v)) throw Error(ErrorCode::Internal, "non-finite lstm parameter after update");
  }
}

}  // namespace

std::pair<double, double> evaluate(const LstmNetwork& net, std::span<const LstmExample> data) {
  if (data.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  double loss = 0;
  std::size_t correct = 0;
  for (const auto& ex : data) {
    const double p = forward(net, ex.sequence);
    loss += bce_loss(p, ex.label);
    if (label_from_bool(p >= 0.5) == ex.label) ++correct;
  }
  const auto n = static_cast<double>(data.size());
  return {loss / n, static_cast<double>(correct) / n};
}

TrainHistory train(LstmNetwork& net, std::span<const LstmExample> data, const TrainOptions& options) {
  if (data.empty()) throw Error(ErrorCode::EmptyData, "no training examples");
  if (!(options.validation_split >= 0.0 && options.validation_split <= 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "validation_split must lie in [0, 0.5]");
  }
  if (options.batch_size == 0) throw Error(ErrorCode::InvalidArgument, "batch_size must be positive");

  const auto n_val = static_cast<std::size_t>(
      std::floor(options.validation_split * static_cast<double>(data.size())));
  const std::size_t n_train = data.size() - n_val;
  if (n_train == 0) throw Error(ErrorCode::EmptyData, "validation split leaves no training data");
  const auto train_part = data.first(n_train);
  const auto val_part = data.subspan(n_train);

  Adam adam(net.parameter_count(), options.adam);
  Rng rng(options.seed);
  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::vector<double>> shards(kGradientShards, std::vector<double>(net.parameter_count()));
  std::vector<double> grad(net.parameter_count());

  TrainHistory history;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double loss_sum = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < n_train; start += options.batch_size) {
      const std::size_t end = std::min(n_train, start + options.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      // Loss and accuracy are taken on the weights before this batch's update.
      const auto result = batch_gradient(net, train_part, batch, shards, grad);
      loss_sum += result.loss_sum;
      correct += result.correct;
      const double scale = 1.0 / static_cast<double>(batch.size());
      for (auto& g : grad) g *= scale;
      adam.step(net.parameters(), grad);
      check_finite(net.parameters());
    }
    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(n_train);
    stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(n_train);
    std::tie(stats.val_loss, stats.val_accuracy) = evaluate(net, val_part);
    history.epochs.push_back(stats);
    if (options.on_epoch) options.on_epoch(epoch, stats);
  }
  return history;
}

}  // namespace tweetsignal
