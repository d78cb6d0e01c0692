#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tweetsignal/corpus.hpp"
#include "tweetsignal/features.hpp"

namespace tweetsignal {

struct LstmConfig {
  std::size_t vocab_size = 0;  ///< ids 1..vocab_size; 0 is padding
  std::size_t embedding_dim = 32;
  std::size_t max_length = kDefaultMaxLength;
  std::size_t hidden = 64;  ///< per direction
  std::size_t dense = 24;

  friend bool operator==(const LstmConfig&, const LstmConfig&) = default;
};

/// Embedding -> bidirectional LSTM -> dense(ReLU) -> dense(sigmoid).
///
/// All parameters live in one flat vector; each named tensor is a row-major
/// view into it. Gate blocks inside the LSTM tensors are ordered
/// input, forget, cell candidate, output.
class LstmNetwork {
 public:
  inline static constexpr int kFormatVersion = 1;

  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using MatrixView = Eigen::Map<RowMatrix>;
  using ConstMatrixView = Eigen::Map<const RowMatrix>;

  struct Tensor {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t offset = 0;
    std::size_t size() const { return rows * cols; }
    friend bool operator==(const Tensor&, const Tensor&) = default;
  };

  /// Tensor indices in the layout.
  enum TensorId : std::size_t {
    kEmbedding,
    kForwardW,
    kForwardU,
    kForwardB,
    kBackwardW,
    kBackwardU,
    kBackwardB,
    kDense1W,
    kDense1B,
    kDense2W,
    kDense2B,
    kTensorCount
  };

  /// All parameters zero.
  explicit LstmNetwork(const LstmConfig& config);

  /// Embedding ~ U(-0.05, 0.05); kernels and recurrent weights Glorot-uniform;
  /// biases 0 except the forget gate bias, which is 1.
  static LstmNetwork initialized(const LstmConfig& config, std::uint64_t seed);

  const LstmConfig& config() const noexcept { return config_; }
  const std::vector<Tensor>& tensors() const noexcept { return tensors_; }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }

  MatrixView tensor(TensorId id);
  ConstMatrixView tensor(TensorId id) const;

  void write(std::ostream& out) const;
  static LstmNetwork read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static LstmNetwork load(const std::filesystem::path& path);

  friend bool operator==(const LstmNetwork&, const LstmNetwork&) = default;

 private:
  LstmConfig config_;
  std::vector<Tensor> tensors_;
  std::vector<double> params_;
};

/// Probability of the positive class, strictly inside (0, 1).
/// Throws Error(DimensionMismatch) for a wrong-length sequence and
/// Error(IdOutOfRange) for an id outside [0, vocab_size].
double forward(const LstmNetwork& net, const TokenSequence& seq);

inline constexpr double kBceEpsilon = 1e-12;

/// -[y ln p + (1-y) ln(1-p)] with p clamped to [1e-12, 1 - 1e-12].
double bce_loss(double p, Label y);

struct ExampleLoss {
  double loss = 0;
  double probability = 0;
};

/// Gradient of bce_loss(forward(net, seq), y) with respect to every parameter,
/// in the network's flat layout, added into `grad`.
ExampleLoss accumulate_gradient(const LstmNetwork& net, const TokenSequence& seq, Label y,
                                std::span<double> grad);

/// 1 iff forward(net, seq) >= threshold.
Label predict_label(const LstmNetwork& net, const TokenSequence& seq, double threshold = 0.5);

struct LstmExample {
  TokenSequence sequence;
  Label label = Label::Negative;
};

struct AdamParams {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct EpochStats {
  double train_loss = 0;
  double train_accuracy = 0;  ///< fraction in [0, 1]
  double val_loss = 0;        ///< NaN without a validation set
  double val_accuracy = 0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

inline bool operator==(const EpochStats& a, const EpochStats& b) {
  auto same = [](double x, double y) { return x == y || (x != x && y != y); };
  return same(a.train_loss, b.train_loss) && same(a.train_accuracy, b.train_accuracy) &&
         same(a.val_loss, b.val_loss) && same(a.val_accuracy, b.val_accuracy);
}

struct TrainOptions {
  std::size_t epochs = 2;
  /// Trailing fraction held out, in [0, 0.5].
  double validation_split = 0.1;
  std::size_t batch_size = 32;
  AdamParams adam;
  std::uint64_t seed = 0;
  /// Called after each epoch.
  std::function<void(std::size_t epoch, const EpochStats&)> on_epoch;
};

/// Mini-batch Adam on mean binary cross-entropy. The last
/// floor(validation_split * n) examples form the validation set; the rest are
/// reshuffled each epoch from `seed`. Batch gradients are summed over a fixed
/// number of shards in a fixed order, so results do not depend on thread
/// scheduling.
/// Throws Error(EmptyData) and Error(InvalidArgument).
TrainHistory train(LstmNetwork& net, std::span<const LstmExample> data, const TrainOptions& options);

/// Mean loss and accuracy (fraction) over `data`.
std::pair<double, double> evaluate(const LstmNetwork& net, std::span<const LstmExample> data);

}  // namespace tweetsignal
