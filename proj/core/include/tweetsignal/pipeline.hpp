#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tweetsignal/lstm.hpp"
#include "tweetsignal/metrics.hpp"
#include "tweetsignal/signals.hpp"
#include "tweetsignal/synthetic.hpp"

namespace tweetsignal::pipeline {

namespace fs = std::filesystem;

inline constexpr const char* kVocabularyFile = "vocab.txt";
inline constexpr const char* kNbFile = "nb.model";
inline constexpr const char* kForestFile = "rf.model";
inline constexpr const char* kLstmFile = "lstm.model";
inline constexpr const char* kLabeledFile = "labeled.csv";

struct RunConfig {
  fs::path tweets;
  /// A price CSV, or a directory holding `<TICKER>.csv` per ticker.
  fs::path prices;
  std::vector<std::string> tickers;
  /// `alias` (single ticker) or `TICKER:alias`.
  std::vector<std::string> aliases;
  fs::path models_dir = "models";
  fs::path out_dir = "out";
  fs::path stopwords;  ///< empty: built-in list

  std::uint64_t seed = 42;
  double train_frac = 0.8;
  std::size_t vocab_size = Vocabulary::kDefaultMaxTerms;
  std::size_t max_length = kDefaultMaxLength;

  double alpha = 1.0;

  std::size_t n_estimators = 200;
  std::size_t max_depth = 60;
  std::size_t mtry = 0;  ///< 0: ceil(sqrt(features))
  std::size_t min_samples_leaf = 1;

  std::size_t epochs = 2;
  std::size_t batch_size = 32;
  double learning_rate = 0.001;
  double validation_split = 0.1;
  std::size_t embedding_dim = 32;
  std::size_t hidden = 64;
  std::size_t dense = 24;

  AlignMode align = AlignMode::Lagged;
  std::size_t threads = 0;  ///< 0: hardware concurrency
};

/// Throws Error(InvalidArgument) or Error(InvalidSplit).
void validate(const RunConfig& config);

struct ModelReport {
  Model model;
  ConfusionMatrix confusion;
};

struct TrainSummary {
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t skipped_rows = 0;
  std::size_t vocabulary_size = 0;
  std::vector<ModelReport> reports;  ///< nb, rf, lstm
  TrainHistory history;
  std::vector<fs::path> outputs;
};

/// Seeded train/test split of the labeled corpus in `tweets`, all three models
/// fit on the training part and scored on the test part. Writes the
/// vocabulary, model files, report.txt, report.csv and train.manifest.json
/// into `models_dir`.
TrainSummary cmd_train(const RunConfig& config);

struct LabelSummary {
  std::size_t n_input = 0;    ///< valid rows read
  std::size_t n_labeled = 0;  ///< rows surviving the ticker filter
  std::size_t skipped_rows = 0;
  fs::path output;
};

/// Labels every tweet in `tweets` (filtered to any of `tickers`, when given)
/// with all three models; writes `out_dir/labeled.csv`.
/// Throws Error(ModelVersionMismatch) when the model files disagree.
LabelSummary cmd_label(const RunConfig& config);

struct TickerSignals {
  std::string ticker;
  std::vector<DailySentiment> sentiment;
  std::vector<AlignedPair> pairs;
  std::vector<Correlation> correlations;
  std::vector<fs::path> outputs;
};

/// For each ticker: bullishness from the labeled CSV in `tweets`, returns from
/// `prices`, alignment, correlation, CSVs and SVG charts in `out_dir`.
std::vector<TickerSignals> cmd_signals(const RunConfig& config);

/// Writes `out_dir/tokens.csv` (`id,tokens`); returns the row count.
std::size_t cmd_preprocess(const RunConfig& config);

/// Writes a synthetic fixture into `out_dir`.
synthetic::Fixture cmd_generate(const RunConfig& config, const synthetic::Options& options);

/// Hex FNV-1a digest of a file's bytes.
std::string file_checksum(const fs::path& path);

}  // namespace tweetsignal::pipeline
