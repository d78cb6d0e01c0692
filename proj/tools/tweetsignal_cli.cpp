// Command-line front end: train, label, signals (alias correlate),
// preprocess and generate.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>

#include "tweetsignal/error.hpp"
#include "tweetsignal/number_io.hpp"
#include "tweetsignal/pipeline.hpp"

namespace ts = tweetsignal;
namespace pl = tweetsignal::pipeline;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

int exit_code(ts::ErrorCategory c) {
  switch (c) {
    case ts::ErrorCategory::Usage: return kUsage;
    case ts::ErrorCategory::Data: return kData;
    case ts::ErrorCategory::Internal: return kInternal;
  }
  return kInternal;
}

void print_train(const pl::TrainSummary& s) {
  std::cout << "trained on " << s.n_train << " rows, tested on " << s.n_test << " (vocabulary " << s.vocabulary_size
            << ")\n";
  for (const auto& r : s.reports) {
    std::cout << ts::model_name(r.model) << " accuracy " << ts::format_fixed(r.confusion.accuracy(), 2) << "%\n";
  }
}

void print_signals(const std::vector<pl::TickerSignals>& results) {
  for (const auto& r : results) {
    std::cout << r.ticker << ": " << r.sentiment.size() << " sentiment days, " << r.pairs.size() << " aligned pairs\n";
    for (const auto& c : r.correlations) {
      std::cout << "  " << ts::model_name(c.model) << " r = " << (std::isnan(c.r) ? "nan" : ts::format_fixed(c.r, 4))
                << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tweet sentiment classifiers and bullishness/return signals"};
  app.set_config("--config", "", "TOML or INI file with option values");
  app.require_subcommand(1);

  pl::RunConfig cfg;
  std::string align = "lagged";

  app.add_option("--tweets", cfg.tweets, "Tweet CSV (labeled for train, classified for signals)");
  app.add_option("--prices", cfg.prices, "OHLC CSV, or a directory of <TICKER>.csv files");
  app.add_option("--ticker", cfg.tickers, "Ticker symbol; repeat for several")->delimiter(',');
  app.add_option("--aliases", cfg.aliases, "Extra match strings: alias or TICKER:alias")->delimiter(',');
  app.add_option("--models-dir", cfg.models_dir, "Where models are written and read")->capture_default_str();
  app.add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
  app.add_option("--stopwords", cfg.stopwords, "Stopword file (default: built-in list)");
  app.add_option("--seed", cfg.seed, "Seed for splits, forest and network")->capture_default_str();
  app.add_option("--train-frac", cfg.train_frac, "Training share of the labeled corpus")->capture_default_str();
  app.add_option("--vocab-size", cfg.vocab_size, "Vocabulary size")->capture_default_str();
  app.add_option("--max-length", cfg.max_length, "Token sequence length for the network")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "Naive Bayes smoothing")->capture_default_str();
  app.add_option("--n-estimators", cfg.n_estimators, "Trees in the forest")->capture_default_str();
  app.add_option("--max-depth", cfg.max_depth, "Maximum tree depth")->capture_default_str();
  app.add_option("--mtry", cfg.mtry, "Features tried per split (0: sqrt)")->capture_default_str();
  app.add_option("--min-samples-leaf", cfg.min_samples_leaf, "Minimum rows per leaf")->capture_default_str();
  app.add_option("--epochs", cfg.epochs, "Network training epochs")->capture_default_str();
  app.add_option("--batch-size", cfg.batch_size, "Network mini-batch size")->capture_default_str();
  app.add_option("--learning-rate", cfg.learning_rate, "Adam learning rate")->capture_default_str();
  app.add_option("--validation-split", cfg.validation_split, "Held-out share while training the network")
      ->capture_default_str();
  app.add_option("--embedding-dim", cfg.embedding_dim, "Embedding width")->capture_default_str();
  app.add_option("--hidden", cfg.hidden, "LSTM units per direction")->capture_default_str();
  app.add_option("--dense", cfg.dense, "Hidden dense layer width")->capture_default_str();
  app.add_option("--align", align, "Return alignment")
      ->check(CLI::IsMember({"lagged", "same-day"}))
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0: all cores)")->capture_default_str();

  auto* train = app.add_subcommand("train", "Fit all three classifiers and write a report")->fallthrough();
  auto* label = app.add_subcommand("label", "Label tweets with the trained models")->fallthrough();
  auto* signals = app.add_subcommand("signals", "Bullishness, returns, correlation and charts")->fallthrough();
  signals->alias("correlate");
  auto* prep = app.add_subcommand("preprocess", "Dump preprocessed tokens")->fallthrough();
  auto* gen = app.add_subcommand("generate", "Write a synthetic fixture")->fallthrough();

  ts::synthetic::Options syn;
  gen->add_option("--training-size", syn.training_size, "Labeled training tweets")->capture_default_str();
  gen->add_option("--days", syn.days, "Calendar days of ticker tweets")->capture_default_str();
  gen->add_option("--tweets-per-day", syn.tweets_per_day, "Tweets per day")->capture_default_str();
  gen->add_option("--correlation", syn.correlation, "Planted sentiment/return correlation")->capture_default_str();
  gen->add_option("--weak-share", syn.weak_share, "Share of weak-cue tweets")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  cfg.align = align == "same-day" ? ts::AlignMode::SameDay : ts::AlignMode::Lagged;

  try {
    if (train->parsed()) {
      print_train(pl::cmd_train(cfg));
    } else if (label->parsed()) {
      const auto s = pl::cmd_label(cfg);
      std::cout << "labeled " << s.n_labeled << " of " << s.n_input << " tweets -> " << s.output.string() << "\n";
    } else if (signals->parsed()) {
      print_signals(pl::cmd_signals(cfg));
    } else if (prep->parsed()) {
      std::cout << "wrote tokens for " << pl::cmd_preprocess(cfg) << " tweets\n";
    } else if (gen->parsed()) {
      syn.seed = cfg.seed;
      if (!cfg.tickers.empty()) syn.ticker = cfg.tickers.front();
      const auto f = pl::cmd_generate(cfg, syn);
      std::cout << "wrote " << f.training.size() << " training tweets, " << f.stream.size() << " dated tweets, "
                << f.bars.size() << " price bars to " << cfg.out_dir.string() << "\n";
    }
  } catch (const ts::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
