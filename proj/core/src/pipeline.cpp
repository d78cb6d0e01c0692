#include "tweetsignal/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tweetsignal/csv.hpp"
#include "tweetsignal/error.hpp"
#include "tweetsignal/features.hpp"
#include "tweetsignal/hash.hpp"
#include "tweetsignal/naive_bayes.hpp"
#include "tweetsignal/number_io.hpp"
#include "tweetsignal/random_forest.hpp"
#include "tweetsignal/rng.hpp"
#include "tweetsignal/svg_chart.hpp"
#include "tweetsignal/textprep.hpp"

namespace tweetsignal::pipeline {
namespace {

using nlohmann::json;

// Sub-stream ids for derive_seed.
enum : std::uint64_t { kSplitStream = 1, kForestStream = 2, kLstmInitStream = 3, kLstmTrainStream = 4 };

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

std::size_t worker_count(const RunConfig& c) {
  if (c.threads) return c.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first failure in
// index order is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    const std::size_t k = std::min(std::max<std::size_t>(workers, 1), n);
    for (std::size_t w = 0; w < k; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += k) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

json config_json(const RunConfig& c) {
  return json{
      {"tweets", c.tweets.generic_string()},
      {"prices", c.prices.generic_string()},
      {"tickers", c.tickers},
      {"aliases", c.aliases},
      {"models_dir", c.models_dir.generic_string()},
      {"out_dir", c.out_dir.generic_string()},
      {"stopwords", c.stopwords.empty() ? std::string("builtin") : c.stopwords.generic_string()},
      {"seed", c.seed},
      {"train_frac", c.train_frac},
      {"vocab_size", c.vocab_size},
      {"max_length", c.max_length},
      {"alpha", c.alpha},
      {"n_estimators", c.n_estimators},
      {"max_depth", c.max_depth},
      {"mtry", c.mtry},
      {"min_samples_leaf", c.min_samples_leaf},
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"learning_rate", c.learning_rate},
      {"validation_split", c.validation_split},
      {"embedding_dim", c.embedding_dim},
      {"hidden", c.hidden},
      {"dense", c.dense},
      {"align", c.align == AlignMode::Lagged ? "lagged" : "same-day"},
  };
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs) {
  json files_in = json::object();
  for (const auto& p : inputs) files_in[p.generic_string()] = file_checksum(p);
  json files_out = json::object();
  for (const auto& p : outputs) files_out[p.filename().generic_string()] = file_checksum(p);
  const json manifest{{"command", command}, {"config", config}, {"inputs", files_in}, {"outputs", files_out}};
  write_bytes(dir / (command + ".manifest.json"), manifest.dump(2) + "\n");
}

StopwordList stopwords_for(const RunConfig& c) {
  return c.stopwords.empty() ? StopwordList::builtin() : StopwordList::from_file(c.stopwords);
}

bool valid_ticker(const std::string& t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char ch) {
    return std::isalnum(ch) || ch == '.' || ch == '-' || ch == '_';
  });
}

std::vector<TickerFilter> ticker_filters(const RunConfig& c) {
  std::map<std::string, std::set<std::string>> aliases;
  for (const auto& t : c.tickers) aliases[t].insert(to_lower_ascii(t));
  for (const auto& a : c.aliases) {
    const auto colon = a.find(':');
    std::string ticker, alias;
    if (colon == std::string::npos) {
      if (c.tickers.size() != 1) {
        throw Error(ErrorCode::InvalidArgument, "alias '" + a + "' must be written TICKER:alias with several tickers");
      }
      ticker = c.tickers.front();
      alias = a;
    } else {
      ticker = a.substr(0, colon);
      alias = a.substr(colon + 1);
    }
    auto it = aliases.find(ticker);
    if (it == aliases.end()) throw Error(ErrorCode::InvalidArgument, "alias for unknown ticker '" + ticker + "'");
    alias = to_lower_ascii(alias);
    if (alias.empty()) throw Error(ErrorCode::InvalidArgument, "empty alias for ticker '" + ticker + "'");
    it->second.insert(alias);
  }
  std::vector<TickerFilter> out;
  for (const auto& t : c.tickers) out.emplace_back(t, aliases[t]);
  return out;
}

fs::path prices_for(const RunConfig& c, const std::string& ticker) {
  if (fs::is_directory(c.prices)) return c.prices / (ticker + ".csv");
  if (c.tickers.size() > 1) {
    throw Error(ErrorCode::InvalidArgument, "--prices must be a directory of <TICKER>.csv files with several tickers");
  }
  return c.prices;
}

std::string join_tokens(const TokenList& tokens) {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s += ' ';
    s += t;
  }
  return s;
}

const char* color_of(Model m) {
  switch (m) {
    case Model::Lstm: return "#1f77b4";
    case Model::Rf: return "#2ca02c";
    case Model::Nb: return "#d62728";
  }
  return "#000000";
}

}  // namespace

std::string file_checksum(const fs::path& path) {
  const auto h = fnv1a64(read_bytes(path));
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15, shift = 0; i >= 0; --i, shift += 4) s[static_cast<std::size_t>(i)] = kHex[(h >> shift) & 0xf];
  return s;
}

void validate(const RunConfig& c) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
  };
  if (!(c.train_frac > 0 && c.train_frac < 1)) {
    throw Error(ErrorCode::InvalidSplit, "train fraction must lie strictly between 0 and 1, got " +
                                             format_shortest(c.train_frac));
  }
  if (!(c.alpha > 0) || !std::isfinite(c.alpha)) {
    throw Error(ErrorCode::NonPositiveAlpha, "alpha must be positive, got " + format_shortest(c.alpha));
  }
  need(c.vocab_size >= 1, "vocab size must be at least 1");
  need(c.max_length >= 1, "max length must be at least 1");
  need(c.n_estimators >= 1, "n-estimators must be at least 1");
  need(c.max_depth >= 1, "max depth must be at least 1");
  need(c.min_samples_leaf >= 1, "min samples per leaf must be at least 1");
  need(c.epochs >= 1, "epochs must be at least 1");
  need(c.batch_size >= 1, "batch size must be at least 1");
  need(c.learning_rate > 0 && std::isfinite(c.learning_rate), "learning rate must be positive");
  need(c.validation_split >= 0 && c.validation_split <= 0.5, "validation split must lie in [0, 0.5]");
  need(c.embedding_dim >= 1 && c.hidden >= 1 && c.dense >= 1, "layer sizes must be at least 1");
  for (const auto& t : c.tickers) need(valid_ticker(t), "invalid ticker '" + t + "'");
}

TrainSummary cmd_train(const RunConfig& c) {
  validate(c);
  const auto loaded = load_labeled_tweets(c.tweets);
  const auto stop = stopwords_for(c);
  const std::size_t n = loaded.records.size();

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng split_rng(derive_seed(c.seed, kSplitStream));
  split_rng.shuffle(order.begin(), order.end());
  const auto n_train = static_cast<std::size_t>(std::floor(c.train_frac * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    throw Error(ErrorCode::InvalidSplit, "train fraction " + format_shortest(c.train_frac) + " of " +
                                             std::to_string(n) + " rows leaves an empty side");
  }

  std::vector<TokenList> tokens(n);
  parallel_for(n, worker_count(c), [&](std::size_t i) {
    tokens[order[i]] = preprocess(loaded.records[order[i]].record.full_text, stop);
  });
  std::vector<TokenList> train_tokens, test_tokens;
  std::vector<Label> y_train, y_test;
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = order[k];
    (k < n_train ? train_tokens : test_tokens).push_back(tokens[i]);
    (k < n_train ? y_train : y_test).push_back(loaded.records[i].label);
  }

  const auto vocab = Vocabulary::build(train_tokens, c.vocab_size);
  auto binary = [&](const std::vector<TokenList>& docs) {
    std::vector<BinaryVector> x;
    x.reserve(docs.size());
    for (const auto& d : docs) x.push_back(encode_binary(d, vocab));
    return x;
  };
  const auto x_train = binary(train_tokens);
  const auto x_test = binary(test_tokens);

  const auto nb = fit_nb(x_train, y_train, NbOptions{c.alpha, false});

  ForestParams fp;
  fp.n_estimators = c.n_estimators;
  fp.max_depth = c.max_depth;
  fp.mtry = c.mtry;
  fp.min_samples_leaf = c.min_samples_leaf;
  fp.bootstrap = true;
  fp.seed = derive_seed(c.seed, kForestStream);
  fp.n_threads = worker_count(c);
  const auto forest = fit_forest(x_train, y_train, fp);

  const LstmConfig lc{vocab.size(), c.embedding_dim, c.max_length, c.hidden, c.dense};
  auto net = LstmNetwork::initialized(lc, derive_seed(c.seed, kLstmInitStream));
  std::vector<LstmExample> examples;
  examples.reserve(n_train);
  for (std::size_t i = 0; i < n_train; ++i) {
    examples.push_back({encode_sequence(train_tokens[i], vocab, c.max_length), y_train[i]});
  }
  TrainOptions to;
  to.epochs = c.epochs;
  to.validation_split = c.validation_split;
  to.batch_size = c.batch_size;
  to.adam.learning_rate = c.learning_rate;
  to.seed = derive_seed(c.seed, kLstmTrainStream);
  TrainSummary summary;
  summary.history = train(net, examples, to);

  std::vector<Label> p_nb(x_test.size()), p_rf(x_test.size()), p_lstm(x_test.size());
  parallel_for(x_test.size(), worker_count(c), [&](std::size_t i) {
    p_nb[i] = predict_nb(nb, x_test[i]).label;
    p_rf[i] = predict_forest(forest, x_test[i]).label;
    p_lstm[i] = predict_label(net, encode_sequence(test_tokens[i], vocab, c.max_length));
  });

  summary.n_train = n_train;
  summary.n_test = n - n_train;
  summary.skipped_rows = loaded.skipped;
  summary.vocabulary_size = vocab.size();
  summary.reports = {{Model::Nb, confusion(y_test, p_nb)},
                     {Model::Rf, confusion(y_test, p_rf)},
                     {Model::Lstm, confusion(y_test, p_lstm)}};

  make_dir(c.models_dir);
  const auto& dir = c.models_dir;
  vocab.save(dir / kVocabularyFile);
  nb.save(dir / kNbFile);
  forest.save(dir / kForestFile);
  net.save(dir / kLstmFile);

  std::ostringstream text, table;
  text << "train rows: " << n_train << "\ntest rows: " << n - n_train << "\nskipped rows: " << loaded.skipped
       << "\nvocabulary: " << vocab.size() << "\n";
  for (std::size_t e = 0; e < summary.history.epochs.size(); ++e) {
    const auto& s = summary.history.epochs[e];
    text << "lstm epoch " << e + 1 << ": loss " << format_fixed(s.train_loss, 4) << " acc "
         << format_fixed(100 * s.train_accuracy, 2) << "%";
    if (!std::isnan(s.val_loss)) {
      text << " val_loss " << format_fixed(s.val_loss, 4) << " val_acc " << format_fixed(100 * s.val_accuracy, 2)
           << "%";
    }
    text << "\n";
  }
  csv::Writer w(table);
  w.row({"model", "accuracy", "tp", "tn", "fp", "fn"});
  for (const auto& r : summary.reports) {
    text << "\n[" << model_name(r.model) << "]\n" << format_confusion(r.confusion);
    w.row({std::string(model_name(r.model)), format_fixed(r.confusion.accuracy(), 4), std::to_string(r.confusion.tp),
           std::to_string(r.confusion.tn), std::to_string(r.confusion.fp), std::to_string(r.confusion.fn)});
  }
  write_bytes(dir / "report.txt", text.str());
  write_bytes(dir / "report.csv", table.str());

  summary.outputs = {dir / kVocabularyFile, dir / kNbFile,      dir / kForestFile,
                     dir / kLstmFile,       dir / "report.txt", dir / "report.csv"};
  std::vector<fs::path> inputs{c.tweets};
  if (!c.stopwords.empty()) inputs.push_back(c.stopwords);
  write_manifest(dir, "train", config_json(c), inputs, summary.outputs);
  return summary;
}

LabelSummary cmd_label(const RunConfig& c) {
  validate(c);
  const auto& dir = c.models_dir;
  const auto vocab = Vocabulary::load(dir / kVocabularyFile);
  const auto nb = NbModel::load(dir / kNbFile);
  const auto forest = Forest::load(dir / kForestFile);
  const auto net = LstmNetwork::load(dir / kLstmFile);
  auto mismatch = [&](const char* file, std::size_t got) {
    throw Error(ErrorCode::ModelVersionMismatch, std::string(file) + " expects " + std::to_string(got) +
                                                     " features but the vocabulary has " +
                                                     std::to_string(vocab.size()));
  };
  if (nb.n_features() != vocab.size()) mismatch(kNbFile, nb.n_features());
  if (forest.n_features() != vocab.size()) mismatch(kForestFile, forest.n_features());
  if (net.config().vocab_size != vocab.size()) mismatch(kLstmFile, net.config().vocab_size);

  const auto loaded = load_tweets(c.tweets);
  std::vector<TweetRecord> tweets;
  if (c.tickers.empty()) {
    tweets = loaded.records;
  } else {
    const auto filters = ticker_filters(c);
    for (const auto& t : loaded.records) {
      if (std::any_of(filters.begin(), filters.end(), [&](const TickerFilter& f) { return f.matches(t.full_text); })) {
        tweets.push_back(t);
      }
    }
  }
  if (tweets.empty()) throw Error(ErrorCode::EmptyDataset, "no tweets left after the ticker filter");

  const auto stop = stopwords_for(c);
  const std::size_t max_length = net.config().max_length;
  std::vector<std::array<Label, 3>> labels(tweets.size());
  parallel_for(tweets.size(), worker_count(c), [&](std::size_t i) {
    const auto tokens = preprocess(tweets[i].full_text, stop);
    const auto x = encode_binary(tokens, vocab);
    labels[i] = {predict_nb(nb, x).label, predict_forest(forest, x).label,
                 predict_label(net, encode_sequence(tokens, vocab, max_length))};
  });

  std::ostringstream out;
  csv::Writer w(out);
  w.row({"id", "created_at", "full_text", "Label_nb", "Label_rf", "Label_lstm"});
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    w.row({tweets[i].id, tweets[i].created_at.to_string(), tweets[i].full_text, std::to_string(to_int(labels[i][0])),
           std::to_string(to_int(labels[i][1])), std::to_string(to_int(labels[i][2]))});
  }
  make_dir(c.out_dir);
  LabelSummary summary;
  summary.n_input = loaded.records.size();
  summary.n_labeled = tweets.size();
  summary.skipped_rows = loaded.skipped;
  summary.output = c.out_dir / kLabeledFile;
  write_bytes(summary.output, out.str());

  std::vector<fs::path> inputs{c.tweets,          dir / kVocabularyFile, dir / kNbFile,
                               dir / kForestFile, dir / kLstmFile};
  if (!c.stopwords.empty()) inputs.push_back(c.stopwords);
  write_manifest(c.out_dir, "label", config_json(c), inputs, {summary.output});
  return summary;
}

std::vector<TickerSignals> cmd_signals(const RunConfig& c) {
  validate(c);
  if (c.tickers.empty()) throw Error(ErrorCode::InvalidArgument, "signals needs at least one --ticker");
  const auto filters = ticker_filters(c);
  const auto loaded = load_classified_tweets(c.tweets);
  make_dir(c.out_dir);

  std::vector<TickerSignals> results(filters.size());
  parallel_for(filters.size(), worker_count(c), [&](std::size_t k) {
    const auto& filter = filters[k];
    const std::string& ticker = filter.ticker();
    std::vector<ClassifiedTweet> mine;
    for (const auto& t : loaded.records) {
      if (filter.matches(t.record.full_text)) mine.push_back(t);
    }
    if (mine.empty()) throw Error(ErrorCode::EmptyDataset, "no labeled tweets mention " + ticker);

    TickerSignals& r = results[k];
    r.ticker = ticker;
    r.sentiment = bullishness_series(mine);
    const auto bars = load_ohlc(prices_for(c, ticker));
    const auto returns = return_series(bars);
    r.pairs = align(returns, r.sentiment, c.align);
    r.correlations = correlate(r.pairs);

    auto emit = [&](const std::string& name, const std::string& bytes) {
      const auto path = c.out_dir / (ticker + "_" + name);
      write_bytes(path, bytes);
      r.outputs.push_back(path);
    };
    std::ostringstream s;
    write_bullishness_csv(s, r.sentiment);
    emit("bullishness.csv", s.str());
    s.str("");
    write_aligned_csv(s, r.pairs);
    emit("aligned.csv", s.str());
    s.str("");
    write_correlation_csv(s, r.correlations);
    emit("correlation.csv", s.str());

    svg::LineChart daily;
    daily.title = ticker + " daily bullishness";
    daily.y_label = "bullishness";
    for (const auto& d : r.sentiment) daily.x_labels.push_back(d.date.to_string());
    for (const auto m : kModels) {
      svg::Series series{std::string(model_name(m)), color_of(m), {}};
      for (const auto& d : r.sentiment) series.values.push_back(at(d.bullishness, m));
      daily.series.push_back(std::move(series));
    }
    emit("bullishness.svg", svg::render(daily));

    for (const auto m : kModels) {
      svg::LineChart overlay;
      overlay.title = ticker + " " + std::string(model_name(m)) + " bullishness vs return";
      overlay.y_label = "bullishness / return (%)";
      svg::Series b{std::string(model_name(m)), color_of(m), {}};
      svg::Series ret{"return", "#7f7f7f", {}};
      for (const auto& p : r.pairs) {
        overlay.x_labels.push_back(p.sentiment_date.to_string());
        b.values.push_back(at(p.bullishness, m));
        ret.values.push_back(p.return_value);
      }
      overlay.series = {std::move(b), std::move(ret)};
      emit(std::string(model_name(m)) + "_vs_return.svg", svg::render(overlay));
    }
  });

  std::vector<fs::path> inputs{c.tweets};
  std::vector<fs::path> outputs;
  for (std::size_t k = 0; k < results.size(); ++k) {
    inputs.push_back(prices_for(c, results[k].ticker));
    outputs.insert(outputs.end(), results[k].outputs.begin(), results[k].outputs.end());
  }
  write_manifest(c.out_dir, "signals", config_json(c), inputs, outputs);
  return results;
}

std::size_t cmd_preprocess(const RunConfig& c) {
  validate(c);
  const auto loaded = load_tweets(c.tweets);
  const auto stop = stopwords_for(c);
  std::ostringstream out;
  csv::Writer w(out);
  w.row({"id", "tokens"});
  for (const auto& t : loaded.records) w.row({t.id, join_tokens(preprocess(t.full_text, stop))});
  make_dir(c.out_dir);
  const auto path = c.out_dir / "tokens.csv";
  write_bytes(path, out.str());
  std::vector<fs::path> inputs{c.tweets};
  if (!c.stopwords.empty()) inputs.push_back(c.stopwords);
  write_manifest(c.out_dir, "preprocess", config_json(c), inputs, {path});
  return loaded.records.size();
}

synthetic::Fixture cmd_generate(const RunConfig& c, const synthetic::Options& options) {
  auto fixture = synthetic::generate(options);
  synthetic::write_fixture(fixture, c.out_dir);
  const json config{{"out_dir", c.out_dir.generic_string()},
                    {"seed", options.seed},
                    {"training_size", options.training_size},
                    {"days", options.days},
                    {"start", options.start.to_string()},
                    {"tweets_per_day", options.tweets_per_day},
                    {"ticker", options.ticker},
                    {"correlation", options.correlation},
                    {"sentiment_scale", options.sentiment_scale},
                    {"weak_share", options.weak_share},
                    {"weak_purity", options.weak_purity},
                    {"label_noise", options.label_noise},
                    {"off_ticker_share", options.off_ticker_share},
                    {"daily_volatility", options.daily_volatility}};
  write_manifest(c.out_dir, "generate", config, {},
                 {c.out_dir / "training.csv", c.out_dir / "tweets.csv", c.out_dir / "prices.csv"});
  return fixture;
}

}  // namespace tweetsignal::pipeline
