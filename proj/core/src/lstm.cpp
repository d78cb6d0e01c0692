#include "tweetsignal/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "tweetsignal/error.hpp"
#include "tweetsignal/number_io.hpp"
#include "tweetsignal/rng.hpp"

namespace tweetsignal {

namespace {

constexpr std::string_view kMagic = "tweetsignal-lstm";

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Keeps the network output strictly inside (0, 1) even when the logit
// saturates in double precision.
double open_unit(double p) {
  static const double kHigh = std::nextafter(1.0, 0.0);
  return std::clamp(p, std::numeric_limits<double>::min(), kHigh);
}

// Activations of one LSTM direction, one column per processed step.
// `cells` and `hidden` carry an extra leading zero column for the initial state.
struct DirectionTrace {
  std::vector<std::int32_t> ids;
  Mat gates;   // 4H x T, post-activation (i, f, g, o)
  Mat cells;   // H x (T+1)
  Mat hidden;  // H x (T+1)
};

struct ForwardTrace {
  DirectionTrace fwd;
  DirectionTrace bwd;
  Vec concat;    // 2H
  Vec dense1_z;  // K
  Vec dense1_a;  // K
  double logit = 0;
  double p = 0;
};

void check_sequence(const LstmNetwork& net, const TokenSequence& seq) {
  const auto& cfg = net.config();
  if (seq.size() != cfg.max_length) {
    throw Error(ErrorCode::DimensionMismatch, "sequence length " + std::to_string(seq.size()) +
                                                  ", network expects " + std::to_string(cfg.max_length));
  }
  for (auto id : seq.ids) {
    if (id < 0 || static_cast<std::size_t>(id) > cfg.vocab_size) {
      throw Error(ErrorCode::IdOutOfRange, "token id " + std::to_string(id) + " outside [0, " +
                                               std::to_string(cfg.vocab_size) + "]");
    }
  }
}

void run_direction(const LstmNetwork& net, LstmNetwork::TensorId w_id, std::vector<std::int32_t> ids,
                   DirectionTrace& trace) {
  const auto h = static_cast<Eigen::Index>(net.config().hidden);
  const auto steps = static_cast<Eigen::Index>(ids.size());
  const auto emb = net.tensor(LstmNetwork::kEmbedding);
  const auto w = net.tensor(w_id);
  const auto u = net.tensor(static_cast<LstmNetwork::TensorId>(w_id + 1));
  const auto b = net.tensor(static_cast<LstmNetwork::TensorId>(w_id + 2));

  trace.ids = std::move(ids);
  trace.gates.resize(4 * h, steps);
  trace.cells = Mat::Zero(h, steps + 1);
  trace.hidden = Mat::Zero(h, steps + 1);

  Vec a(4 * h);
  for (Eigen::Index s = 0; s < steps; ++s) {
    a.noalias() = w * emb.row(trace.ids[static_cast<std::size_t>(s)]).transpose();
    a.noalias() += u * trace.hidden.col(s);
    a += b.row(0).transpose();
    auto gates = trace.gates.col(s);
    for (Eigen::Index k = 0; k < h; ++k) {
      gates(k) = sigmoid(a(k));
      gates(h + k) = sigmoid(a(h + k));
      gates(2 * h + k) = std::tanh(a(2 * h + k));
      gates(3 * h + k) = sigmoid(a(3 * h + k));
    }
    for (Eigen::Index k = 0; k < h; ++k) {
      const double c = gates(h + k) * trace.cells(k, s) + gates(k) * gates(2 * h + k);
      trace.cells(k, s + 1) = c;
      trace.hidden(k, s + 1) = gates(3 * h + k) * std::tanh(c);
    }
  }
}

void run_forward(const LstmNetwork& net, const TokenSequence& seq, ForwardTrace& t) {
  check_sequence(net, seq);
  const auto h = static_cast<Eigen::Index>(net.config().hidden);
  std::vector<std::int32_t> reversed(seq.ids.rbegin(), seq.ids.rend());
  run_direction(net, LstmNetwork::kForwardW, seq.ids, t.fwd);
  run_direction(net, LstmNetwork::kBackwardW, std::move(reversed), t.bwd);

  t.concat.resize(2 * h);
  t.concat.head(h) = t.fwd.hidden.col(t.fwd.hidden.cols() - 1);
  t.concat.tail(h) = t.bwd.hidden.col(t.bwd.hidden.cols() - 1);

  const auto w1 = net.tensor(LstmNetwork::kDense1W);
  const auto b1 = net.tensor(LstmNetwork::kDense1B);
  const auto w2 = net.tensor(LstmNetwork::kDense2W);
  const auto b2 = net.tensor(LstmNetwork::kDense2B);
  t.dense1_z = w1 * t.concat + b1.row(0).transpose();
  t.dense1_a = t.dense1_z.cwiseMax(0.0);
  t.logit = w2.row(0).dot(t.dense1_a) + b2(0, 0);
  t.p = open_unit(sigmoid(t.logit));
}

// Backpropagates dL/dh_final through one direction.
void backprop_direction(const LstmNetwork& net, LstmNetwork::TensorId w_id, const DirectionTrace& t,
                        Vec dh, std::span<double> grad) {
  const auto h = static_cast<Eigen::Index>(net.config().hidden);
  const auto d = static_cast<Eigen::Index>(net.config().embedding_dim);
  const auto& tensors = net.tensors();
  auto view = [&](std::size_t id) {
    const auto& info = tensors[id];
    return LstmNetwork::MatrixView(grad.data() + info.offset, static_cast<Eigen::Index>(info.rows),
                                   static_cast<Eigen::Index>(info.cols));
  };
  const auto emb = net.tensor(LstmNetwork::kEmbedding);
  const auto w = net.tensor(w_id);
  const auto u = net.tensor(static_cast<LstmNetwork::TensorId>(w_id + 1));
  auto g_emb = view(LstmNetwork::kEmbedding);
  auto g_w = view(w_id);
  auto g_u = view(w_id + 1);
  auto g_b = view(w_id + 2);

  Vec dc = Vec::Zero(h);
  Vec da(4 * h);
  Vec dx(d);
  for (Eigen::Index s = t.gates.cols() - 1; s >= 0; --s) {
    const auto gates = t.gates.col(s);
    for (Eigen::Index k = 0; k < h; ++k) {
      const double i = gates(k), f = gates(h + k), g = gates(2 * h + k), o = gates(3 * h + k);
      const double tanh_c = std::tanh(t.cells(k, s + 1));
      const double d_o = dh(k) * tanh_c;
      const double dck = dc(k) + dh(k) * o * (1.0 - tanh_c * tanh_c);
      da(k) = dck * g * i * (1.0 - i);
      da(h + k) = dck * t.cells(k, s) * f * (1.0 - f);
      da(2 * h + k) = dck * i * (1.0 - g * g);
      da(3 * h + k) = d_o * o * (1.0 - o);
      dc(k) = dck * f;
    }
    const auto id = t.ids[static_cast<std::size_t>(s)];
    g_w.noalias() += da * emb.row(id);
    g_u.noalias() += da * t.hidden.col(s).transpose();
    g_b.row(0) += da.transpose();
    dx.noalias() = w.transpose() * da;
    g_emb.row(id) += dx.transpose();
    dh.noalias() = u.transpose() * da;
  }
}

std::size_t fan_sum(const LstmNetwork::Tensor& t, const LstmConfig& cfg, LstmNetwork::TensorId id) {
  switch (id) {
    case LstmNetwork::kForwardW:
    case LstmNetwork::kBackwardW:
      return cfg.embedding_dim + 4 * cfg.hidden;
    case LstmNetwork::kForwardU:
    case LstmNetwork::kBackwardU:
      return cfg.hidden + 4 * cfg.hidden;
    default:
      return t.rows + t.cols;
  }
}

}  // namespace

LstmNetwork::LstmNetwork(const LstmConfig& config) : config_(config) {
  if (config.embedding_dim == 0 || config.max_length == 0 || config.hidden == 0 || config.dense == 0) {
    throw Error(ErrorCode::InvalidArgument, "lstm dimensions must be positive");
  }
  const std::size_t v = config.vocab_size + 1, d = config.embedding_dim, h = config.hidden,
                    k = config.dense;
  const std::pair<const char*, std::pair<std::size_t, std::size_t>> shapes[kTensorCount] = {
      {"embedding", {v, d}},   {"forward.w", {4 * h, d}},  {"forward.u", {4 * h, h}},
      {"forward.b", {1, 4 * h}}, {"backward.w", {4 * h, d}}, {"backward.u", {4 * h, h}},
      {"backward.b", {1, 4 * h}}, {"dense1.w", {k, 2 * h}},  {"dense1.b", {1, k}},
      {"dense2.w", {1, k}},    {"dense2.b", {1, 1}},
  };
  std::size_t offset = 0;
  for (const auto& [name, shape] : shapes) {
    tensors_.push_back({name, shape.first, shape.second, offset});
    offset += shape.first * shape.second;
  }
  params_.assign(offset, 0.0);
}

LstmNetwork LstmNetwork::initialized(const LstmConfig& config, std::uint64_t seed) {
  LstmNetwork net(config);
  Rng rng(seed);
  for (std::size_t id = 0; id < kTensorCount; ++id) {
    const auto& t = net.tensors_[id];
    double* p = net.params_.data() + t.offset;
    const auto tid = static_cast<TensorId>(id);
    if (tid == kEmbedding) {
      for (std::size_t i = 0; i < t.size(); ++i) p[i] = rng.uniform(-0.05, 0.05);
    } else if (tid == kForwardB || tid == kBackwardB) {
      for (std::size_t i = 0; i < t.size(); ++i) p[i] = 0.0;
      for (std::size_t i = config.hidden; i < 2 * config.hidden; ++i) p[i] = 1.0;
    } else if (tid == kDense1B || tid == kDense2B) {
      for (std::size_t i = 0; i < t.size(); ++i) p[i] = 0.0;
    } else {
      const double limit = std::sqrt(6.0 / static_cast<double>(fan_sum(t, config, tid)));
      for (std::size_t i = 0; i < t.size(); ++i) p[i] = rng.uniform(-limit, limit);
    }
  }
  return net;
}

LstmNetwork::MatrixView LstmNetwork::tensor(TensorId id) {
  const auto& t = tensors_[id];
  return MatrixView(params_.data() + t.offset, static_cast<Eigen::Index>(t.rows),
                    static_cast<Eigen::Index>(t.cols));
}

LstmNetwork::ConstMatrixView LstmNetwork::tensor(TensorId id) const {
  const auto& t = tensors_[id];
  return ConstMatrixView(params_.data() + t.offset, static_cast<Eigen::Index>(t.rows),
                         static_cast<Eigen::Index>(t.cols));
}

double forward(const LstmNetwork& net, const TokenSequence& seq) {
  ForwardTrace t;
  run_forward(net, seq, t);
  return t.p;
}

double bce_loss(double p, Label y) {
  const double q = std::clamp(p, kBceEpsilon, 1.0 - kBceEpsilon);
  return y == Label::Positive ? -std::log(q) : -std::log(1.0 - q);
}

ExampleLoss accumulate_gradient(const LstmNetwork& net, const TokenSequence& seq, Label y,
                                std::span<double> grad) {
  if (grad.size() != net.parameter_count()) {
    throw Error(ErrorCode::DimensionMismatch, "gradient buffer does not match the network");
  }
  ForwardTrace t;
  run_forward(net, seq, t);
  const double target = y == Label::Positive ? 1.0 : 0.0;
  const double loss = bce_loss(t.p, y);
  // Inside the clamp, d loss / d logit = p - y; outside it the loss is flat.
  const bool clamped = t.p < kBceEpsilon || t.p > 1.0 - kBceEpsilon;
  const double d_logit = clamped ? 0.0 : t.p - target;

  const auto h = static_cast<Eigen::Index>(net.config().hidden);
  const auto& tensors = net.tensors();
  auto view = [&](std::size_t id) {
    const auto& info = tensors[id];
    return LstmNetwork::MatrixView(grad.data() + info.offset, static_cast<Eigen::Index>(info.rows),
                                   static_cast<Eigen::Index>(info.cols));
  };
  const auto w1 = net.tensor(LstmNetwork::kDense1W);
  const auto w2 = net.tensor(LstmNetwork::kDense2W);

  view(LstmNetwork::kDense2W).row(0) += d_logit * t.dense1_a.transpose();
  view(LstmNetwork::kDense2B)(0, 0) += d_logit;

  Vec dz1 = d_logit * w2.row(0).transpose();
  for (Eigen::Index k = 0; k < dz1.size(); ++k) {
    if (!(t.dense1_z(k) > 0.0)) dz1(k) = 0.0;
  }
  view(LstmNetwork::kDense1W).noalias() += dz1 * t.concat.transpose();
  view(LstmNetwork::kDense1B).row(0) += dz1.transpose();
  const Vec d_concat = w1.transpose() * dz1;

  backprop_direction(net, LstmNetwork::kForwardW, t.fwd, d_concat.head(h), grad);
  backprop_direction(net, LstmNetwork::kBackwardW, t.bwd, d_concat.tail(h), grad);
  return {loss, t.p};
}

Label predict_label(const LstmNetwork& net, const TokenSequence& seq, double threshold) {
  return label_from_bool(forward(net, seq) >= threshold);
}

void LstmNetwork::write(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "vocab_size " << config_.vocab_size << '\n';
  out << "embedding_dim " << config_.embedding_dim << '\n';
  out << "max_length " << config_.max_length << '\n';
  out << "hidden " << config_.hidden << '\n';
  out << "dense " << config_.dense << '\n';
  for (const auto& t : tensors_) {
    out << "tensor " << t.name << ' ' << t.rows << ' ' << t.cols << '\n';
    for (std::size_t r = 0; r < t.rows; ++r) {
      for (std::size_t c = 0; c < t.cols; ++c) {
        if (c) out << ' ';
        out << format_exact(params_[t.offset + r * t.cols + c]);
      }
      out << '\n';
    }
  }
}

LstmNetwork LstmNetwork::read(std::istream& in) {
  std::string line;
  auto next = [&](std::string_view what) {
    if (!std::getline(in, line)) throw Error(ErrorCode::ModelFormat, "lstm file truncated at " + std::string(what));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return std::istringstream(line);
  };
  {
    auto ss = next("header");
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != kMagic) throw Error(ErrorCode::ModelFormat, "not an lstm file");
    if (version != kFormatVersion) {
      throw Error(ErrorCode::ModelVersionMismatch, "lstm version " + std::to_string(version) +
                                                       ", expected " + std::to_string(kFormatVersion));
    }
  }
  auto keyed = [&](std::string_view key) {
    auto ss = next(key);
    std::string k;
    std::size_t v = 0;
    if (!(ss >> k >> v) || k != key) throw Error(ErrorCode::ModelFormat, "expected '" + std::string(key) + "'");
    return v;
  };
  LstmConfig cfg;
  cfg.vocab_size = keyed("vocab_size");
  cfg.embedding_dim = keyed("embedding_dim");
  cfg.max_length = keyed("max_length");
  cfg.hidden = keyed("hidden");
  cfg.dense = keyed("dense");
  LstmNetwork net(cfg);
  for (const auto& t : net.tensors_) {
    auto ss = next("tensor header");
    std::string kw, name;
    std::size_t rows = 0, cols = 0;
    if (!(ss >> kw >> name >> rows >> cols) || kw != "tensor" || name != t.name || rows != t.rows ||
        cols != t.cols) {
      throw Error(ErrorCode::ModelFormat, "expected tensor " + t.name + " " + std::to_string(t.rows) +
                                              "x" + std::to_string(t.cols) + ", got '" + line + "'");
    }
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = next(t.name);
      std::string tok;
      for (std::size_t c = 0; c < cols; ++c) {
        const auto v = (row >> tok) ? parse_double(tok) : std::nullopt;
        if (!v) throw Error(ErrorCode::ModelFormat, "bad value in tensor " + t.name);
        net.params_[t.offset + r * cols + c] = *v;
      }
    }
  }
  return net;
}

void LstmNetwork::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write(out);
}

LstmNetwork LstmNetwork::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read(in);
}

}  // namespace tweetsignal
