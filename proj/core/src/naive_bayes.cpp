#include "tweetsignal/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "tweetsignal/error.hpp"
#include "tweetsignal/number_io.hpp"

namespace tweetsignal {

namespace {

constexpr std::string_view kMagic = "tweetsignal-nb";

std::string next_line(std::istream& in, std::string_view what) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ModelFormat, "nb model truncated before " + std::string(what));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected) {
  std::vector<double> row;
  row.reserve(expected);
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    const auto v = parse_double(tok);
    if (!v) throw Error(ErrorCode::ModelFormat, "bad number '" + tok + "' in nb model");
    row.push_back(*v);
  }
  if (row.size() != expected) throw Error(ErrorCode::ModelFormat, "nb model row has wrong length");
  return row;
}

void write_row(std::ostream& out, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ' ';
    out << format_exact(row[i]);
  }
  out << '\n';
}

}  // namespace

NbModel::NbModel(std::array<double, 2> class_log_prior, std::array<ClassTable, 2> tables, double alpha)
    : class_log_prior_(class_log_prior), tables_(std::move(tables)), alpha_(alpha) {
  const std::size_t n = tables_[0].log_present.size();
  for (const auto& t : tables_) {
    if (t.log_present.size() != n || t.log_absent.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "nb class tables differ in length");
    }
  }
}

NbModel fit_nb(std::span<const BinaryVector> x, std::span<const Label> y, NbOptions options) {
  if (!(options.alpha > 0) || !std::isfinite(options.alpha)) {
    throw Error(ErrorCode::NonPositiveAlpha, "alpha must be a positive finite number");
  }
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "x has " + std::to_string(x.size()) + " rows, y has " +
                                                  std::to_string(y.size()));
  }
  if (x.empty()) throw Error(ErrorCode::EmptyData, "no training examples");
  const std::size_t n_features = x.front().size();

  std::array<std::size_t, 2> class_count{};
  std::array<std::vector<std::size_t>, 2> present{std::vector<std::size_t>(n_features, 0),
                                                  std::vector<std::size_t>(n_features, 0)};
  for (std::size_t r = 0; r < x.size(); ++r) {
    if (x[r].size() != n_features) {
      throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(r) + " has " +
                                                    std::to_string(x[r].size()) + " features, expected " +
                                                    std::to_string(n_features));
    }
    const auto c = static_cast<std::size_t>(y[r]);
    ++class_count[c];
    auto& counts = present[c];
    for (std::size_t i = 0; i < n_features; ++i) counts[i] += x[r].bits[i];
  }

  const double alpha = options.alpha;
  std::array<double, 2> prior{};
  std::array<NbModel::ClassTable, 2> tables;
  for (std::size_t c = 0; c < 2; ++c) {
    if (options.uniform_prior) {
      prior[c] = std::log(0.5);
    } else {
      prior[c] = class_count[c] == 0 ? -std::numeric_limits<double>::infinity()
                                     : std::log(static_cast<double>(class_count[c]) /
                                                static_cast<double>(x.size()));
    }
    const double denom = static_cast<double>(class_count[c]) + 2.0 * alpha;
    auto& t = tables[c];
    t.log_present.resize(n_features);
    t.log_absent.resize(n_features);
    for (std::size_t i = 0; i < n_features; ++i) {
      const double on = static_cast<double>(present[c][i]);
      const double off = static_cast<double>(class_count[c] - present[c][i]);
      t.log_present[i] = std::log((on + alpha) / denom);
      t.log_absent[i] = std::log((off + alpha) / denom);
    }
  }
  return NbModel(prior, std::move(tables), alpha);
}

NbPrediction predict_nb(const NbModel& model, const BinaryVector& x) {
  if (x.size() != model.n_features()) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                                  " features, model expects " +
                                                  std::to_string(model.n_features()));
  }
  NbPrediction out;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& t = model.table(static_cast<Label>(c));
    double sum = model.class_log_prior()[c];
    for (std::size_t i = 0; i < x.size(); ++i) sum += x.bits[i] ? t.log_present[i] : t.log_absent[i];
    out.log_posterior[c] = sum;
  }
  const double neg = out.log_posterior[0];
  const double pos = out.log_posterior[1];
  const double scale = std::max({1.0, std::abs(neg), std::abs(pos)});
  const bool positive = std::isfinite(pos) && (!std::isfinite(neg) || pos - neg > kNbTieTolerance * scale);
  out.label = label_from_bool(positive);
  return out;
}

void NbModel::write(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "n_features " << n_features() << '\n';
  out << "alpha " << format_exact(alpha_) << '\n';
  out << "prior " << format_exact(class_log_prior_[0]) << ' ' << format_exact(class_log_prior_[1])
      << '\n';
  for (std::size_t c = 0; c < 2; ++c) {
    out << "class " << c << '\n';
    write_row(out, tables_[c].log_present);
    write_row(out, tables_[c].log_absent);
  }
}

NbModel NbModel::read(std::istream& in) {
  {
    std::istringstream ss(next_line(in, "header"));
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != kMagic) throw Error(ErrorCode::ModelFormat, "not an nb model");
    if (version != kFormatVersion) {
      throw Error(ErrorCode::ModelVersionMismatch, "nb model version " + std::to_string(version) +
                                                       ", expected " + std::to_string(kFormatVersion));
    }
  }
  auto keyed = [&](std::string_view key) {
    std::istringstream ss(next_line(in, key));
    std::string k, v;
    if (!(ss >> k >> v) || k != key) throw Error(ErrorCode::ModelFormat, "expected '" + std::string(key) + "'");
    return v;
  };
  const auto n_features = parse_int(keyed("n_features"));
  const auto alpha = parse_double(keyed("alpha"));
  if (!n_features || *n_features < 0 || !alpha) throw Error(ErrorCode::ModelFormat, "bad nb header");

  std::array<double, 2> prior{};
  {
    std::istringstream ss(next_line(in, "prior"));
    std::string k, a, b;
    if (!(ss >> k >> a >> b) || k != "prior") throw Error(ErrorCode::ModelFormat, "bad prior line");
    const auto pa = parse_double(a);
    const auto pb = parse_double(b);
    if (!pa || !pb) throw Error(ErrorCode::ModelFormat, "bad prior values");
    prior = {*pa, *pb};
  }
  const auto n = static_cast<std::size_t>(*n_features);
  std::array<ClassTable, 2> tables;
  for (std::size_t c = 0; c < 2; ++c) {
    if (next_line(in, "class") != "class " + std::to_string(c)) {
      throw Error(ErrorCode::ModelFormat, "expected class " + std::to_string(c));
    }
    tables[c].log_present = parse_row(next_line(in, "row"), n);
    tables[c].log_absent = parse_row(next_line(in, "row"), n);
  }
  return NbModel(prior, std::move(tables), *alpha);
}

void NbModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write(out);
}

NbModel NbModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read(in);
}

}  // namespace tweetsignal
