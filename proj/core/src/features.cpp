#include "tweetsignal/features.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tweetsignal/error.hpp"
#include "tweetsignal/number_io.hpp"

namespace tweetsignal {

namespace {
constexpr std::string_view kMagic = "tweetsignal-vocabulary";
}

std::size_t BinaryVector::popcount() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Vocabulary::Vocabulary(std::vector<Entry> entries, std::size_t max_terms)
    : entries_(std::move(entries)), max_terms_(max_terms) {
  if (max_terms_ == 0) throw Error(ErrorCode::InvalidArgument, "max_terms must be positive");
  if (entries_.size() > max_terms_) {
    throw Error(ErrorCode::InvalidArgument, "vocabulary larger than max_terms");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.term.empty() || e.term.find_first_of("\t\r\n ") != std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "invalid vocabulary term '" + e.term + "'");
    }
    if (i > 0) {
      const auto& prev = entries_[i - 1];
      if (prev.frequency < e.frequency || (prev.frequency == e.frequency && prev.term >= e.term)) {
        throw Error(ErrorCode::InvalidArgument, "vocabulary entries not in rank order at '" +
                                                    e.term + "'");
      }
    }
    index_.emplace(e.term, i);
  }
}

Vocabulary Vocabulary::build(std::span<const TokenList> corpus, std::size_t max_terms) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot build a vocabulary from no documents");
  if (max_terms == 0) throw Error(ErrorCode::InvalidArgument, "max_terms must be positive");

  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& doc : corpus) {
    for (const auto& token : doc) ++counts[token];
  }
  std::vector<Entry> entries;
  entries.reserve(counts.size());
  for (auto& [term, count] : counts) entries.push_back({term, count});

  const std::size_t keep = std::min(max_terms, entries.size());
  auto ranked_before = [](const Entry& a, const Entry& b) {
    return a.frequency != b.frequency ? a.frequency > b.frequency : a.term < b.term;
  };
  std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(keep),
                    entries.end(), ranked_before);
  entries.resize(keep);
  return Vocabulary(std::move(entries), max_terms);
}

std::optional<std::size_t> Vocabulary::position(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::int32_t> Vocabulary::sequence_id(std::string_view term) const {
  if (auto pos = position(term)) return static_cast<std::int32_t>(*pos + 1);
  return std::nullopt;
}

void Vocabulary::write(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "max_terms " << max_terms_ << '\n';
  for (const auto& e : entries_) out << e.term << '\t' << e.frequency << '\n';
}

Vocabulary Vocabulary::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ModelFormat, "empty vocabulary file");
  {
    std::istringstream header(line);
    std::string magic;
    int version = 0;
    if (!(header >> magic >> version) || magic != kMagic) {
      throw Error(ErrorCode::ModelFormat, "not a vocabulary file");
    }
    if (version != kFormatVersion) {
      throw Error(ErrorCode::ModelVersionMismatch,
                  "vocabulary format version " + std::to_string(version) + ", expected " +
                      std::to_string(kFormatVersion));
    }
  }
  std::size_t max_terms = 0;
  {
    if (!std::getline(in, line)) throw Error(ErrorCode::ModelFormat, "vocabulary missing max_terms");
    std::istringstream header(line);
    std::string key;
    if (!(header >> key >> max_terms) || key != "max_terms") {
      throw Error(ErrorCode::ModelFormat, "bad max_terms line in vocabulary");
    }
  }
  std::vector<Entry> entries;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    const auto freq = tab == std::string::npos ? std::nullopt : parse_int(line.substr(tab + 1));
    if (!freq || *freq < 0) throw Error(ErrorCode::ModelFormat, "bad vocabulary line '" + line + "'");
    entries.push_back({line.substr(0, tab), static_cast<std::uint64_t>(*freq)});
  }
  try {
    return Vocabulary(std::move(entries), max_terms);
  } catch (const Error& e) {
    throw Error(ErrorCode::ModelFormat, e.what());
  }
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write(out);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read(in);
}

BinaryVector encode_binary(std::span<const std::string> tokens, const Vocabulary& vocab) {
  BinaryVector v{std::vector<std::uint8_t>(vocab.size(), 0)};
  for (const auto& t : tokens) {
    if (auto pos = vocab.position(t)) v.bits[*pos] = 1;
  }
  return v;
}

TokenSequence encode_sequence(std::span<const std::string> tokens, const Vocabulary& vocab,
                              std::size_t max_length) {
  if (max_length == 0) throw Error(ErrorCode::InvalidArgument, "max_length must be positive");
  TokenSequence seq{std::vector<std::int32_t>(max_length, 0)};
  std::size_t n = 0;
  for (const auto& t : tokens) {
    if (n == max_length) break;
    if (auto id = vocab.sequence_id(t)) seq.ids[n++] = *id;
  }
  return seq;
}

}  // namespace tweetsignal
