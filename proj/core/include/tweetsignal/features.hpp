#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tweetsignal/textprep.hpp"

namespace tweetsignal {

/// Presence/absence of each vocabulary term in one document.
struct BinaryVector {
  std::vector<std::uint8_t> bits;

  std::size_t size() const noexcept { return bits.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits[i]; }
  std::size_t popcount() const;

  friend bool operator==(const BinaryVector&, const BinaryVector&) = default;
};

/// Fixed-length vocabulary ids (1-based) followed by zero padding.
struct TokenSequence {
  std::vector<std::int32_t> ids;

  std::size_t size() const noexcept { return ids.size(); }
  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

/// Most frequent terms of a corpus, ranked by (count desc, term asc).
class Vocabulary {
 public:
  inline static constexpr int kFormatVersion = 1;
  inline static constexpr std::size_t kDefaultMaxTerms = 5000;

  struct Entry {
    std::string term;
    std::uint64_t frequency = 0;
  };

  Vocabulary() = default;
  /// `entries` must already be in rank order with no duplicates; throws
  /// Error(InvalidArgument) otherwise or when it exceeds `max_terms`.
  Vocabulary(std::vector<Entry> entries, std::size_t max_terms);

  /// Throws Error(EmptyCorpus) for an empty corpus and Error(InvalidArgument)
  /// for max_terms == 0.
  static Vocabulary build(std::span<const TokenList> corpus, std::size_t max_terms);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t max_terms() const noexcept { return max_terms_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const std::string& term(std::size_t position) const { return entries_.at(position).term; }

  /// 0-based position used by BinaryVector.
  std::optional<std::size_t> position(std::string_view term) const;
  /// 1-based id used by TokenSequence; 0 is reserved for padding.
  std::optional<std::int32_t> sequence_id(std::string_view term) const;

  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.max_terms_ == b.max_terms_ && a.entries_.size() == b.entries_.size() &&
           std::equal(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                      [](const Entry& x, const Entry& y) {
                        return x.term == y.term && x.frequency == y.frequency;
                      });
  }

 private:
  std::vector<Entry> entries_;
  std::size_t max_terms_ = kDefaultMaxTerms;
  std::unordered_map<std::string, std::size_t> index_;
};

BinaryVector encode_binary(std::span<const std::string> tokens, const Vocabulary& vocab);

inline constexpr std::size_t kDefaultMaxLength = 30;

/// In-vocabulary ids in order, out-of-vocabulary tokens dropped, truncated to
/// `max_length` and zero-padded at the end.
TokenSequence encode_sequence(std::span<const std::string> tokens, const Vocabulary& vocab,
                              std::size_t max_length);

}  // namespace tweetsignal
