#pragma once

#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tweetsignal {

/// Ordered lowercase word tokens, each matching [a-z0-9_]+.
using TokenList = std::vector<std::string>;

class StopwordList {
 public:
  StopwordList() = default;
  /// Entries are lowercased; throws Error(InvalidArgument) on an empty entry or
  /// one containing whitespace.
  explicit StopwordList(const std::set<std::string, std::less<>>& words);

  /// About 130 English function words: pronouns, articles, auxiliaries,
  /// stative verbs, prepositions and a few tweet artifacts (`rt`, `amp`).
  static const StopwordList& builtin();

  /// One word per line; `#` starts a comment. ASCII punctuation inside an entry
  /// is dropped so that entries match cleaned text (`don't` -> `dont`).
  static StopwordList from_file(const std::filesystem::path& path);

  bool contains(std::string_view word) const { return words_.find(word) != words_.end(); }
  const std::set<std::string, std::less<>>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

/// Lowercases, then removes URLs, @usernames, punctuation, letter runs of 3+
/// (collapsed to one letter), all-digit words and stopwords, in that order,
/// and normalizes whitespace to single spaces.
std::string clean_text(std::string_view raw, const StopwordList& stopwords);

/// Maximal runs of word characters ([A-Za-z0-9_]), lowercased.
TokenList tokenize(std::string_view cleaned);

/// Classic Porter (1980) stemmer, reference-implementation variant.
std::string stem_token(std::string_view token);

/// Rule-based English lemmatizer backed by a small exception table. Rules are
/// reapplied to a fixed point, so it is idempotent.
std::string lemmatize_token(std::string_view token);

/// tokenize(clean_text(raw)), lemmatized then stemmed. Tokens that become
/// stopwords after normalization are dropped as well.
TokenList preprocess(std::string_view raw, const StopwordList& stopwords);

}  // namespace tweetsignal
