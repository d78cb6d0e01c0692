#include <algorithm>

#include "tweetsignal/textprep.hpp"

namespace tweetsignal {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_lower_alpha(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word_char(char c) {
  return is_lower_alpha(c) || is_digit(c) || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) ||
         (u >= 123 && u <= 126);
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (w.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Cuts each whitespace token at the first URL marker; the URL tail becomes a space.
std::string remove_urls(std::string_view s) {
  std::vector<std::string> kept;
  for (auto& word : split_ws(s)) {
    std::size_t cut = std::min({word.find("http://"), word.find("https://"), word.find("www.")});
    if (cut != std::string::npos) word.erase(cut);
    kept.push_back(std::move(word));
  }
  return join(kept);
}

std::string remove_usernames(std::string_view s) {
  std::vector<std::string> kept;
  for (auto& word : split_ws(s)) {
    if (!word.starts_with('@')) kept.push_back(std::move(word));
  }
  return join(kept);
}

// ASCII punctuation is deleted outright; any other non-word byte (emoji and
// other UTF-8 sequences, control characters) becomes a space.
std::string remove_punctuation(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (is_ascii_punct(c)) continue;
    if (is_lower_alpha(c) || is_digit(c) || is_space(c)) {
      out.push_back(c);
    } else {
      out.push_back(' ');
    }
  }
  return out;
}

std::string collapse_letter_runs(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i + 1;
    while (j < s.size() && s[j] == s[i]) ++j;
    const std::size_t run = j - i;
    if (run >= 3 && is_lower_alpha(s[i])) {
      out.push_back(s[i]);
    } else {
      out.append(s.substr(i, run));
    }
    i = j;
  }
  return out;
}

std::string remove_digit_words(std::string_view s) {
  std::vector<std::string> kept;
  for (auto& word : split_ws(s)) {
    if (!std::all_of(word.begin(), word.end(), is_digit)) kept.push_back(std::move(word));
  }
  return join(kept);
}

std::string remove_stopwords(std::string_view s, const StopwordList& stopwords) {
  std::vector<std::string> kept;
  for (auto& word : split_ws(s)) {
    if (!stopwords.contains(word)) kept.push_back(std::move(word));
  }
  return join(kept);
}

}  // namespace

std::string clean_text(std::string_view raw, const StopwordList& stopwords) {
  std::string s = lowercase(raw);
  s = remove_urls(s);
  s = remove_usernames(s);
  s = remove_punctuation(s);
  s = collapse_letter_runs(s);
  s = remove_digit_words(s);
  s = remove_stopwords(s, stopwords);
  return join(split_ws(s));
}

TokenList tokenize(std::string_view cleaned) {
  TokenList tokens;
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() && !is_word_char(cleaned[i])) ++i;
    const std::size_t start = i;
    while (i < cleaned.size() && is_word_char(cleaned[i])) ++i;
    if (i > start) tokens.push_back(lowercase(cleaned.substr(start, i - start)));
  }
  return tokens;
}

TokenList preprocess(std::string_view raw, const StopwordList& stopwords) {
  TokenList out;
  for (const auto& token : tokenize(clean_text(raw, stopwords))) {
    std::string normalized = stem_token(lemmatize_token(token));
    if (!normalized.empty() && !stopwords.contains(normalized)) out.push_back(std::move(normalized));
  }
  return out;
}

}  // namespace tweetsignal
