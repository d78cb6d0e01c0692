#include <cctype>
#include <fstream>

#include "tweetsignal/corpus.hpp"
#include "tweetsignal/error.hpp"
#include "tweetsignal/textprep.hpp"

namespace tweetsignal {

namespace {

constexpr const char* kBuiltinStopwords[] = {
    // articles, pronouns, determiners
    "a", "an", "the", "i", "me", "my", "myself", "we", "us", "our", "ours", "ourselves",
    "you", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she",
    "her", "hers", "herself", "it", "its", "itself", "they", "them", "their", "theirs",
    "themselves", "this", "that", "these", "those", "who", "whom", "whose", "which", "what",
    "each", "both", "either", "neither", "some", "such", "own", "same", "other", "another",
    // auxiliaries and stative verbs
    "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having",
    "do", "does", "did", "doing", "will", "would", "shall", "should", "can", "could", "may",
    "might", "must", "seem", "seems", "seemed", "know", "knows", "knew", "known", "belong",
    "belongs", "contain", "contains", "consist", "consists", "mean", "means", "exist",
    "exists", "owns", "become", "becomes", "get", "gets", "got",
    // prepositions and conjunctions
    "and", "or", "but", "if", "then", "so", "as", "of", "at", "by", "for", "with", "about",
    "into", "through", "during", "before", "after", "to", "from", "in", "on", "onto", "than",
    "because", "while", "until", "upon", "via", "per",
    // adverbs
    "here", "there", "when", "where", "why", "how", "again", "once", "just", "also", "too",
    "now", "ever", "even", "still", "yet",
    // contractions after punctuation removal, tweet artifacts
    "im", "ive", "youre", "theyre", "weve", "thats", "rt", "amp",
};

}  // namespace

StopwordList::StopwordList(const std::set<std::string, std::less<>>& words) {
  for (const auto& w : words) {
    if (w.empty() || w.find_first_of(" \t\r\n\f\v") != std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "invalid stopword '" + w + "'");
    }
    words_.insert(to_lower_ascii(w));
  }
}

const StopwordList& StopwordList::builtin() {
  static const StopwordList list = [] {
    std::set<std::string, std::less<>> words;
    for (const char* w : kBuiltinStopwords) words.insert(w);
    return StopwordList(words);
  }();
  return list;
}

StopwordList StopwordList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open stopword file " + path.string());
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string word;
    for (char c : line) {
      const auto uc = static_cast<unsigned char>(c);
      if (std::isspace(uc) || std::ispunct(uc)) continue;
      word.push_back(c);
    }
    if (!word.empty()) words.insert(word);
  }
  return StopwordList(words);
}

}  // namespace tweetsignal
