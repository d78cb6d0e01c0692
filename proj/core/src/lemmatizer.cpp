#include <string>
#include <unordered_map>

#include "tweetsignal/textprep.hpp"

namespace tweetsignal {

namespace {

const std::unordered_map<std::string_view, std::string_view>& exceptions() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      // irregular plurals
      {"children", "child"}, {"men", "man"}, {"women", "woman"}, {"people", "person"},
      {"mice", "mouse"}, {"feet", "foot"}, {"teeth", "tooth"}, {"geese", "goose"},
      {"analyses", "analysis"}, {"crises", "crisis"}, {"theses", "thesis"},
      {"indices", "index"}, {"buses", "bus"}, {"gases", "gas"}, {"leaves", "leaf"},
      {"lives", "life"}, {"wives", "wife"}, {"knives", "knife"}, {"halves", "half"},
      // forms the suffix rules get wrong
      {"used", "use"}, {"using", "use"}, {"does", "do"}, {"caused", "cause"},
      {"raised", "raise"}, {"praised", "praise"}, {"paused", "pause"},
      // words that look inflected but are not
      {"news", "news"}, {"series", "series"}, {"species", "species"}, {"always", "always"},
      {"perhaps", "perhaps"}, {"bias", "bias"}, {"alias", "alias"}, {"atlas", "atlas"},
      {"canvas", "canvas"}, {"whereas", "whereas"}, {"lens", "lens"}, {"thing", "thing"},
      {"something", "something"}, {"nothing", "nothing"}, {"anything", "anything"},
      {"everything", "everything"}, {"morning", "morning"}, {"evening", "evening"},
      {"during", "during"}, {"ceiling", "ceiling"}, {"spring", "spring"},
      {"string", "string"}, {"bring", "bring"}, {"wedding", "wedding"}, {"red", "red"},
      {"need", "need"}, {"feed", "feed"}, {"speed", "speed"}, {"indeed", "indeed"},
      {"hundred", "hundred"}, {"sacred", "sacred"}, {"naked", "naked"},
  };
  return table;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) {
  for (char c : s) {
    if (is_vowel(c) || c == 'y') return true;
  }
  return false;
}

int vowel_groups(std::string_view s) {
  int groups = 0;
  bool prev = false;
  for (char c : s) {
    const bool v = is_vowel(c);
    if (v && !prev) ++groups;
    prev = v;
  }
  return groups;
}

bool is_consonant(char c) { return c >= 'a' && c <= 'z' && !is_vowel(c); }

// Restores the base form after an "-ing"/"-ed" strip: undoubles a final double
// consonant (running -> run) or restores a silent e on one-syllable
// consonant-vowel-consonant stems (making -> make).
std::string repair_stem(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && is_consonant(stem[n - 1])) {
    const char c = stem[n - 1];
    if (c != 'l' && c != 's' && c != 'z') stem.pop_back();
    return stem;
  }
  if (n >= 3 && is_consonant(stem[n - 3]) && is_vowel(stem[n - 2]) && is_consonant(stem[n - 1]) &&
      stem[n - 1] != 'w' && stem[n - 1] != 'x' && stem[n - 1] != 'y' && vowel_groups(stem) == 1) {
    stem.push_back('e');
  }
  return stem;
}

std::string lemmatize_once(std::string_view token) {
  if (auto it = exceptions().find(token); it != exceptions().end()) return std::string(it->second);

  std::string w(token);
  if (w.size() <= 3) return w;
  auto ends = [&](std::string_view suffix) { return w.ends_with(suffix); };
  auto base = [&](std::size_t drop) { return w.substr(0, w.size() - drop); };

  if (w.size() > 4 && ends("ies")) return base(3) + "y";
  if (w.size() > 4 && ends("ied")) return base(3) + "y";
  if (ends("sses")) return base(2);
  if (ends("xes") || ends("ches") || ends("shes") || ends("zzes")) return base(2);
  if (ends("ses")) return base(1);
  if (ends("s") && !ends("ss") && !ends("us") && !ends("is")) return base(1);

  if (ends("ing")) {
    const std::string stem = base(3);
    if (stem.size() >= 2 && has_vowel(stem)) return repair_stem(stem);
    return w;
  }
  if (ends("ed") && !ends("eed")) {
    const std::string stem = base(2);
    if (stem.size() >= 2 && has_vowel(stem)) return repair_stem(stem);
    return w;
  }
  return w;
}

}  // namespace

// Rules are applied until nothing changes (earnings -> earning -> earn), so the
// result is a fixed point. Every suffix rule shortens the word.
std::string lemmatize_token(std::string_view token) {
  std::string w(token);
  for (;;) {
    std::string next = lemmatize_once(w);
    if (next == w) return w;
    w = std::move(next);
  }
}

}  // namespace tweetsignal
