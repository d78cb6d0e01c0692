#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <set>

#include "temp_dir.hpp"
#include "tweetsignal/rng.hpp"
#include "tweetsignal/synthetic.hpp"
#include "tweetsignal/textprep.hpp"

using namespace tweetsignal;

namespace {

StopwordList only(std::initializer_list<const char*> words) {
  std::set<std::string, std::less<>> s;
  for (auto w : words) s.insert(w);
  return StopwordList(s);
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(CleanText, CollapsesLongRuns) {
  EXPECT_EQ(clean_text("hiiii", only({})), "hi");
  EXPECT_EQ(clean_text("soooo goood", only({})), "so god");
  EXPECT_EQ(clean_text("book", only({})), "book");
  EXPECT_EQ(clean_text("", only({})), "");
}

TEST(CleanText, AppliesStepsInOrder) {
  const std::string raw = "Check https://t.co/x @bob AAPL!!! 123 the rocket";
  EXPECT_EQ(clean_text(raw, only({"the"})), "check aapl rocket");
  EXPECT_EQ(clean_text(raw, only({"the", "check"})), "aapl rocket");
  EXPECT_EQ(clean_text("see www.example.com/x now", only({})), "see now");
  EXPECT_EQ(clean_text("$TSLA #moon it's 2day", only({})), "tsla moon its 2day");
  EXPECT_EQ(clean_text("caf\xC3\xA9 \xF0\x9F\x9A\x80 up", only({})), "caf up");
}

TEST(CleanText, Idempotent) {
  Rng rng(3);
  const std::string alphabet = "aAbBoO  1@#$!.,:/hwtpsx\t\xC3\xA9";
  for (int i = 0; i < 500; ++i) {
    std::string s;
    const auto len = rng.below(40);
    for (std::size_t k = 0; k < len; ++k) s += alphabet[rng.below(alphabet.size())];
    if (rng.below(4) == 0) s += " http://x.y/z";
    const auto once = clean_text(s, StopwordList::builtin());
    EXPECT_EQ(clean_text(once, StopwordList::builtin()), once) << s;
  }
}

TEST(Tokenize, WordCharacterRuns) {
  EXPECT_EQ(tokenize("aapl rocket"), (TokenList{"aapl", "rocket"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("a-b c"), (TokenList{"a", "b", "c"}));
  EXPECT_EQ(tokenize("snake_case X9"), (TokenList{"snake_case", "x9"}));

  Rng rng(5);
  const std::regex word(R"(\w+)");
  const std::string alphabet = "ab_9 -.,Z";
  for (int i = 0; i < 300; ++i) {
    std::string s;
    for (std::size_t k = rng.below(20); k > 0; --k) s += alphabet[rng.below(alphabet.size())];
    TokenList expected;
    for (std::sregex_iterator it(s.begin(), s.end(), word), end; it != end; ++it) {
      std::string t = it->str();
      for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      expected.push_back(t);
    }
    EXPECT_EQ(tokenize(s), expected) << s;
  }
}

TEST(PorterStemmer, Examples) {
  EXPECT_EQ(stem_token("caresses"), "caress");
  EXPECT_EQ(stem_token("ponies"), "poni");
  EXPECT_EQ(stem_token("a"), "a");
  EXPECT_EQ(stem_token("is"), "is");
  EXPECT_EQ(stem_token("relational"), "relat");
  EXPECT_EQ(stem_token("paying"), "pai");
  // Standard Porter leaves this one alone (measure condition on -ment).
  EXPECT_EQ(stem_token("payment"), "payment");
}

TEST(PorterStemmer, ReferenceVocabulary) {
  const auto voc = read_lines(tstest::data_path("porter_voc.txt"));
  const auto expected = read_lines(tstest::data_path("porter_output.txt"));
  ASSERT_EQ(voc.size(), expected.size());
  ASSERT_GE(voc.size(), 1000u);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < voc.size(); ++i) {
    if (stem_token(voc[i]) != expected[i]) {
      if (++mismatches <= 10) ADD_FAILURE() << voc[i] << " -> " << stem_token(voc[i]) << ", want " << expected[i];
    }
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Lemmatizer, Rules) {
  EXPECT_EQ(lemmatize_token("cars"), "car");
  EXPECT_EQ(lemmatize_token("pay"), "pay");
  EXPECT_EQ(lemmatize_token("running"), "run");
  EXPECT_EQ(lemmatize_token("companies"), "company");
  EXPECT_EQ(lemmatize_token("boxes"), "box");
  EXPECT_EQ(lemmatize_token("glass"), "glass");
  EXPECT_EQ(lemmatize_token("children"), "child");
  EXPECT_EQ(lemmatize_token("news"), "news");
  EXPECT_EQ(lemmatize_token("traded"), "trade");
  EXPECT_EQ(lemmatize_token("bus"), "bus");
}

TEST(Normalization, IdempotentOnFixtureVocabulary) {
  synthetic::Options o;
  o.training_size = 400;
  o.days = 5;
  const auto f = synthetic::generate(o);
  std::set<std::string> words;
  for (const auto& t : f.training) {
    for (auto& w : tokenize(t.record.full_text)) words.insert(w);
  }
  ASSERT_GT(words.size(), 50u);
  // Standard Porter is not idempotent in general: collapse -> collaps -> collap.
  // Reference conformance takes precedence, so such words are listed here.
  const std::set<std::string> porter_not_fixed{"collapse"};
  for (const auto& w : words) {
    const auto s = stem_token(w);
    if (porter_not_fixed.contains(w)) {
      EXPECT_NE(stem_token(s), s) << w;
    } else {
      EXPECT_EQ(stem_token(s), s) << w;
    }
    const auto l = lemmatize_token(w);
    EXPECT_EQ(lemmatize_token(l), l) << w;
  }
}

TEST(Preprocess, Examples) {
  EXPECT_EQ(preprocess("hiiii", StopwordList::builtin()), (TokenList{"hi"}));
  EXPECT_TRUE(preprocess("", StopwordList::builtin()).empty());
  EXPECT_EQ(preprocess("Stocks are RALLYING!!! https://t.co/abc", StopwordList::builtin()),
            (TokenList{"stock", "ralli"}));
}

TEST(Preprocess, ComposesTheSteps) {
  Rng rng(9);
  const std::vector<std::string> words{"running", "the",   "Cars",  "happily", "aaaaah", "@user", "123",
                                       "stocks",  "ponies", "is",   "thes",    "http://t.co/q", "wasn't", "$AAPL"};
  const auto& stop = StopwordList::builtin();
  for (int i = 0; i < 100; ++i) {
    std::string raw;
    for (std::size_t k = 1 + rng.below(8); k > 0; --k) raw += words[rng.below(words.size())] + " ";
    TokenList expected;
    for (const auto& t : tokenize(clean_text(raw, stop))) {
      auto n = stem_token(lemmatize_token(t));
      if (!stop.contains(n)) expected.push_back(std::move(n));
    }
    const auto got = preprocess(raw, stop);
    EXPECT_EQ(got, expected) << raw;
    for (const auto& t : got) {
      EXPECT_FALSE(stop.contains(t));
      EXPECT_FALSE(std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }));
      EXPECT_TRUE(std::none_of(t.begin(), t.end(), [](unsigned char c) { return std::isupper(c); }));
    }
  }
}

TEST(StopwordList, FileWithComments) {
  tstest::TempDir dir;
  tstest::write_file(dir / "stop.txt", "# comment\nThe\n  and \n\nit's\n");
  const auto s = StopwordList::from_file(dir / "stop.txt");
  EXPECT_TRUE(s.contains("the"));
  EXPECT_TRUE(s.contains("and"));
  EXPECT_TRUE(s.contains("its"));
  EXPECT_EQ(s.size(), 3u);
  EXPECT_FALSE(StopwordList::builtin().contains("up"));
  EXPECT_FALSE(StopwordList::builtin().contains("not"));
}
