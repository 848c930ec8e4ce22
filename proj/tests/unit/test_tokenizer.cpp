#include <gtest/gtest.h>

#include "brandmatch/tokenizer.hpp"
#include "brandmatch/unicode.hpp"

using namespace brandmatch;
using Tokens = std::vector<std::string>;

TEST(Tokenize, SplitsCaseFoldsAndKeepsRepeats) {
  EXPECT_EQ(tokenize("Ciao, ciao mondo!", TokenizerConfig::defaults()), (Tokens{"ciao", "ciao", "mondo"}));
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("", TokenizerConfig::defaults()).empty()); }

TEST(Tokenize, AllBelowMinimumLength) {
  TokenizerConfig cfg;  // no stopwords
  cfg.min_length = 2;
  EXPECT_TRUE(tokenize("a b", cfg).empty());
}

TEST(Tokenize, DropsDigitAndPunctuationOnlyPieces) {
  TokenizerConfig cfg;
  EXPECT_EQ(tokenize("2024 !!! -- ... abc123 4x4", cfg), (Tokens{"abc123", "4x4"}));
}

TEST(Tokenize, RemovesStopwordsAfterFolding) {
  const auto cfg = TokenizerConfig::defaults();
  EXPECT_EQ(tokenize("The BORSA è di Pelle", cfg), (Tokens{"borsa", "pelle"}));
}

TEST(Tokenize, SplitsElisionsAndHyphens) {
  TokenizerConfig cfg;
  cfg.min_length = 1;
  EXPECT_EQ(tokenize("L'amore e-commerce", cfg), (Tokens{"l", "amore", "e", "commerce"}));
}

TEST(Tokenize, UnicodeFoldingAndNormalization) {
  TokenizerConfig cfg;
  // Decomposed "e" + combining acute becomes the composed form; sharp s folds to "ss".
  EXPECT_EQ(tokenize("Perch\x65\xCC\x81 STRASSE Straße", cfg), (Tokens{"perch\xC3\xA9", "strasse", "strasse"}));
}

TEST(Tokenize, MinLengthCountsCodePoints) {
  TokenizerConfig cfg;
  cfg.min_length = 2;
  EXPECT_EQ(tokenize("\xC3\xA8 \xC3\xA8\xC3\xA8", cfg), (Tokens{"\xC3\xA8\xC3\xA8"}));
}

TEST(Tokenize, StemmerHookApplied) {
  TokenizerConfig cfg;
  cfg.stemmer = [](std::string_view t) { return std::string(t.substr(0, 4)); };
  EXPECT_EQ(tokenize("borsette borse", cfg), (Tokens{"bors", "bors"}));
}

TEST(Tokenize, InvalidUtf8DoesNotThrow) {
  TokenizerConfig cfg;
  EXPECT_NO_THROW(tokenize("ab\xFF\xFE cd", cfg));
}

TEST(Stopwords, ParseSkipsCommentsAndBlankLines) {
  const auto s = parse_stopwords("# header\n\nThe\n  Di \n");
  EXPECT_EQ(s, (StopwordSet{"the", "di"}));
}

TEST(Stopwords, DefaultsCoverBothLanguages) {
  const auto s = default_stopwords();
  EXPECT_TRUE(s.contains("the"));
  EXPECT_TRUE(s.contains("di"));
  EXPECT_TRUE(s.contains("\xC3\xA8"));  // è
  EXPECT_FALSE(s.contains("borsa"));
}

TEST(Stopwords, MissingFileIsIoError) {
  EXPECT_THROW(load_stopwords("/nonexistent/stopwords.txt"), std::runtime_error);
}

TEST(RawTokens, NoFiltering) {
  EXPECT_EQ(raw_tokens("a !"), (Tokens{"a"}));
  EXPECT_EQ(raw_tokens("The a"), (Tokens{"the", "a"}));
}

TEST(Unicode, Helpers) {
  EXPECT_EQ(unicode::trim("  \t x y \n"), "x y");
  EXPECT_EQ(unicode::collapse_whitespace("  a \t\n b  "), "a b");
  EXPECT_EQ(unicode::code_points("\xC3\xA8x"), 2u);
  EXPECT_EQ(unicode::fold_case("ÀB"), "àb");
}
