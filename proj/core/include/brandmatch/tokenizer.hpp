#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace brandmatch {

using StopwordSet = std::unordered_set<std::string>;

/// Optional stemming hook applied to each surviving token. Off by default.
using Stemmer = std::function<std::string(std::string_view)>;

struct TokenizerConfig {
  StopwordSet stopwords;
  std::size_t min_length = 2;  // in code points
  Stemmer stemmer;

  /// Bundled Italian + English stopword lists, minimum length 2.
  static TokenizerConfig defaults();
};

/// Parses a stopword list: one term per line, UTF-8, blank lines and lines
/// starting with '#' ignored. Each entry is case folded and split the same
/// way document text is, so "don't" contributes "don" and "t".
StopwordSet parse_stopwords(std::string_view text);
StopwordSet load_stopwords(const std::filesystem::path& path);
StopwordSet default_stopwords();

/// Case-folded Unicode word split with punctuation and digit-only pieces
/// removed. No stopword or length filtering; used for duplicate detection.
std::vector<std::string> raw_tokens(std::string_view text);

/// raw_tokens followed by stopword removal, minimum-length filtering and the
/// optional stemmer. Stopwords are matched after case folding.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg);

}  // namespace brandmatch
