#include "brandmatch/tokenizer.hpp"

#include <fstream>
#include <sstream>

#include "brandmatch/error.hpp"
#include "brandmatch/resources.hpp"
#include "brandmatch/unicode.hpp"

namespace brandmatch {

TokenizerConfig TokenizerConfig::defaults() {
  TokenizerConfig cfg;
  cfg.stopwords = default_stopwords();
  return cfg;
}

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line = unicode::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line.front() == '#') continue;
    for (auto& w : unicode::words(line)) out.insert(std::move(w));
  }
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open stopword file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stopwords(buf.str());
}

StopwordSet default_stopwords() {
  static const StopwordSet bundled = [] {
    StopwordSet set = parse_stopwords(resource("data/stopwords_it.txt"));
    set.merge(parse_stopwords(resource("data/stopwords_en.txt")));
    return set;
  }();
  return bundled;
}

std::vector<std::string> raw_tokens(std::string_view text) {
  return unicode::words(text);
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
  std::vector<std::string> out;
  for (auto& w : unicode::words(text)) {
    if (cfg.stopwords.contains(w)) continue;
    if (unicode::code_points(w) < cfg.min_length) continue;
    if (cfg.stemmer) {
      std::string stem = cfg.stemmer(w);
      if (stem.empty()) continue;
      out.push_back(std::move(stem));
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace brandmatch
