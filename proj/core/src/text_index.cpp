#include "brandmatch/text_index.hpp"

#include <algorithm>
#include <cmath>

#include "brandmatch/error.hpp"
#include "brandmatch/unicode.hpp"

namespace brandmatch {

std::string_view to_string(TfMode mode) noexcept {
  return mode == TfMode::literal ? "literal" : "standard";
}

TfMode parse_tf_mode(std::string_view text) {
  if (text == "standard") return TfMode::standard;
  if (text == "literal") return TfMode::literal;
  throw Error(Errc::invalid_config, "unknown tf mode '" + std::string(text) + "' (expected standard|literal)");
}

// --- CorpusIndex -------------------------------------------------------------

CorpusIndex CorpusIndex::build(std::span<const Document> docs) {
  if (docs.empty()) throw Error(Errc::empty_corpus, "cannot index an empty document collection");
  std::unordered_map<std::string, std::size_t> df;
  std::vector<std::string_view> distinct;
  for (const auto& doc : docs) {
    if (doc.tokens.empty()) throw Error(Errc::empty_document, "document '" + doc.doc_id + "' has no tokens");
    distinct.assign(doc.tokens.begin(), doc.tokens.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (auto term : distinct) ++df[std::string(term)];
  }
  return CorpusIndex(docs.size(), std::move(df));
}

CorpusIndex CorpusIndex::from_counts(std::size_t m, std::unordered_map<std::string, std::size_t> df) {
  if (m == 0) throw Error(Errc::empty_corpus, "corpus index must cover at least one document");
  for (const auto& [term, count] : df) {
    if (count == 0 || count > m) {
      throw Error(Errc::schema_error, "document frequency of '" + term + "' is " + std::to_string(count) +
                                          ", outside [1, " + std::to_string(m) + "]");
    }
  }
  return CorpusIndex(m, std::move(df));
}

std::size_t CorpusIndex::df(std::string_view term) const {
  // Heterogeneous lookup on unordered_map needs C++20 library support that
  // libstdc++ 11 lacks.
  auto it = df_.find(std::string(term));
  return it == df_.end() ? 0 : it->second;
}

std::vector<std::string> CorpusIndex::vocabulary() const {
  std::vector<std::string> out;
  out.reserve(df_.size());
  for (const auto& [term, count] : df_) out.push_back(term);
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json CorpusIndex::to_json() const {
  nlohmann::json df = nlohmann::json::object();
  for (const auto& term : vocabulary()) df[term] = df_.at(term);
  return {{"m", m_}, {"df", std::move(df)}};
}

CorpusIndex CorpusIndex::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("df") || !j["m"].is_number_unsigned() || !j["df"].is_object()) {
    throw Error(Errc::schema_error, "corpus index must be an object {m: unsigned, df: object}");
  }
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& [term, count] : j["df"].items()) {
    if (!count.is_number_unsigned()) throw Error(Errc::schema_error, "df['" + term + "'] is not a non-negative integer");
    df.emplace(term, count.get<std::size_t>());
  }
  return from_counts(j["m"].get<std::size_t>(), std::move(df));
}

// --- WeightedVector ----------------------------------------------------------

WeightedVector::WeightedVector(std::vector<Entry> entries) {
  std::erase_if(entries, [](const Entry& e) { return e.second == 0.0; });
  for (const auto& [term, w] : entries) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(Errc::invalid_argument, "weight for '" + term + "' must be finite and non-negative");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  auto dup = std::adjacent_find(entries.begin(), entries.end(),
                                [](const Entry& a, const Entry& b) { return a.first == b.first; });
  if (dup != entries.end()) throw Error(Errc::invalid_argument, "duplicate term '" + dup->first + "' in vector");
  entries_ = std::move(entries);
}

double WeightedVector::weight(std::string_view term) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                             [](const Entry& e, std::string_view t) { return e.first < t; });
  return (it != entries_.end() && it->first == term) ? it->second : 0.0;
}

double WeightedVector::norm() const {
  double sum = 0.0;
  for (const auto& [term, w] : entries_) sum += w * w;
  return std::sqrt(sum);
}

WeightedVector WeightedVector::scaled(double factor) const {
  std::vector<Entry> out = entries_;
  for (auto& e : out) e.second *= factor;
  return WeightedVector(std::move(out));
}

// --- weighting ---------------------------------------------------------------

double tf(std::string_view term, const Document& doc, TfMode mode) {
  if (doc.tokens.empty()) throw Error(Errc::empty_document, "tf on empty document '" + doc.doc_id + "'");
  const auto count = static_cast<std::size_t>(std::count(doc.tokens.begin(), doc.tokens.end(), term));
  const auto length = static_cast<double>(doc.tokens.size());
  if (count == 0) return 0.0;
  if (mode == TfMode::literal) return static_cast<double>(unicode::code_points(term)) / length;
  return static_cast<double>(count) / length;
}

double idf(std::string_view term, const CorpusIndex& corpus, const Weighting& weighting) {
  const std::size_t h = std::max<std::size_t>(corpus.df(term), 1);
  const double ratio = static_cast<double>(corpus.document_count()) / static_cast<double>(h);
  if (weighting.log_base == std::numbers::e) return std::log(ratio);
  return std::log(ratio) / std::log(weighting.log_base);
}

WeightedVector tfidf_vector(const Document& doc, const CorpusIndex& corpus, const Weighting& weighting) {
  if (doc.tokens.empty()) throw Error(Errc::empty_document, "cannot vectorize empty document '" + doc.doc_id + "'");
  std::vector<std::string_view> sorted(doc.tokens.begin(), doc.tokens.end());
  std::sort(sorted.begin(), sorted.end());
  const auto length = static_cast<double>(sorted.size());

  std::vector<WeightedVector::Entry> entries;
  for (auto it = sorted.begin(); it != sorted.end();) {
    auto next = std::find_if(it, sorted.end(), [&](std::string_view t) { return t != *it; });
    const auto count = static_cast<double>(next - it);
    const double term_frequency = weighting.tf_mode == TfMode::literal
                                      ? static_cast<double>(unicode::code_points(*it)) / length
                                      : count / length;
    const double weight = term_frequency * idf(*it, corpus, weighting);
    if (weight != 0.0) entries.emplace_back(std::string(*it), weight);
    it = next;
  }
  return WeightedVector(std::move(entries));
}

double cosine(const WeightedVector& a, const WeightedVector& b) {
  double dot = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  double na = 0.0;
  for (const auto& e : a) na += e.second * e.second;
  double nb = 0.0;
  for (const auto& e : b) nb += e.second * e.second;
  if (na == 0.0 || nb == 0.0) return 0.0;
  // sqrt(x * x) == x exactly, so cosine(v, v) is exactly 1.
  return std::min(1.0, dot / std::sqrt(na * nb));
}

}  // namespace brandmatch
