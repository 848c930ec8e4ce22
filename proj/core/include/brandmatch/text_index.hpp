#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace brandmatch {

/// A bag-of-words document: normalized terms in their original order.
struct Document {
  std::string doc_id;
  std::vector<std::string> tokens;
};

enum class TfMode {
  standard,  ///< count(t, D) / |D|
  literal,   ///< code-point length of t / |D| for terms present in D
};

std::string_view to_string(TfMode mode) noexcept;
TfMode parse_tf_mode(std::string_view text);

/// Term weighting knobs. `log_base` only rescales every IDF uniformly and
/// therefore never changes a cosine; it is exposed for invariance testing and
/// is not a user-facing option.
struct Weighting {
  TfMode tf_mode = TfMode::standard;
  double log_base = std::numbers::e;
};

/// Document frequencies over a fixed document collection. Immutable once
/// built; safe for concurrent readers.
class CorpusIndex {
 public:
  /// Throws Error(empty_corpus) for an empty collection and
  /// Error(empty_document) if any document has no tokens.
  static CorpusIndex build(std::span<const Document> docs);

  /// Reconstructs a persisted index, validating 1 <= df <= m.
  static CorpusIndex from_counts(std::size_t m, std::unordered_map<std::string, std::size_t> df);

  std::size_t document_count() const noexcept { return m_; }
  std::size_t vocabulary_size() const noexcept { return df_.size(); }

  /// Number of documents containing `term`; 0 if unseen.
  std::size_t df(std::string_view term) const;
  bool contains(std::string_view term) const { return df(term) != 0; }

  /// Vocabulary in ascending byte order.
  std::vector<std::string> vocabulary() const;

  /// {"m": ..., "df": {term: count, ...}} with terms sorted.
  nlohmann::json to_json() const;
  static CorpusIndex from_json(const nlohmann::json& j);

  friend bool operator==(const CorpusIndex&, const CorpusIndex&) = default;

 private:
  CorpusIndex(std::size_t m, std::unordered_map<std::string, std::size_t> df) : m_(m), df_(std::move(df)) {}

  std::size_t m_ = 0;
  std::unordered_map<std::string, std::size_t> df_;
};

/// Sparse non-negative term weights, stored sorted by term. Explicit zeros
/// are dropped on construction; negative or non-finite weights are rejected.
class WeightedVector {
 public:
  using Entry = std::pair<std::string, double>;

  WeightedVector() = default;
  explicit WeightedVector(std::vector<Entry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }
  std::span<const Entry> entries() const noexcept { return entries_; }

  /// Weight of `term`, 0 when absent.
  double weight(std::string_view term) const;
  double norm() const;
  WeightedVector scaled(double factor) const;

  friend bool operator==(const WeightedVector&, const WeightedVector&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Relative term frequency. Throws Error(empty_document) when |doc| = 0.
double tf(std::string_view term, const Document& doc, TfMode mode = TfMode::standard);

/// log(m / df) in the configured base, with unseen terms treated as df = 1.
double idf(std::string_view term, const CorpusIndex& corpus, const Weighting& weighting = {});

/// tf * idf for every distinct term of `doc`; zero weights omitted.
WeightedVector tfidf_vector(const Document& doc, const CorpusIndex& corpus, const Weighting& weighting = {});

/// Cosine of the angle between two sparse vectors; 0 if either has zero norm.
double cosine(const WeightedVector& a, const WeightedVector& b);

}  // namespace brandmatch
