#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandmatch/profile.hpp"
#include "brandmatch/text_index.hpp"

namespace brandmatch {

enum class SimilarityKind { tfidf_cosine, exact, numeric_band, token_jaccard };

std::string_view to_string(SimilarityKind kind) noexcept;
SimilarityKind parse_similarity_kind(std::string_view text);

/// Similarity function, threshold and (numeric_band only) band width for one
/// top-level category.
struct CategoryRule {
  SimilarityKind kind = SimilarityKind::exact;
  double threshold = 0.0;
  double band = 10.0;

  friend bool operator==(const CategoryRule&, const CategoryRule&) = default;
};

/// Per-category similarity functions and thresholds. Keys are top-level
/// category paths; categories without an entry are not scored.
class SimilaritySpec {
 public:
  SimilaritySpec() = default;

  /// gender: exact, age: numeric_band (A = 10 years), education and job:
  /// token_jaccard, posts: tfidf_cosine; all thresholds 0.
  static SimilaritySpec defaults();
  /// posts: tfidf_cosine only.
  static SimilaritySpec posts_only();

  /// Throws Error(invalid_config) for nested paths, thresholds outside [0,1]
  /// or non-positive band widths.
  void set(const CategoryPath& category, CategoryRule rule);
  const CategoryRule* find(const CategoryPath& category) const;
  bool uses(SimilarityKind kind) const;

  const std::map<CategoryPath, CategoryRule>& rules() const noexcept { return rules_; }

  /// {"posts": {"kind": "tfidf_cosine", "threshold": 0}, ...}
  nlohmann::json to_json() const;
  static SimilaritySpec from_json(const nlohmann::json& j);

  friend bool operator==(const SimilaritySpec&, const SimilaritySpec&) = default;

 private:
  std::map<CategoryPath, CategoryRule> rules_;
};

/// Inputs needed by the text similarity kinds. `corpus` is required for
/// tfidf_cosine and must outlive the context.
struct MatchContext {
  const CorpusIndex* corpus = nullptr;
  Weighting weighting;
};

/// Value of S_i(l_u, l_w) in [0, 1]. Throws Error(kind_mismatch) when the
/// leaf value types do not fit `rule.kind`, Error(missing_context) for
/// tfidf_cosine without a corpus.
double leaf_similarity(const CategoryRule& rule, const InstanceLeaf& a, const InstanceLeaf& b, const MatchContext& ctx);

struct CategoryScore {
  double mu = 0.0;                // mean similarity over matching pairs; 0 if none match
  std::size_t matched_pairs = 0;  // pairs with similarity >= threshold
  std::size_t total_pairs = 0;    // all compared pairs

  friend bool operator==(const CategoryScore&, const CategoryScore&) = default;
};

/// Compares the sub-trees of `category` in both profiles: leaves are paired
/// (Cartesian product) only at identical sub-category paths, recursing into
/// sub-categories present on both sides.
CategoryScore category_match(const ProfileTree& a, const ProfileTree& b, const CategoryPath& category,
                             const CategoryRule& rule, const MatchContext& ctx);

struct MatchResult {
  double overall = 0.0;
  std::map<CategoryPath, CategoryScore> per_category;
  std::size_t k_prime = 0;
  bool no_common_categories = false;
  /// Common categories without a similarity rule, excluded from k'.
  std::vector<CategoryPath> skipped;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Mean of category scores over the k' common categories that have a rule.
MatchResult profile_match(const ProfileTree& a, const ProfileTree& b, const SimilaritySpec& spec,
                          const MatchContext& ctx);

}  // namespace brandmatch
