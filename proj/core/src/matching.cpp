#include "brandmatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "brandmatch/error.hpp"
#include "brandmatch/unicode.hpp"

namespace brandmatch {

std::string_view to_string(SimilarityKind kind) noexcept {
  switch (kind) {
    case SimilarityKind::tfidf_cosine: return "tfidf_cosine";
    case SimilarityKind::exact: return "exact";
    case SimilarityKind::numeric_band: return "numeric_band";
    case SimilarityKind::token_jaccard: return "token_jaccard";
  }
  return "exact";
}

SimilarityKind parse_similarity_kind(std::string_view text) {
  if (text == "tfidf_cosine") return SimilarityKind::tfidf_cosine;
  if (text == "exact") return SimilarityKind::exact;
  if (text == "numeric_band") return SimilarityKind::numeric_band;
  if (text == "token_jaccard") return SimilarityKind::token_jaccard;
  throw Error(Errc::invalid_config, "unknown similarity kind '" + std::string(text) + "'");
}

// --- SimilaritySpec ----------------------------------------------------------

SimilaritySpec SimilaritySpec::defaults() {
  SimilaritySpec spec;
  spec.set(CategoryPath::parse("gender"), {SimilarityKind::exact, 0.0, 10.0});
  spec.set(CategoryPath::parse("age"), {SimilarityKind::numeric_band, 0.0, 10.0});
  spec.set(CategoryPath::parse("education"), {SimilarityKind::token_jaccard, 0.0, 10.0});
  spec.set(CategoryPath::parse("job"), {SimilarityKind::token_jaccard, 0.0, 10.0});
  spec.set(CategoryPath::parse("posts"), {SimilarityKind::tfidf_cosine, 0.0, 10.0});
  return spec;
}

SimilaritySpec SimilaritySpec::posts_only() {
  SimilaritySpec spec;
  spec.set(CategoryPath::parse("posts"), {SimilarityKind::tfidf_cosine, 0.0, 10.0});
  return spec;
}

void SimilaritySpec::set(const CategoryPath& category, CategoryRule rule) {
  if (category.depth() != 1) {
    throw Error(Errc::invalid_config, "similarity rules apply to top-level categories, got '" + category.to_string() + "'");
  }
  if (!(rule.threshold >= 0.0 && rule.threshold <= 1.0)) {
    throw Error(Errc::invalid_config, "threshold for '" + category.to_string() + "' must lie in [0, 1]");
  }
  if (!(rule.band > 0.0) || !std::isfinite(rule.band)) {
    throw Error(Errc::invalid_config, "band width for '" + category.to_string() + "' must be positive");
  }
  rules_[category] = rule;
}

const CategoryRule* SimilaritySpec::find(const CategoryPath& category) const {
  auto it = rules_.find(category);
  return it == rules_.end() ? nullptr : &it->second;
}

bool SimilaritySpec::uses(SimilarityKind kind) const {
  return std::any_of(rules_.begin(), rules_.end(), [&](const auto& kv) { return kv.second.kind == kind; });
}

nlohmann::json SimilaritySpec::to_json() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [path, rule] : rules_) {
    nlohmann::json r = {{"kind", to_string(rule.kind)}, {"threshold", rule.threshold}};
    if (rule.kind == SimilarityKind::numeric_band) r["band"] = rule.band;
    out[path.to_string()] = std::move(r);
  }
  return out;
}

SimilaritySpec SimilaritySpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::invalid_config, "categories must be an object {path: rule}");
  SimilaritySpec spec;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_object() || !value.contains("kind") || !value["kind"].is_string()) {
      throw Error(Errc::invalid_config, "rule for '" + key + "' needs a string 'kind'");
    }
    CategoryRule rule;
    rule.kind = parse_similarity_kind(value["kind"].get<std::string>());
    if (value.contains("threshold")) {
      if (!value["threshold"].is_number()) throw Error(Errc::invalid_config, "threshold for '" + key + "' must be a number");
      rule.threshold = value["threshold"].get<double>();
    }
    if (value.contains("band")) {
      if (!value["band"].is_number()) throw Error(Errc::invalid_config, "band for '" + key + "' must be a number");
      rule.band = value["band"].get<double>();
    }
    CategoryPath path = CategoryPath::parse(key);
    if (spec.find(path) != nullptr) throw Error(Errc::invalid_config, "duplicate rule for '" + path.to_string() + "'");
    spec.set(path, rule);
  }
  return spec;
}

// --- leaf similarity ---------------------------------------------------------

namespace {

[[noreturn]] void mismatch(const CategoryRule& rule, const InstanceLeaf& a, const InstanceLeaf& b) {
  throw Error(Errc::kind_mismatch, std::string(to_string(rule.kind)) + " cannot compare " +
                                       std::string(value_type_name(a.value)) + " with " +
                                       std::string(value_type_name(b.value)));
}

std::vector<std::string> token_set(const InstanceValue& v) {
  std::vector<std::string> out;
  if (const auto* doc = std::get_if<TextDocument>(&v)) {
    out = doc->tokens;
  } else if (const auto* tok = std::get_if<CategoricalToken>(&v)) {
    out.push_back(tok->value);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double jaccard(const InstanceLeaf& a, const InstanceLeaf& b) {
  auto sa = token_set(a.value);
  auto sb = token_set(b.value);
  if (sa.empty() && sb.empty()) return 0.0;
  std::vector<std::string> inter;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
  const std::size_t uni = sa.size() + sb.size() - inter.size();
  return static_cast<double>(inter.size()) / static_cast<double>(uni);
}

}  // namespace

double leaf_similarity(const CategoryRule& rule, const InstanceLeaf& a, const InstanceLeaf& b, const MatchContext& ctx) {
  switch (rule.kind) {
    case SimilarityKind::tfidf_cosine: {
      const auto* da = std::get_if<TextDocument>(&a.value);
      const auto* db = std::get_if<TextDocument>(&b.value);
      if (da == nullptr || db == nullptr) mismatch(rule, a, b);
      if (ctx.corpus == nullptr) throw Error(Errc::missing_context, "tfidf_cosine needs a corpus index");
      if (da->tokens.empty() || db->tokens.empty()) return 0.0;
      return cosine(tfidf_vector(Document{"", da->tokens}, *ctx.corpus, ctx.weighting),
                    tfidf_vector(Document{"", db->tokens}, *ctx.corpus, ctx.weighting));
    }
    case SimilarityKind::exact: {
      if (a.value.index() != b.value.index()) mismatch(rule, a, b);
      if (const auto* da = std::get_if<TextDocument>(&a.value)) {
        return unicode::fold_case(da->text) == unicode::fold_case(std::get<TextDocument>(b.value).text) ? 1.0 : 0.0;
      }
      return a.value == b.value ? 1.0 : 0.0;
    }
    case SimilarityKind::numeric_band: {
      const auto* na = std::get_if<NumericValue>(&a.value);
      const auto* nb = std::get_if<NumericValue>(&b.value);
      if (na == nullptr || nb == nullptr || na->unit != nb->unit) mismatch(rule, a, b);
      return std::max(0.0, 1.0 - std::abs(na->value - nb->value) / rule.band);
    }
    case SimilarityKind::token_jaccard: {
      if (std::holds_alternative<NumericValue>(a.value) || std::holds_alternative<NumericValue>(b.value)) {
        mismatch(rule, a, b);
      }
      return jaccard(a, b);
    }
  }
  return 0.0;
}

// --- category / profile match ------------------------------------------------

namespace {

void compare_nodes(const CategoryNode& a, const CategoryNode& b, const CategoryRule& rule, const MatchContext& ctx,
                   std::vector<double>& kept, std::size_t& total) {
  for (const auto& la : a.leaves) {
    for (const auto& lb : b.leaves) {
      ++total;
      const double s = leaf_similarity(rule, la, lb, ctx);
      if (s >= rule.threshold) kept.push_back(s);
    }
  }
  for (const auto& child : a.children) {
    if (const CategoryNode* other = b.find_child(child.name)) compare_nodes(child, *other, rule, ctx, kept, total);
  }
}

}  // namespace

CategoryScore category_match(const ProfileTree& a, const ProfileTree& b, const CategoryPath& category,
                             const CategoryRule& rule, const MatchContext& ctx) {
  CategoryScore score;
  const CategoryNode* na = a.find(category);
  const CategoryNode* nb = b.find(category);
  if (na == nullptr || nb == nullptr) return score;
  std::vector<double> kept;
  compare_nodes(*na, *nb, rule, ctx, kept, score.total_pairs);
  score.matched_pairs = kept.size();
  if (!kept.empty()) {
    // Summing in sorted order makes the mean independent of which profile
    // drives the enumeration.
    std::sort(kept.begin(), kept.end());
    score.mu = std::accumulate(kept.begin(), kept.end(), 0.0) / static_cast<double>(kept.size());
  }
  return score;
}

MatchResult profile_match(const ProfileTree& a, const ProfileTree& b, const SimilaritySpec& spec,
                          const MatchContext& ctx) {
  MatchResult result;
  double sum = 0.0;
  for (const auto& category : common_categories(a, b)) {
    const CategoryRule* rule = spec.find(category);
    if (rule == nullptr) {
      result.skipped.push_back(category);
      continue;
    }
    CategoryScore score = category_match(a, b, category, *rule, ctx);
    sum += score.mu;
    result.per_category.emplace(category, score);
  }
  result.k_prime = result.per_category.size();
  result.no_common_categories = result.k_prime == 0;
  result.overall = result.k_prime == 0 ? 0.0 : sum / static_cast<double>(result.k_prime);
  return result;
}

}  // namespace brandmatch
