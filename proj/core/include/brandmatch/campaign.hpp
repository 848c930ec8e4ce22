#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandmatch/ingestion.hpp"
#include "brandmatch/matching.hpp"
#include "brandmatch/profile.hpp"
#include "brandmatch/text_index.hpp"

namespace brandmatch {

enum class CorpusScope { users, pages, all };

std::string_view to_string(CorpusScope scope) noexcept;  // "users" | "pages" | "union"
CorpusScope parse_corpus_scope(std::string_view text);

struct CampaignConfig {
  std::string brand_id;
  SimilaritySpec categories = SimilaritySpec::defaults();
  double target_fraction = 0.03;
  CorpusScope scope = CorpusScope::all;

  /// Validates against the bundled campaign schema; omitted keys keep their
  /// defaults.
  static CampaignConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct RunOptions {
  std::size_t jobs = 1;
  Weighting weighting;
};

/// Profile trees for every dataset record, built once. Records with nothing
/// to profile are kept as std::nullopt and score zero against everything.
class ProfileCatalog {
 public:
  ProfileCatalog(const Dataset& dataset, const ProfileBuilder& builder, std::size_t jobs = 1);

  std::span<const std::optional<ProfileTree>> users() const noexcept { return users_; }
  std::span<const std::optional<ProfileTree>> pages() const noexcept { return pages_; }

  /// Aggregate post documents of the profiles in scope, in dataset order.
  std::vector<Document> post_documents(CorpusScope scope) const;

 private:
  std::vector<std::string> post_categories_;
  std::vector<std::optional<ProfileTree>> users_;
  std::vector<std::optional<ProfileTree>> pages_;
};

/// Corpus index over the scope's post documents, or std::nullopt when the
/// scope holds none.
std::optional<CorpusIndex> build_corpus(const ProfileCatalog& catalog, CorpusScope scope);

/// ceil(fraction * n) clamped to [1, n]; products within 1e-9 of an integer
/// are not rounded up. Throws Error(invalid_config) for fraction outside (0,1].
std::size_t selection_size(double fraction, std::size_t n);

struct RankedUser {
  std::string owner_id;
  MatchResult match;
  bool selected = false;
};

struct ScoreDistribution {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::array<std::size_t, 10> histogram{};  // [0,0.1), ..., [0.9,1.0]
};

struct TargetReport {
  std::string brand_id;
  nlohmann::json config;
  std::string dataset_digest;
  std::vector<RankedUser> ranked;  // descending mu, ties by ascending owner_id
  std::vector<std::string> selected;
  std::map<std::string, ScoreDistribution> distributions;

  nlohmann::json to_json() const;
};

/// Strict weak order used for every ranked output: higher mu first, then
/// ascending owner_id.
bool ranks_before(const RankedUser& x, const RankedUser& y);

/// Scores every user against the brand page and flags the top
/// ceil(p * n). Throws Error(unknown_brand) / Error(empty_user_set).
TargetReport rank_users(const Dataset& dataset, const CampaignConfig& cfg, const RunOptions& options = {},
                        const ProfileBuilder& builder = ProfileBuilder());

// --- group match table -------------------------------------------------------

enum class TopicClass { man_topics, woman_topics, both_topics };
enum class UserGroup { male, female };

std::string_view to_string(TopicClass c) noexcept;
std::string_view to_string(UserGroup g) noexcept;
TopicClass parse_topic_class(std::string_view text);

using ClassMap = std::map<std::string, TopicClass>;

ClassMap parse_class_map(const nlohmann::json& j);

struct GroupCell {
  std::optional<double> mean;  // nullopt when the pair set is empty
  std::size_t pairs = 0;
};

struct GroupMatchTable {
  static constexpr std::array<UserGroup, 2> kGroups{UserGroup::male, UserGroup::female};
  static constexpr std::array<std::string_view, 4> kClasses{"man_topics", "woman_topics", "both_topics", "all_topics"};

  /// cells[group][class], classes ordered as kClasses.
  std::array<std::array<GroupCell, 4>, 2> cells{};
  std::size_t users_without_group = 0;

  const GroupCell& cell(UserGroup g, std::string_view cls) const;
  nlohmann::json to_json() const;
};

/// Average match between male/female users and pages of each topic class
/// (all_topics = every page). Throws Error(invalid_config) when the class map
/// names unknown pages or leaves a page unclassified.
GroupMatchTable group_match_table(const Dataset& dataset, const ClassMap& classes, const SimilaritySpec& spec,
                                  CorpusScope scope = CorpusScope::all, const RunOptions& options = {},
                                  const ProfileBuilder& builder = ProfileBuilder());

// --- term clouds -------------------------------------------------------------

struct TermCount {
  std::string term;
  std::size_t count = 0;

  friend bool operator==(const TermCount&, const TermCount&) = default;
};

using TermCloud = std::vector<TermCount>;

/// Raw occurrence counts of tokenized, stopword-filtered posts; top n by
/// count, ties by ascending term.
TermCloud top_terms(std::span<const ProfileRecord> profiles, std::size_t n, const TokenizerConfig& tokenizer);
TermCloud top_terms(std::span<const ProfileRecord* const> profiles, std::size_t n, const TokenizerConfig& tokenizer);

nlohmann::json to_json(const TermCloud& cloud);

// --- rendering ---------------------------------------------------------------

std::string render_target_summary(const TargetReport& report, std::size_t shown = 20);
std::string render_group_table(const GroupMatchTable& table);
std::string render_term_cloud(std::string_view title, const TermCloud& cloud, std::size_t shown = 20);
/// Grouped bar chart of the table; undefined cells are drawn as gaps.
std::string render_group_table_svg(const GroupMatchTable& table);

}  // namespace brandmatch
