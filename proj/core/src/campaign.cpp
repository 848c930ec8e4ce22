#include "brandmatch/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "brandmatch/error.hpp"
#include "brandmatch/json_schema.hpp"
#include "brandmatch/parallel.hpp"

namespace brandmatch {

std::string_view to_string(CorpusScope scope) noexcept {
  switch (scope) {
    case CorpusScope::users: return "users";
    case CorpusScope::pages: return "pages";
    case CorpusScope::all: return "union";
  }
  return "union";
}

CorpusScope parse_corpus_scope(std::string_view text) {
  if (text == "users") return CorpusScope::users;
  if (text == "pages") return CorpusScope::pages;
  if (text == "union") return CorpusScope::all;
  throw Error(Errc::invalid_config, "unknown corpus scope '" + std::string(text) + "' (expected users|pages|union)");
}

// --- CampaignConfig ----------------------------------------------------------

CampaignConfig CampaignConfig::from_json(const nlohmann::json& j) {
  static const JsonSchema schema = JsonSchema::bundled("schemas/campaign.schema.json");
  try {
    schema.require_valid(j, "campaign config");
  } catch (const Error& e) {
    throw Error(Errc::invalid_config, e.what());
  }
  CampaignConfig cfg;
  cfg.brand_id = j.value("brand_id", std::string());
  if (j.contains("target_fraction")) cfg.target_fraction = j["target_fraction"].get<double>();
  if (j.contains("corpus_scope")) cfg.scope = parse_corpus_scope(j["corpus_scope"].get<std::string>());
  if (j.contains("categories")) cfg.categories = SimilaritySpec::from_json(j["categories"]);
  return cfg;
}

nlohmann::json CampaignConfig::to_json() const {
  return {{"brand_id", brand_id},
          {"target_fraction", target_fraction},
          {"corpus_scope", to_string(scope)},
          {"categories", categories.to_json()}};
}

// --- ProfileCatalog ----------------------------------------------------------

namespace {

std::optional<ProfileTree> try_build(const ProfileBuilder& builder, const ProfileRecord& record) {
  try {
    return builder.build(record);
  } catch (const Error& e) {
    if (e.code() == Errc::empty_profile) return std::nullopt;
    throw;
  }
}

}  // namespace

ProfileCatalog::ProfileCatalog(const Dataset& dataset, const ProfileBuilder& builder, std::size_t jobs) {
  for (const auto& c : builder.schema().categories) {
    if (c.field == "posts") post_categories_.push_back(c.name);
  }
  users_.resize(dataset.users.size());
  pages_.resize(dataset.pages.size());
  parallel_for(dataset.users.size(), jobs, [&](std::size_t i) { users_[i] = try_build(builder, dataset.users[i]); });
  parallel_for(dataset.pages.size(), jobs, [&](std::size_t i) { pages_[i] = try_build(builder, dataset.pages[i]); });
}

std::vector<Document> ProfileCatalog::post_documents(CorpusScope scope) const {
  std::vector<Document> docs;
  auto collect = [&](const std::vector<std::optional<ProfileTree>>& trees) {
    for (const auto& tree : trees) {
      if (!tree) continue;
      for (const auto& category : post_categories_) {
        for (const auto& leaf : leaves_at(*tree, CategoryPath({category}))) {
          const auto* doc = std::get_if<TextDocument>(&leaf.value);
          if (doc != nullptr && !doc->tokens.empty()) docs.push_back({tree->owner_id(), doc->tokens});
        }
      }
    }
  };
  if (scope != CorpusScope::pages) collect(users_);
  if (scope != CorpusScope::users) collect(pages_);
  return docs;
}

std::optional<CorpusIndex> build_corpus(const ProfileCatalog& catalog, CorpusScope scope) {
  auto docs = catalog.post_documents(scope);
  if (docs.empty()) return std::nullopt;
  return CorpusIndex::build(docs);
}

std::size_t selection_size(double fraction, std::size_t n) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(Errc::invalid_config, "target fraction must lie in (0, 1]");
  }
  if (n == 0) return 0;
  const double raw = fraction * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

// --- ranking -----------------------------------------------------------------

bool ranks_before(const RankedUser& x, const RankedUser& y) {
  if (x.match.overall != y.match.overall) return x.match.overall > y.match.overall;
  return x.owner_id < y.owner_id;
}

namespace {

MatchContext make_context(const std::optional<CorpusIndex>& corpus, const SimilaritySpec& spec, const Weighting& w) {
  if (spec.uses(SimilarityKind::tfidf_cosine) && !corpus) {
    throw Error(Errc::empty_corpus, "tfidf_cosine is configured but the corpus scope holds no post documents");
  }
  return MatchContext{corpus ? &*corpus : nullptr, w};
}

MatchResult match_or_empty(const std::optional<ProfileTree>& a, const ProfileTree& b, const SimilaritySpec& spec,
                           const MatchContext& ctx) {
  if (!a) {
    MatchResult none;
    none.no_common_categories = true;
    return none;
  }
  return profile_match(*a, b, spec, ctx);
}

}  // namespace

TargetReport rank_users(const Dataset& dataset, const CampaignConfig& cfg, const RunOptions& options,
                        const ProfileBuilder& builder) {
  selection_size(cfg.target_fraction, 1);  // rejects a bad fraction before any work
  if (cfg.brand_id.empty()) throw Error(Errc::invalid_config, "campaign config names no brand_id");
  const auto brand_it = std::find_if(dataset.pages.begin(), dataset.pages.end(),
                                     [&](const ProfileRecord& r) { return r.owner_id == cfg.brand_id; });
  if (brand_it == dataset.pages.end()) {
    const bool is_user = std::any_of(dataset.users.begin(), dataset.users.end(),
                                     [&](const ProfileRecord& r) { return r.owner_id == cfg.brand_id; });
    throw Error(Errc::unknown_brand, "'" + cfg.brand_id + (is_user ? "' is a user, not a brand page" : "' is not a page in the dataset"));
  }
  if (dataset.users.empty()) throw Error(Errc::empty_user_set, "dataset has no users to rank");

  ProfileCatalog catalog(dataset, builder, options.jobs);
  const auto brand_index = static_cast<std::size_t>(brand_it - dataset.pages.begin());
  const auto& brand = catalog.pages()[brand_index];
  if (!brand) throw Error(Errc::unknown_brand, "brand page '" + cfg.brand_id + "' has no profile content");

  const auto corpus = build_corpus(catalog, cfg.scope);
  const MatchContext ctx = make_context(corpus, cfg.categories, options.weighting);

  TargetReport report;
  report.brand_id = cfg.brand_id;
  report.config = cfg.to_json();
  report.config["tf_mode"] = to_string(options.weighting.tf_mode);
  report.dataset_digest = dataset_digest(dataset);

  report.ranked.resize(dataset.users.size());
  parallel_for(dataset.users.size(), options.jobs, [&](std::size_t i) {
    report.ranked[i].owner_id = dataset.users[i].owner_id;
    report.ranked[i].match = match_or_empty(catalog.users()[i], *brand, cfg.categories, ctx);
  });
  std::sort(report.ranked.begin(), report.ranked.end(), ranks_before);

  const std::size_t target = selection_size(cfg.target_fraction, report.ranked.size());
  for (std::size_t i = 0; i < target; ++i) {
    report.ranked[i].selected = true;
    report.selected.push_back(report.ranked[i].owner_id);
  }

  for (const auto& [path, rule] : cfg.categories.rules()) {
    ScoreDistribution dist;
    double sum = 0.0;
    for (const auto& r : report.ranked) {
      auto it = r.match.per_category.find(path);
      if (it == r.match.per_category.end()) continue;
      const double mu = it->second.mu;
      if (dist.count == 0) {
        dist.min = dist.max = mu;
      } else {
        dist.min = std::min(dist.min, mu);
        dist.max = std::max(dist.max, mu);
      }
      ++dist.count;
      sum += mu;
      const auto bin = static_cast<std::size_t>(std::clamp(mu, 0.0, 1.0) * 10.0);
      ++dist.histogram[std::min<std::size_t>(bin, 9)];
    }
    if (dist.count > 0) dist.mean = sum / static_cast<double>(dist.count);
    report.distributions.emplace(path.to_string(), dist);
  }
  return report;
}

nlohmann::json TargetReport::to_json() const {
  nlohmann::json ranked_json = nlohmann::json::array();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& r = ranked[i];
    nlohmann::json cats = nlohmann::json::object();
    for (const auto& [path, score] : r.match.per_category) {
      cats[path.to_string()] = {
          {"mu", score.mu}, {"matched_pairs", score.matched_pairs}, {"total_pairs", score.total_pairs}};
    }
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto& p : r.match.skipped) skipped.push_back(p.to_string());
    ranked_json.push_back({{"rank", i + 1},
                           {"owner_id", r.owner_id},
                           {"mu", r.match.overall},
                           {"k_prime", r.match.k_prime},
                           {"no_common_categories", r.match.no_common_categories},
                           {"selected", r.selected},
                           {"categories", std::move(cats)},
                           {"skipped_categories", std::move(skipped)}});
  }
  nlohmann::json dists = nlohmann::json::object();
  for (const auto& [name, d] : distributions) {
    dists[name] = {{"count", d.count}, {"mean", d.mean}, {"min", d.min}, {"max", d.max}, {"histogram", d.histogram}};
  }
  return {{"brand_id", brand_id},
          {"config", config},
          {"dataset_digest", dataset_digest},
          {"user_count", ranked.size()},
          {"target_size", selected.size()},
          {"ranked", std::move(ranked_json)},
          {"selected", selected},
          {"category_distributions", std::move(dists)}};
}

// --- group match table -------------------------------------------------------

std::string_view to_string(TopicClass c) noexcept {
  switch (c) {
    case TopicClass::man_topics: return "man_topics";
    case TopicClass::woman_topics: return "woman_topics";
    case TopicClass::both_topics: return "both_topics";
  }
  return "both_topics";
}

std::string_view to_string(UserGroup g) noexcept {
  return g == UserGroup::male ? "male" : "female";
}

TopicClass parse_topic_class(std::string_view text) {
  if (text == "man_topics") return TopicClass::man_topics;
  if (text == "woman_topics") return TopicClass::woman_topics;
  if (text == "both_topics") return TopicClass::both_topics;
  throw Error(Errc::invalid_config, "unknown topic class '" + std::string(text) + "'");
}

ClassMap parse_class_map(const nlohmann::json& j) {
  static const JsonSchema schema = JsonSchema::bundled("schemas/class_map.schema.json");
  try {
    schema.require_valid(j, "class map");
  } catch (const Error& e) {
    throw Error(Errc::invalid_config, e.what());
  }
  ClassMap out;
  for (const auto& [page, cls] : j.items()) out.emplace(page, parse_topic_class(cls.get<std::string>()));
  return out;
}

const GroupCell& GroupMatchTable::cell(UserGroup g, std::string_view cls) const {
  auto it = std::find(kClasses.begin(), kClasses.end(), cls);
  if (it == kClasses.end()) throw Error(Errc::invalid_argument, "unknown topic class '" + std::string(cls) + "'");
  return cells[g == UserGroup::male ? 0 : 1][static_cast<std::size_t>(it - kClasses.begin())];
}

nlohmann::json GroupMatchTable::to_json() const {
  nlohmann::json cells_json = nlohmann::json::array();
  for (std::size_t g = 0; g < kGroups.size(); ++g) {
    for (std::size_t c = 0; c < kClasses.size(); ++c) {
      const auto& cell = cells[g][c];
      nlohmann::json j = {{"group", to_string(kGroups[g])}, {"class", kClasses[c]}, {"pairs", cell.pairs}};
      j["mean"] = cell.mean ? nlohmann::json(*cell.mean) : nlohmann::json(nullptr);
      j["defined"] = cell.mean.has_value();
      if (!cell.mean) j["note"] = std::string(to_string(Errc::empty_class)) + ": no (user, page) pairs";
      cells_json.push_back(std::move(j));
    }
  }
  return {{"groups", {"male", "female"}},
          {"classes", kClasses},
          {"cells", std::move(cells_json)},
          {"users_without_group", users_without_group}};
}

GroupMatchTable group_match_table(const Dataset& dataset, const ClassMap& classes, const SimilaritySpec& spec,
                                  CorpusScope scope, const RunOptions& options, const ProfileBuilder& builder) {
  std::vector<std::size_t> page_class(dataset.pages.size());
  std::string missing;
  for (std::size_t p = 0; p < dataset.pages.size(); ++p) {
    auto it = classes.find(dataset.pages[p].owner_id);
    if (it == classes.end()) {
      missing += (missing.empty() ? "" : ", ") + dataset.pages[p].owner_id;
      continue;
    }
    page_class[p] = static_cast<std::size_t>(it->second);
  }
  if (!missing.empty()) throw Error(Errc::invalid_config, "pages without a topic class: " + missing);
  for (const auto& [page, cls] : classes) {
    const ProfileRecord* rec = dataset.find(page);
    if (rec == nullptr || rec->kind != ProfileKind::brand_page) {
      throw Error(Errc::invalid_config, "class map names '" + page + "', which is not a page in the dataset");
    }
  }

  ProfileCatalog catalog(dataset, builder, options.jobs);
  const auto corpus = build_corpus(catalog, scope);
  const MatchContext ctx = make_context(corpus, spec, options.weighting);

  const std::size_t n_users = dataset.users.size();
  const std::size_t n_pages = dataset.pages.size();
  std::vector<double> mu(n_users * n_pages, 0.0);
  parallel_for(n_users, options.jobs, [&](std::size_t u) {
    for (std::size_t p = 0; p < n_pages; ++p) {
      if (!catalog.pages()[p]) continue;
      mu[u * n_pages + p] = match_or_empty(catalog.users()[u], *catalog.pages()[p], spec, ctx).overall;
    }
  });

  GroupMatchTable table;
  std::array<std::array<double, 4>, 2> sums{};
  for (std::size_t u = 0; u < n_users; ++u) {
    const auto& gender = dataset.users[u].gender;
    std::size_t g = 0;
    if (gender == "m") {
      g = 0;
    } else if (gender == "f") {
      g = 1;
    } else {
      ++table.users_without_group;
      continue;
    }
    for (std::size_t p = 0; p < n_pages; ++p) {
      const double v = mu[u * n_pages + p];
      for (std::size_t c : {page_class[p], std::size_t{3}}) {
        sums[g][c] += v;
        ++table.cells[g][c].pairs;
      }
    }
  }
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t c = 0; c < 4; ++c) {
      auto& cell = table.cells[g][c];
      if (cell.pairs > 0) cell.mean = sums[g][c] / static_cast<double>(cell.pairs);
    }
  }
  return table;
}

// --- term clouds -------------------------------------------------------------

TermCloud top_terms(std::span<const ProfileRecord* const> profiles, std::size_t n, const TokenizerConfig& tokenizer) {
  if (n == 0) throw Error(Errc::invalid_argument, "term cloud size must be at least 1");
  std::unordered_map<std::string, std::size_t> counts;
  for (const ProfileRecord* r : profiles) {
    for (const auto& post : r->posts) {
      for (auto& t : tokenize(post, tokenizer)) ++counts[std::move(t)];
    }
  }
  TermCloud cloud;
  cloud.reserve(counts.size());
  for (auto& [term, count] : counts) cloud.push_back({term, count});
  std::sort(cloud.begin(), cloud.end(), [](const TermCount& a, const TermCount& b) {
    return a.count != b.count ? a.count > b.count : a.term < b.term;
  });
  if (cloud.size() > n) cloud.resize(n);
  return cloud;
}

TermCloud top_terms(std::span<const ProfileRecord> profiles, std::size_t n, const TokenizerConfig& tokenizer) {
  std::vector<const ProfileRecord*> ptrs;
  ptrs.reserve(profiles.size());
  for (const auto& r : profiles) ptrs.push_back(&r);
  return top_terms(std::span<const ProfileRecord* const>(ptrs), n, tokenizer);
}

nlohmann::json to_json(const TermCloud& cloud) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : cloud) out.push_back({{"term", t.term}, {"count", t.count}});
  return out;
}

}  // namespace brandmatch
