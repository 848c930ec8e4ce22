#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "brandmatch/campaign.hpp"
#include "brandmatch/error.hpp"
#include "brandmatch/json_schema.hpp"
#include "brandmatch/synth.hpp"

using namespace brandmatch;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = BRANDMATCH_FIXTURES;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::invalid_argument;
}

struct Fixture {
  Dataset dataset;
  nlohmann::ordered_json labels;
  ClassMap classes;
};

Fixture synthetic(std::size_t users, std::uint64_t seed) {
  SynthSpec spec;
  spec.users = users;
  auto out = synthesize(spec, seed);
  return {parse_dataset(out.dataset).dataset, out.labels, parse_class_map(nlohmann::json::parse(out.class_map.dump()))};
}

CampaignConfig config(std::string brand, double p = 0.03) {
  CampaignConfig cfg;
  cfg.brand_id = std::move(brand);
  cfg.target_fraction = p;
  return cfg;
}

}  // namespace

TEST(SelectionSize, CeilingClampedToAtLeastOne) {
  EXPECT_EQ(selection_size(0.03, 100), 3u);
  EXPECT_EQ(selection_size(0.03, 1), 1u);
  EXPECT_EQ(selection_size(0.03, 300), 9u);
  EXPECT_EQ(selection_size(0.1, 30), 3u);  // 0.1 * 30 is 3.0000000000000004 in binary
  EXPECT_EQ(selection_size(1.0, 17), 17u);
  EXPECT_EQ(selection_size(0.5, 3), 2u);
  for (std::size_t n = 1; n <= 400; ++n) {
    for (int k = 1; k <= 100; ++k) {
      const double p = k / 100.0;
      const auto s = selection_size(p, n);
      // Exact rational ceil(k * n / 100).
      EXPECT_EQ(s, std::max<std::size_t>(1, (static_cast<std::size_t>(k) * n + 99) / 100)) << p << " " << n;
    }
  }
  EXPECT_THROW(selection_size(0.0, 10), Error);
  EXPECT_THROW(selection_size(1.01, 10), Error);
  EXPECT_THROW(selection_size(NAN, 10), Error);
}

TEST(RankUsers, HundredUsersThreeSelected) {
  const auto f = synthetic(100, 11);
  const auto r = rank_users(f.dataset, config("page_woman_01"));
  EXPECT_EQ(r.ranked.size(), 100u);
  EXPECT_EQ(r.selected.size(), 3u);
  EXPECT_TRUE(std::is_sorted(r.ranked.begin(), r.ranked.end(), ranks_before));
}

TEST(RankUsers, SingleUserCeiling) {
  auto ds = load_dataset(kFixtures / "small_dataset.json").dataset;
  ds.users.resize(1);
  const auto r = rank_users(ds, config("bags_shop"));
  EXPECT_EQ(r.selected, (std::vector<std::string>{"alice"}));
}

TEST(RankUsers, ClusterPureSelection) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto f = synthetic(120, seed);
    for (const char* brand : {"page_woman_01", "page_man_01"}) {
      const std::string cluster = std::string(brand) == "page_woman_01" ? "A" : "B";
      const auto r = rank_users(f.dataset, config(brand, 0.1));
      for (const auto& id : r.selected) EXPECT_EQ(f.labels[id], cluster) << brand << " " << id;
    }
  }
}

TEST(RankUsers, Errors) {
  const auto ds = load_dataset(kFixtures / "small_dataset.json").dataset;
  EXPECT_EQ(code_of([&] { rank_users(ds, config("nope")); }), Errc::unknown_brand);
  EXPECT_EQ(code_of([&] { rank_users(ds, config("alice")); }), Errc::unknown_brand);
  EXPECT_EQ(code_of([&] { rank_users(ds, config("")); }), Errc::invalid_config);
  EXPECT_EQ(code_of([&] { rank_users(ds, config("bags_shop", 0.0)); }), Errc::invalid_config);
  const auto pages_only = load_dataset(kFixtures / "pages_only.json").dataset;
  EXPECT_EQ(code_of([&] { rank_users(pages_only, config("p")); }), Errc::empty_user_set);
}

TEST(RankUsers, SmallFixtureScores) {
  const auto ds = load_dataset(kFixtures / "small_dataset.json").dataset;
  const auto r = rank_users(ds, CampaignConfig::from_json(nlohmann::json::parse(R"({
      "brand_id": "bags_shop", "target_fraction": 0.5,
      "categories": {"posts": {"kind": "tfidf_cosine"}}})")));
  EXPECT_EQ(r.selected.size(), 2u);
  // Alice and Carla write about bags; Bob about motors.
  EXPECT_EQ(r.ranked.back().owner_id, "bob");
  EXPECT_GT(r.ranked[1].match.overall, r.ranked[2].match.overall);
  for (const auto& u : r.ranked) EXPECT_EQ(u.match.k_prime, 1u);
}

TEST(RankUsers, StableUnderInputPermutation) {
  auto f = synthetic(80, 5);
  // Users with identical posts tie; the order must still be fixed.
  f.dataset.users[3].posts = f.dataset.users[2].posts;
  f.dataset.users[3].gender = f.dataset.users[2].gender;
  f.dataset.users[3].age = f.dataset.users[2].age;
  f.dataset.users[3].education = f.dataset.users[2].education;
  f.dataset.users[3].job = f.dataset.users[2].job;
  const auto base = rank_users(f.dataset, config("page_both_01", 0.1)).to_json();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5; ++i) {
    auto shuffled = f.dataset;
    std::shuffle(shuffled.users.begin(), shuffled.users.end(), rng);
    auto again = rank_users(shuffled, config("page_both_01", 0.1)).to_json();
    again["dataset_digest"] = base["dataset_digest"];  // the digest hashes record order
    EXPECT_EQ(again, base);
  }
}

TEST(RankUsers, MonotoneContainment) {
  const auto f = synthetic(150, 8);
  std::vector<std::string> previous;
  for (double p : {0.01, 0.03, 0.1, 0.25, 0.5, 1.0}) {
    auto sel = rank_users(f.dataset, config("page_woman_02", p)).selected;
    EXPECT_EQ(sel.size(), selection_size(p, 150));
    std::sort(sel.begin(), sel.end());
    EXPECT_TRUE(std::includes(sel.begin(), sel.end(), previous.begin(), previous.end())) << p;
    previous = sel;
  }
}

TEST(RankUsers, JobsDoNotChangeOutput) {
  const auto f = synthetic(200, 3);
  const auto one = rank_users(f.dataset, config("page_woman_01"), RunOptions{1, {}}).to_json().dump();
  for (std::size_t jobs : {2u, 3u, 8u, 64u}) {
    EXPECT_EQ(rank_users(f.dataset, config("page_woman_01"), RunOptions{jobs, {}}).to_json().dump(), one);
  }
}

TEST(RankUsers, ReportMatchesSchema) {
  const auto f = synthetic(50, 2);
  const auto j = rank_users(f.dataset, config("page_man_01")).to_json();
  const auto violations = JsonSchema::bundled("schemas/target_report.schema.json").validate(j);
  for (const auto& v : violations) ADD_FAILURE() << v.pointer << ": " << v.message;
  EXPECT_EQ(j["target_size"], 2);
  EXPECT_EQ(j["config"]["tf_mode"], "standard");
}

TEST(RankUsers, LiteralTfModeRuns) {
  const auto f = synthetic(40, 2);
  RunOptions options;
  options.weighting.tf_mode = TfMode::literal;
  const auto r = rank_users(f.dataset, config("page_woman_01"), options);
  EXPECT_EQ(r.config["tf_mode"], "literal");
  for (const auto& u : r.ranked) {
    EXPECT_GE(u.match.overall, 0.0);
    EXPECT_LE(u.match.overall, 1.0);
  }
}

TEST(CampaignConfig, JsonAndValidation) {
  const auto cfg = CampaignConfig::from_json(nlohmann::json::parse(
      R"({"brand_id": "b", "target_fraction": 0.2, "corpus_scope": "users",
          "categories": {"age": {"kind": "numeric_band", "band": 5, "threshold": 0.1}}})"));
  EXPECT_EQ(cfg.scope, CorpusScope::users);
  EXPECT_EQ(cfg.categories.find(CategoryPath::parse("age"))->band, 5.0);
  EXPECT_EQ(CampaignConfig::from_json(cfg.to_json()).to_json(), cfg.to_json());
  for (const char* bad : {R"({"brand_id": "b", "target_fraction": 0})", R"({"brand_id": "b", "target_fraction": 2})",
                          R"({"brand_id": "b", "corpus_scope": "all"})", R"({"brand_id": "b", "extra": 1})",
                          R"({"brand_id": "b", "categories": {"a/b": {"kind": "exact"}}})",
                          R"({"brand_id": "b", "categories": {"age": {"kind": "exact", "threshold": 2}}})"}) {
    EXPECT_EQ(code_of([&] { CampaignConfig::from_json(nlohmann::json::parse(bad)); }), Errc::invalid_config) << bad;
  }
}

TEST(GroupMatchTable, EqualsBruteForceFromMatchResults) {
  const auto f = synthetic(60, 4);
  const auto spec = SimilaritySpec::defaults();
  const auto table = group_match_table(f.dataset, f.classes, spec);

  const ProfileBuilder builder;
  ProfileCatalog catalog(f.dataset, builder);
  const auto corpus = build_corpus(catalog, CorpusScope::all);
  const MatchContext ctx{&*corpus, {}};
  for (std::size_t g = 0; g < 2; ++g) {
    const std::string gender = g == 0 ? "m" : "f";
    for (std::size_t c = 0; c < 4; ++c) {
      double sum = 0;
      std::size_t n = 0;
      for (std::size_t u = 0; u < f.dataset.users.size(); ++u) {
        if (f.dataset.users[u].gender != gender) continue;
        for (std::size_t p = 0; p < f.dataset.pages.size(); ++p) {
          if (c < 3 && static_cast<std::size_t>(f.classes.at(f.dataset.pages[p].owner_id)) != c) continue;
          sum += profile_match(*catalog.users()[u], *catalog.pages()[p], spec, ctx).overall;
          ++n;
        }
      }
      ASSERT_TRUE(table.cells[g][c].mean);
      EXPECT_EQ(table.cells[g][c].pairs, n);
      EXPECT_NEAR(*table.cells[g][c].mean, sum / static_cast<double>(n), 1e-12);
    }
  }
  EXPECT_GT(table.cell(UserGroup::female, "woman_topics").mean.value(),
            table.cell(UserGroup::male, "woman_topics").mean.value());
  EXPECT_GT(table.cell(UserGroup::male, "man_topics").mean.value(),
            table.cell(UserGroup::female, "man_topics").mean.value());
}

TEST(GroupMatchTable, SingleCellAndEmptyClasses) {
  auto ds = load_dataset(kFixtures / "small_dataset.json").dataset;
  ds.users = {ds.users[0]};  // alice, female
  ds.pages = {ds.pages[0]};
  const ClassMap classes = {{"bags_shop", TopicClass::woman_topics}};
  const auto spec = SimilaritySpec::posts_only();
  const auto table = group_match_table(ds, classes, spec);
  const double mu = rank_users(ds, [&] {
                      auto c = config("bags_shop");
                      c.categories = spec;
                      return c;
                    }()).ranked[0].match.overall;
  EXPECT_EQ(table.cell(UserGroup::female, "woman_topics").mean, mu);
  EXPECT_EQ(table.cell(UserGroup::female, "all_topics").mean, mu);
  EXPECT_FALSE(table.cell(UserGroup::female, "man_topics").mean);
  EXPECT_FALSE(table.cell(UserGroup::male, "woman_topics").mean);
  const auto j = table.to_json();
  EXPECT_TRUE(j.dump().find("EmptyClass") != std::string::npos);
}

TEST(GroupMatchTable, AllZeroSimilarities) {
  auto ds = load_dataset(kFixtures / "small_dataset.json").dataset;
  SimilaritySpec spec;
  spec.set(CategoryPath::parse("job"), {SimilarityKind::token_jaccard});  // pages have no job
  const ClassMap classes = {{"bags_shop", TopicClass::woman_topics}, {"moto_club", TopicClass::man_topics}};
  const auto table = group_match_table(ds, classes, spec);
  for (const auto& row : table.cells) {
    for (const auto& cell : row) {
      if (cell.mean) {
        EXPECT_EQ(*cell.mean, 0.0);
      }
    }
  }
}

TEST(GroupMatchTable, ClassMapValidation) {
  const auto ds = load_dataset(kFixtures / "small_dataset.json").dataset;
  const auto spec = SimilaritySpec::posts_only();
  EXPECT_EQ(code_of([&] { group_match_table(ds, {{"bags_shop", TopicClass::woman_topics}}, spec); }),
            Errc::invalid_config);
  EXPECT_EQ(code_of([&] {
              group_match_table(ds, {{"bags_shop", TopicClass::woman_topics}, {"moto_club", TopicClass::man_topics},
                                     {"alice", TopicClass::man_topics}},
                                spec);
            }),
            Errc::invalid_config);
  EXPECT_THROW(parse_class_map(nlohmann::json::parse(R"({"p": "cars"})")), Error);
}

TEST(TopTerms, Examples) {
  ProfileRecord r;
  r.owner_id = "x";
  r.posts = {"a a b"};
  TokenizerConfig none;
  none.min_length = 1;
  const std::vector<ProfileRecord> one = {r};
  EXPECT_EQ(top_terms(one, 100, none), (TermCloud{{"a", 2}, {"b", 1}}));
  EXPECT_EQ(top_terms(one, 1, none), (TermCloud{{"a", 2}}));
  r.posts = {"the and of", "il di"};
  EXPECT_TRUE(top_terms(std::vector<ProfileRecord>{r}, 5, TokenizerConfig::defaults()).empty());
  EXPECT_TRUE(top_terms(std::vector<ProfileRecord>{}, 5, none).empty());
  EXPECT_THROW(top_terms(one, 0, none), Error);
}

TEST(TopTerms, GoldenFixture) {
  const auto ds = load_dataset(kFixtures / "term_cloud.json").dataset;
  const TermCloud expected = {{"borsa", 4}, {"moto", 4}, {"nera", 3}, {"scarpe", 2},
                              {"bella", 1}, {"nere", 1}, {"rossa", 1}, {"rosse", 1}};
  EXPECT_EQ(top_terms(ds.users, 100, TokenizerConfig::defaults()), expected);
  EXPECT_EQ(top_terms(ds.users, 3, TokenizerConfig::defaults()), TermCloud(expected.begin(), expected.begin() + 3));
}
