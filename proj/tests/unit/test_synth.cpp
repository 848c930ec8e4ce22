#include <gtest/gtest.h>

#include <set>

#include "brandmatch/campaign.hpp"
#include "brandmatch/error.hpp"
#include "brandmatch/ingestion.hpp"
#include "brandmatch/network.hpp"
#include "brandmatch/synth.hpp"

using namespace brandmatch;

TEST(Synth, DeterministicPerSeed) {
  SynthSpec spec;
  const auto a = synthesize(spec, 17);
  const auto b = synthesize(spec, 17);
  EXPECT_EQ(a.dataset.dump(), b.dataset.dump());
  EXPECT_EQ(a.edges, b.edges);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_NE(synthesize(spec, 18).dataset.dump(), a.dataset.dump());
}

TEST(Synth, CountsAndLabels) {
  SynthSpec spec;
  spec.users = 100;
  const auto out = synthesize(spec, 3);
  EXPECT_EQ(out.dataset["users"].size(), 100u);
  EXPECT_EQ(out.dataset["pages"].size(), spec.man_pages + spec.woman_pages + spec.both_pages);
  std::size_t a = 0;
  for (const auto& [id, label] : out.labels.items()) a += label == "A" ? 1 : 0;
  EXPECT_EQ(a, 50u);
  const auto loaded = parse_dataset(out.dataset);
  EXPECT_EQ(loaded.dataset.users.size(), 100u);
  EXPECT_EQ(loaded.report.dropped_records(), 0u);
  for (const auto& u : loaded.dataset.users) {
    EXPECT_EQ(u.gender, out.labels[u.owner_id] == "A" ? "f" : "m");
  }
}

TEST(Synth, ClusterVocabulariesDisjoint) {
  SynthSpec spec;
  const auto out = synthesize(spec, 5);
  const auto& woman = out.vocabularies.at("woman");
  const auto& man = out.vocabularies.at("man");
  std::set<std::string> w(woman.begin(), woman.end());
  for (const auto& t : man) EXPECT_FALSE(w.contains(t)) << t;
  EXPECT_TRUE(out.vocabularies.at("shared").empty());

  // Tokens actually used by each cluster never cross over.
  const auto ds = parse_dataset(out.dataset).dataset;
  const auto cfg = TokenizerConfig::defaults();
  std::set<std::string> used_a, used_b;
  for (const auto& u : ds.users) {
    for (const auto& p : u.posts) {
      for (const auto& t : tokenize(p, cfg)) (u.gender == "f" ? used_a : used_b).insert(t);
    }
  }
  for (const auto& t : used_a) EXPECT_FALSE(used_b.contains(t)) << t;
  for (const auto& t : used_a) EXPECT_TRUE(w.contains(t)) << t;
}

TEST(Synth, EdgesBuildAValidGraph) {
  SynthSpec spec;
  spec.users = 60;
  const auto out = synthesize(spec, 9);
  const auto ds = parse_dataset(out.dataset).dataset;
  const auto g = build_graph_from_text(ds, out.edges);
  EXPECT_TRUE(g.drops.empty());
  EXPECT_GT(g.graph.edge_count(), 60u);
}

TEST(Synth, CampaignsAndClassMapParse) {
  const auto out = synthesize(SynthSpec{}, 1);
  const auto classes = parse_class_map(nlohmann::json::parse(out.class_map.dump()));
  EXPECT_EQ(classes.at("page_woman_01"), TopicClass::woman_topics);
  EXPECT_EQ(classes.at("page_both_02"), TopicClass::both_topics);
  EXPECT_EQ(CampaignConfig::from_json(nlohmann::json::parse(out.woman_campaign.dump())).brand_id, "page_woman_01");
}

TEST(SynthSpec, JsonRoundTripAndValidation) {
  SynthSpec spec;
  spec.users = 7;
  spec.age_range = {20, 30};
  const auto back = SynthSpec::from_json(spec.to_json());
  EXPECT_EQ(back.to_json(), spec.to_json());
  EXPECT_THROW(SynthSpec::from_json(nlohmann::json::parse(R"({"users": 0})")), Error);
  EXPECT_THROW(SynthSpec::from_json(nlohmann::json::parse(R"({"age_range": [40, 20]})")), Error);
  EXPECT_THROW(SynthSpec::from_json(nlohmann::json::parse(R"({"pages": {"man_topics": 0}})")), Error);
  EXPECT_THROW(SynthSpec::from_json(nlohmann::json::parse(R"({"colour": 1})")), Error);
}
