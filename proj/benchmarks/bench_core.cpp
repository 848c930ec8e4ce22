#include <benchmark/benchmark.h>

#include <map>
#include <string>
#include <vector>

#include "brandmatch/campaign.hpp"
#include "brandmatch/ingestion.hpp"
#include "brandmatch/synth.hpp"
#include "brandmatch/text_index.hpp"
#include "brandmatch/tokenizer.hpp"

namespace {

using namespace brandmatch;

const Dataset& fixture(std::size_t users) {
  static std::map<std::size_t, Dataset> cache;
  auto it = cache.find(users);
  if (it == cache.end()) {
    SynthSpec spec;
    spec.users = users;
    it = cache.emplace(users, parse_dataset(synthesize(spec, 42).dataset).dataset).first;
  }
  return it->second;
}

std::string joined_posts(const Dataset& ds) {
  std::string text;
  for (const auto& u : ds.users) {
    for (const auto& p : u.posts) text += p + " ";
  }
  return text;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text = joined_posts(fixture(100));
  const auto cfg = TokenizerConfig::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text, cfg));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

struct CorpusFixture {
  std::vector<Document> docs;
  CorpusIndex corpus;

  explicit CorpusFixture(const Dataset& ds)
      : docs(ProfileCatalog(ds, ProfileBuilder()).post_documents(CorpusScope::all)), corpus(CorpusIndex::build(docs)) {}
};

void BM_TfidfVector(benchmark::State& state) {
  static const CorpusFixture f(fixture(1000));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tfidf_vector(f.docs[i], f.corpus));
    i = (i + 1) % f.docs.size();
  }
}
BENCHMARK(BM_TfidfVector);

void BM_Cosine(benchmark::State& state) {
  static const CorpusFixture f(fixture(1000));
  std::vector<WeightedVector> vectors;
  for (std::size_t i = 0; i < 64; ++i) vectors.push_back(tfidf_vector(f.docs[i], f.corpus));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cosine(vectors[i % 64], vectors[(i * 7 + 3) % 64]));
    ++i;
  }
}
BENCHMARK(BM_Cosine);

void BM_RankUsers(benchmark::State& state) {
  const Dataset& ds = fixture(1000);
  CampaignConfig cfg;
  cfg.brand_id = "page_woman_01";
  RunOptions options;
  options.jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rank_users(ds, cfg, options));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * ds.users.size()));
}
BENCHMARK(BM_RankUsers)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
