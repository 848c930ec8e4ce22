#include "brandmatch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "brandmatch/error.hpp"
#include "brandmatch/json_schema.hpp"
#include "brandmatch/tokenizer.hpp"

namespace brandmatch {

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
  static const JsonSchema schema = JsonSchema::bundled("schemas/synth.schema.json");
  try {
    schema.require_valid(j, "synth spec");
  } catch (const Error& e) {
    throw Error(Errc::invalid_config, e.what());
  }
  SynthSpec s;
  auto range = [&](const char* key, std::array<std::size_t, 2>& out) {
    if (!j.contains(key)) return;
    out = {j[key][0].get<std::size_t>(), j[key][1].get<std::size_t>()};
    if (out[0] > out[1]) throw Error(Errc::invalid_config, std::string(key) + " must be [low, high] with low <= high");
  };
  s.users = j.value("users", s.users);
  s.female_fraction = j.value("female_fraction", s.female_fraction);
  if (j.contains("pages")) {
    s.man_pages = j["pages"].value("man_topics", s.man_pages);
    s.woman_pages = j["pages"].value("woman_topics", s.woman_pages);
    s.both_pages = j["pages"].value("both_topics", s.both_pages);
  }
  s.vocabulary_size = j.value("vocabulary_size", s.vocabulary_size);
  s.shared_vocabulary_size = j.value("shared_vocabulary_size", s.shared_vocabulary_size);
  range("posts_per_profile", s.posts_per_profile);
  range("words_per_post", s.words_per_post);
  range("age_range", s.age_range);
  if (s.age_range[0] < 1 || s.age_range[1] > 120) throw Error(Errc::invalid_config, "age_range must lie within [1, 120]");
  if (s.words_per_post[0] == 0) throw Error(Errc::invalid_config, "words_per_post lower bound must be positive");
  s.edges_per_user = j.value("edges_per_user", s.edges_per_user);
  if (j.contains("noise")) {
    s.duplicate_post_rate = j["noise"].value("duplicate_post_rate", s.duplicate_post_rate);
    s.empty_post_rate = j["noise"].value("empty_post_rate", s.empty_post_rate);
    s.stopword_rate = j["noise"].value("stopword_rate", s.stopword_rate);
  }
  if (s.man_pages == 0 || s.woman_pages == 0) {
    throw Error(Errc::invalid_config, "synthetic datasets need at least one man_topics and one woman_topics page");
  }
  return s;
}

nlohmann::json SynthSpec::to_json() const {
  return {{"users", users},
          {"female_fraction", female_fraction},
          {"pages", {{"man_topics", man_pages}, {"woman_topics", woman_pages}, {"both_topics", both_pages}}},
          {"vocabulary_size", vocabulary_size},
          {"shared_vocabulary_size", shared_vocabulary_size},
          {"posts_per_profile", posts_per_profile},
          {"words_per_post", words_per_post},
          {"age_range", age_range},
          {"edges_per_user", edges_per_user},
          {"noise",
           {{"duplicate_post_rate", duplicate_post_rate},
            {"empty_post_rate", empty_post_rate},
            {"stopword_rate", stopword_rate}}}};
}

namespace {

// std::uniform_*_distribution output is implementation-defined; these
// conversions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return lo + static_cast<std::size_t>(x % span);
  }

  bool chance(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[between(0, i - 1)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Zipf-like sampler over a vocabulary: word r has weight 1 / (r + 1).
class ZipfSampler {
 public:
  explicit ZipfSampler(std::size_t n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / static_cast<double>(r + 1);
      cumulative_.push_back(total);
    }
  }
  std::size_t draw(Rng& rng) const {
    const double x = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

std::vector<std::string> make_words(Rng& rng, std::size_t count, std::set<std::string>& used) {
  static constexpr const char* kOnsets[] = {"b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "tr", "st", "gl"};
  static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u"};
  const StopwordSet stop = default_stopwords();
  std::vector<std::string> out;
  while (out.size() < count) {
    const std::size_t syllables = rng.between(2, 4);
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
      w += kOnsets[rng.between(0, std::size(kOnsets) - 1)];
      w += kVowels[rng.between(0, std::size(kVowels) - 1)];
    }
    if (stop.contains(w) || !used.insert(w).second) continue;
    out.push_back(std::move(w));
  }
  return out;
}

std::string make_post(Rng& rng, const SynthSpec& spec, const std::vector<const std::vector<std::string>*>& vocabs,
                      const std::vector<ZipfSampler>& samplers, const std::vector<std::string>& stopwords) {
  const std::size_t length = rng.between(spec.words_per_post[0], spec.words_per_post[1]);
  std::string post;
  for (std::size_t i = 0; i < length; ++i) {
    std::string word;
    if (!stopwords.empty() && rng.chance(spec.stopword_rate)) {
      word = stopwords[rng.between(0, stopwords.size() - 1)];
    } else {
      const std::size_t v = rng.between(0, vocabs.size() - 1);
      word = (*vocabs[v])[samplers[v].draw(rng)];
    }
    if (i == 0) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    if (!post.empty()) post += ' ';
    post += word;
  }
  post += rng.chance(0.3) ? "!" : ".";
  return post;
}

nlohmann::ordered_json make_posts(Rng& rng, const SynthSpec& spec, const std::vector<const std::vector<std::string>*>& vocabs,
                                  const std::vector<ZipfSampler>& samplers, const std::vector<std::string>& stopwords) {
  nlohmann::ordered_json posts = nlohmann::ordered_json::array();
  const std::size_t count = rng.between(spec.posts_per_profile[0], spec.posts_per_profile[1]);
  for (std::size_t i = 0; i < count; ++i) {
    if (rng.chance(spec.empty_post_rate)) {
      posts.push_back(rng.chance(0.5) ? "   " : "!!! 2018");
      continue;
    }
    if (!posts.empty() && rng.chance(spec.duplicate_post_rate)) {
      // Whitespace/punctuation variant of an earlier post.
      std::string dup = posts[rng.between(0, posts.size() - 1)].get<std::string>();
      posts.push_back("  " + dup + " ");
      continue;
    }
    posts.push_back(make_post(rng, spec, vocabs, samplers, stopwords));
  }
  return posts;
}

}  // namespace

SynthOutput synthesize(const SynthSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  SynthOutput out;

  std::set<std::string> used;
  auto& woman_vocab = out.vocabularies["woman"] = make_words(rng, spec.vocabulary_size, used);
  auto& man_vocab = out.vocabularies["man"] = make_words(rng, spec.vocabulary_size, used);
  auto& shared_vocab = out.vocabularies["shared"] = make_words(rng, spec.shared_vocabulary_size, used);

  std::vector<std::string> stopwords = {"il", "la", "di", "che", "the", "and", "per", "con", "of", "una"};
  const ZipfSampler vocab_sampler(spec.vocabulary_size);
  const ZipfSampler shared_sampler(std::max<std::size_t>(spec.shared_vocabulary_size, 1));

  auto vocab_set = [&](const std::vector<std::string>& primary) {
    std::vector<const std::vector<std::string>*> v{&primary};
    std::vector<ZipfSampler> s{vocab_sampler};
    if (!shared_vocab.empty()) {
      v.push_back(&shared_vocab);
      s.push_back(shared_sampler);
    }
    return std::make_pair(v, s);
  };

  static constexpr const char* kFemaleVariants[] = {"female", "F", "Woman", "donna"};
  static constexpr const char* kMaleVariants[] = {"male", "M", "Man", "uomo"};
  static constexpr const char* kEducation[] = {"high school diploma", "bachelor in economics", "master in engineering",
                                               "laurea in lettere", "phd in biology"};
  static constexpr const char* kJobs[] = {"student", "software engineer", "teacher", "nurse", "shop assistant",
                                          "sales manager", "designer"};
  static constexpr const char* kCategories[] = {"company", "community", "public figure"};
  static constexpr const char* kHobbies[] = {"running", "cooking", "gaming", "reading", "travel"};

  // Users.
  const auto female_count = static_cast<std::size_t>(std::llround(spec.female_fraction * static_cast<double>(spec.users)));
  std::vector<bool> female(spec.users, false);
  std::fill(female.begin(), female.begin() + static_cast<std::ptrdiff_t>(std::min(female_count, spec.users)), true);
  rng.shuffle(female);

  auto& users = out.dataset["users"] = nlohmann::ordered_json::array();
  std::vector<std::string> user_ids;
  for (std::size_t i = 0; i < spec.users; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "user_%04zu", i + 1);
    user_ids.emplace_back(id);
    const bool f = female[i];
    auto [vocabs, samplers] = vocab_set(f ? woman_vocab : man_vocab);

    nlohmann::ordered_json u;
    u["owner_id"] = id;
    u["kind"] = "user";
    u["gender"] = f ? kFemaleVariants[rng.between(0, 3)] : kMaleVariants[rng.between(0, 3)];
    const std::size_t age = rng.between(spec.age_range[0], spec.age_range[1]);
    u["age"] = rng.chance(0.2) ? nlohmann::ordered_json(std::to_string(age)) : nlohmann::ordered_json(age);
    if (rng.chance(0.8)) u["education"] = kEducation[rng.between(0, std::size(kEducation) - 1)];
    if (rng.chance(0.8)) u["job"] = kJobs[rng.between(0, std::size(kJobs) - 1)];
    if (rng.chance(0.9)) u["location"] = rng.chance(0.5) ? "Palermo" : "Milano";
    u["posts"] = make_posts(rng, spec, vocabs, samplers, stopwords);
    if (rng.chance(0.3)) u["hobby"] = kHobbies[rng.between(0, std::size(kHobbies) - 1)];
    users.push_back(std::move(u));
    out.labels[id] = f ? "A" : "B";
  }

  // Pages.
  auto& pages = out.dataset["pages"] = nlohmann::ordered_json::array();
  std::vector<std::string> page_ids;
  std::size_t page_no = 0;
  auto add_pages = [&](std::size_t count, const char* cls, const char* stem) {
    for (std::size_t i = 0; i < count; ++i) {
      char id[48];
      std::snprintf(id, sizeof id, "page_%s_%02zu", stem, i + 1);
      page_ids.emplace_back(id);
      std::vector<const std::vector<std::string>*> vocabs;
      std::vector<ZipfSampler> samplers;
      if (std::string_view(cls) != "man_topics") {
        vocabs.push_back(&woman_vocab);
        samplers.push_back(vocab_sampler);
      }
      if (std::string_view(cls) != "woman_topics") {
        vocabs.push_back(&man_vocab);
        samplers.push_back(vocab_sampler);
      }
      nlohmann::ordered_json p;
      p["owner_id"] = id;
      p["kind"] = "brand_page";
      SynthSpec page_spec = spec;
      page_spec.posts_per_profile = {spec.posts_per_profile[0] * 3, spec.posts_per_profile[1] * 3};
      p["posts"] = make_posts(rng, page_spec, vocabs, samplers, stopwords);
      char followers[32];
      std::snprintf(followers, sizeof followers, "%.1fM", 0.1 + static_cast<double>(rng.between(1, 120)) / 10.0);
      p["page_meta"] = {{"name", std::string("@") + stem + std::to_string(i + 1)},
                        {"category", kCategories[page_no % std::size(kCategories)]},
                        {"topics", {(*vocabs.front())[0], (*vocabs.back())[1]}},
                        {"follow_count", followers}};
      pages.push_back(std::move(p));
      out.class_map[id] = cls;
      ++page_no;
    }
  };
  add_pages(spec.woman_pages, "woman_topics", "woman");
  add_pages(spec.man_pages, "man_topics", "man");
  add_pages(spec.both_pages, "both_topics", "both");

  out.woman_campaign = {{"brand_id", "page_woman_01"}, {"target_fraction", 0.03}, {"corpus_scope", "union"}};
  out.man_campaign = {{"brand_id", "page_man_01"}, {"target_fraction", 0.03}, {"corpus_scope", "union"}};

  // Edges: friendships mostly within a cluster, plus user -> page follows.
  std::set<std::pair<std::size_t, std::size_t>> friends;
  std::vector<std::size_t> same[2];
  for (std::size_t i = 0; i < spec.users; ++i) same[female[i] ? 0 : 1].push_back(i);
  for (std::size_t i = 0; i < spec.users && spec.users > 1; ++i) {
    for (std::size_t e = 0; e < spec.edges_per_user; ++e) {
      const auto& pool = same[female[i] ? 0 : 1];
      std::size_t j = (rng.chance(0.8) && pool.size() > 1) ? pool[rng.between(0, pool.size() - 1)]
                                                           : rng.between(0, spec.users - 1);
      if (j == i) continue;
      auto key = std::minmax(i, j);
      if (!friends.insert(key).second) continue;
      char weight[16];
      std::snprintf(weight, sizeof weight, "%.2f", static_cast<double>(rng.between(1, 100)) / 100.0);
      nlohmann::ordered_json edge = {{"src", user_ids[key.first]}, {"dst", user_ids[key.second]}, {"label", "friend"}};
      edge["weight"] = std::stod(weight);
      out.edges += edge.dump() + "\n";
    }
    const std::size_t first_page = female[i] ? 0 : spec.woman_pages;
    const std::size_t page_count = female[i] ? spec.woman_pages : spec.man_pages;
    const std::string& page = page_ids[first_page + rng.between(0, page_count - 1)];
    out.edges += nlohmann::ordered_json({{"src", user_ids[i]}, {"dst", page}, {"label", "follows"}}).dump() + "\n";
  }
  return out;
}

}  // namespace brandmatch
