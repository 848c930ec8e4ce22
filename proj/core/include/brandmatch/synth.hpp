#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace brandmatch {

/// Parameters of a synthetic two-cluster dataset: female users (cluster A)
/// write with the woman-topic vocabulary, male users (cluster B) with the
/// man-topic vocabulary. Pages of each class use their class vocabulary;
/// both_topics pages mix the two.
struct SynthSpec {
  std::size_t users = 100;
  double female_fraction = 0.5;
  std::size_t man_pages = 3;
  std::size_t woman_pages = 3;
  std::size_t both_pages = 2;
  std::size_t vocabulary_size = 60;         // per cluster
  std::size_t shared_vocabulary_size = 0;   // words either cluster may use; 0 keeps clusters disjoint
  std::array<std::size_t, 2> posts_per_profile{5, 12};
  std::array<std::size_t, 2> words_per_post{6, 14};
  std::array<std::size_t, 2> age_range{15, 50};
  std::size_t edges_per_user = 3;
  double duplicate_post_rate = 0.05;
  double empty_post_rate = 0.02;
  double stopword_rate = 0.2;

  static SynthSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SynthOutput {
  nlohmann::ordered_json dataset;        // raw (un-normalized) dataset file content
  nlohmann::ordered_json class_map;      // {page_id: class}
  std::string edges;                     // JSON lines
  nlohmann::ordered_json labels;         // {user_id: "A" | "B"}
  std::map<std::string, std::vector<std::string>> vocabularies;  // woman | man | shared
  nlohmann::ordered_json woman_campaign;  // campaign config for the first woman_topics page
  nlohmann::ordered_json man_campaign;
};

/// Deterministic for a given (spec, seed) on every platform: all draws come
/// from std::mt19937_64 through portable integer/real conversions.
SynthOutput synthesize(const SynthSpec& spec, std::uint64_t seed);

}  // namespace brandmatch
