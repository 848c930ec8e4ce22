#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace brandmatch {

enum class ProfileKind { user, brand_page };

std::string_view to_string(ProfileKind kind) noexcept;
ProfileKind parse_profile_kind(std::string_view text);

struct PageMeta {
  std::string name;
  std::optional<std::string> category;  // company / community / public figure ...
  std::vector<std::string> topics;
  std::uint64_t follow_count = 0;

  friend bool operator==(const PageMeta&, const PageMeta&) = default;
};

/// One normalized user or brand-page record, as produced by ingestion.
struct ProfileRecord {
  std::string owner_id;
  ProfileKind kind = ProfileKind::user;
  std::optional<std::string> gender;  // "m" | "f" | "other"
  std::optional<int> age;             // years, [1, 120]
  std::optional<std::string> education;
  std::optional<std::string> job;
  std::optional<std::string> location;
  std::vector<std::string> posts;
  std::optional<PageMeta> page_meta;
  /// Unrecognized keys, kept verbatim in their original order.
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  friend bool operator==(const ProfileRecord&, const ProfileRecord&) = default;
};

}  // namespace brandmatch
