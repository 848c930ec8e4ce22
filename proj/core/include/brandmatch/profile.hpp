#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandmatch/record.hpp"
#include "brandmatch/tokenizer.hpp"

namespace brandmatch {

// --- instance values ---------------------------------------------------------

/// Free text with its tokenization cached at construction.
struct TextDocument {
  std::string text;  // whitespace-collapsed, NFC
  std::vector<std::string> tokens;

  friend bool operator==(const TextDocument&, const TextDocument&) = default;
};

/// A categorical value such as a gender code or a topic label.
struct CategoricalToken {
  std::string value;  // case folded, NFC

  friend bool operator==(const CategoricalToken&, const CategoricalToken&) = default;
};

struct NumericValue {
  double value = 0.0;
  std::string unit;

  friend bool operator==(const NumericValue&, const NumericValue&) = default;
};

using InstanceValue = std::variant<TextDocument, CategoricalToken, NumericValue>;

std::string_view value_type_name(const InstanceValue& value) noexcept;

struct InstanceLeaf {
  InstanceValue value;
  std::string source;

  friend bool operator==(const InstanceLeaf&, const InstanceLeaf&) = default;
};

// --- paths and nodes ---------------------------------------------------------

/// Category names from the root's child downward, each case folded.
class CategoryPath {
 public:
  CategoryPath() = default;
  explicit CategoryPath(std::vector<std::string> segments);

  /// "interests/music" -> {interests, music}. Empty segments are rejected.
  static CategoryPath parse(std::string_view text);

  std::span<const std::string> segments() const noexcept { return segments_; }
  std::size_t depth() const noexcept { return segments_.size(); }
  bool empty() const noexcept { return segments_.empty(); }
  const std::string& front() const { return segments_.front(); }
  CategoryPath child(std::string_view name) const;
  std::string to_string() const;

  friend auto operator<=>(const CategoryPath&, const CategoryPath&) = default;
  friend bool operator==(const CategoryPath&, const CategoryPath&) = default;

 private:
  std::vector<std::string> segments_;
};

struct CategoryNode {
  std::string name;
  std::vector<CategoryNode> children;
  std::vector<InstanceLeaf> leaves;

  const CategoryNode* find_child(std::string_view child_name) const;

  friend bool operator==(const CategoryNode&, const CategoryNode&) = default;
};

// --- tree --------------------------------------------------------------------

/// Hierarchical profile: root -> categories -> sub-categories -> leaves.
/// Validated on construction and immutable afterwards.
class ProfileTree {
 public:
  /// Throws Error(invalid_argument) if the root carries leaves, sibling names
  /// repeat, a name is not normalized, or an empty category has no content.
  ProfileTree(std::string owner_id, ProfileKind kind, CategoryNode root);

  const std::string& owner_id() const noexcept { return owner_id_; }
  ProfileKind kind() const noexcept { return kind_; }
  const CategoryNode& root() const noexcept { return root_; }

  /// Top-level category names in tree order.
  std::vector<std::string> categories() const;

  const CategoryNode* find(const CategoryPath& path) const;

  friend bool operator==(const ProfileTree&, const ProfileTree&) = default;

 private:
  std::string owner_id_;
  ProfileKind kind_;
  CategoryNode root_;
};

// --- construction ------------------------------------------------------------

/// Which record fields become categories, and under what names.
struct CategoryField {
  std::string name;   // category label in the tree
  std::string field;  // gender|age|education|job|location|posts|page_meta.topics|page_meta.category|extra.<key>
};

struct ProfileSchema {
  std::vector<CategoryField> categories;
  /// Unknown record keys go under an `extra` category (sub-category per key).
  bool include_extra = true;

  /// gender, age, education, job, posts.
  static ProfileSchema defaults();
  static ProfileSchema from_json(const nlohmann::json& j);
};

class ProfileBuilder {
 public:
  ProfileBuilder(ProfileSchema schema, TokenizerConfig tokenizer);
  ProfileBuilder();

  /// One category node per populated field; all posts aggregated into one
  /// text document leaf. Throws Error(empty_profile) when nothing is populated.
  ProfileTree build(const ProfileRecord& record) const;

  const ProfileSchema& schema() const noexcept { return schema_; }
  const TokenizerConfig& tokenizer() const noexcept { return tokenizer_; }

 private:
  ProfileSchema schema_;
  TokenizerConfig tokenizer_;
};

ProfileTree build_profile(const ProfileRecord& record);

/// Top-level categories present in both trees, sorted.
std::vector<CategoryPath> common_categories(const ProfileTree& a, const ProfileTree& b);

/// Leaves of the sub-tree at `path` in document order (own leaves first, then
/// children depth-first). Empty when the path is absent.
std::vector<InstanceLeaf> leaves_at(const ProfileTree& tree, const CategoryPath& path);

}  // namespace brandmatch
