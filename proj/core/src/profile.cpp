#include "brandmatch/profile.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "brandmatch/error.hpp"
#include "brandmatch/resources.hpp"
#include "brandmatch/unicode.hpp"

namespace brandmatch {

std::string_view value_type_name(const InstanceValue& value) noexcept {
  switch (value.index()) {
    case 0: return "text";
    case 1: return "token";
    default: return "numeric";
  }
}

// --- CategoryPath ------------------------------------------------------------

CategoryPath::CategoryPath(std::vector<std::string> segments) : segments_(std::move(segments)) {
  for (auto& s : segments_) {
    s = unicode::fold_case(unicode::trim(s));
    if (s.empty()) throw Error(Errc::invalid_argument, "category path segments must be non-empty");
  }
}

CategoryPath CategoryPath::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t slash = text.find('/', pos);
    parts.emplace_back(text.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos));
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  CategoryPath path(std::move(parts));
  return path;
}

CategoryPath CategoryPath::child(std::string_view name) const {
  auto segs = segments_;
  segs.emplace_back(name);
  return CategoryPath(std::move(segs));
}

std::string CategoryPath::to_string() const {
  std::string out;
  for (const auto& s : segments_) {
    if (!out.empty()) out += '/';
    out += s;
  }
  return out;
}

const CategoryNode* CategoryNode::find_child(std::string_view child_name) const {
  auto it = std::find_if(children.begin(), children.end(), [&](const CategoryNode& c) { return c.name == child_name; });
  return it == children.end() ? nullptr : &*it;
}

// --- ProfileTree -------------------------------------------------------------

namespace {

void validate_node(const CategoryNode& node, const std::string& where) {
  if (node.name.empty() || node.name != unicode::fold_case(node.name)) {
    throw Error(Errc::invalid_argument, "category name '" + node.name + "' at " + where + " is not normalized");
  }
  if (node.children.empty() && node.leaves.empty()) {
    throw Error(Errc::invalid_argument, "category " + where + " has neither sub-categories nor leaves");
  }
  std::set<std::string_view> seen;
  for (const auto& child : node.children) {
    if (!seen.insert(child.name).second) {
      throw Error(Errc::invalid_argument, "duplicate sub-category '" + child.name + "' under " + where);
    }
    validate_node(child, where + "/" + child.name);
  }
  for (const auto& leaf : node.leaves) {
    if (const auto* doc = std::get_if<TextDocument>(&leaf.value); doc && doc->text.empty()) {
      throw Error(Errc::invalid_argument, "empty text leaf under " + where);
    }
    if (const auto* num = std::get_if<NumericValue>(&leaf.value); num && !std::isfinite(num->value)) {
      throw Error(Errc::invalid_argument, "non-finite numeric leaf under " + where);
    }
  }
}

}  // namespace

ProfileTree::ProfileTree(std::string owner_id, ProfileKind kind, CategoryNode root)
    : owner_id_(std::move(owner_id)), kind_(kind), root_(std::move(root)) {
  if (owner_id_.empty()) throw Error(Errc::invalid_argument, "profile owner_id must be non-empty");
  if (!root_.leaves.empty()) throw Error(Errc::invalid_argument, "profile root must not carry instance leaves");
  if (root_.children.empty()) throw Error(Errc::empty_profile, "profile '" + owner_id_ + "' has no categories");
  std::set<std::string_view> seen;
  for (const auto& category : root_.children) {
    if (!seen.insert(category.name).second) {
      throw Error(Errc::invalid_argument, "duplicate category '" + category.name + "' in " + owner_id_);
    }
    validate_node(category, category.name);
  }
}

std::vector<std::string> ProfileTree::categories() const {
  std::vector<std::string> out;
  for (const auto& c : root_.children) out.push_back(c.name);
  return out;
}

const CategoryNode* ProfileTree::find(const CategoryPath& path) const {
  if (path.empty()) return nullptr;
  const CategoryNode* node = &root_;
  for (const auto& seg : path.segments()) {
    node = node->find_child(seg);
    if (node == nullptr) return nullptr;
  }
  return node;
}

// --- ProfileSchema -----------------------------------------------------------

namespace {

bool known_field(std::string_view field) {
  static constexpr std::string_view kFields[] = {"gender", "age",  "education", "job", "location",
                                                 "posts",  "page_meta.topics", "page_meta.category"};
  if (std::find(std::begin(kFields), std::end(kFields), field) != std::end(kFields)) return true;
  return field.starts_with("extra.") && field.size() > 6;
}

}  // namespace

ProfileSchema ProfileSchema::defaults() {
  static const ProfileSchema schema = from_json(nlohmann::json::parse(resource("data/categories.json")));
  return schema;
}

ProfileSchema ProfileSchema::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("categories") || !j["categories"].is_array()) {
    throw Error(Errc::invalid_config, "category configuration needs a 'categories' array");
  }
  ProfileSchema schema;
  schema.include_extra = j.value("include_extra", true);
  std::set<std::string> names;
  for (const auto& entry : j["categories"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string()) {
      throw Error(Errc::invalid_config, "category entry needs a string 'name'");
    }
    CategoryField field;
    field.name = unicode::fold_case(unicode::trim(entry["name"].get<std::string>()));
    field.field = entry.value("field", field.name);
    if (field.name.empty()) throw Error(Errc::invalid_config, "category name must be non-empty");
    if (field.name == "extra" && schema.include_extra) {
      throw Error(Errc::invalid_config, "category name 'extra' is reserved while include_extra is on");
    }
    if (!known_field(field.field)) throw Error(Errc::invalid_config, "unknown record field '" + field.field + "'");
    if (!names.insert(field.name).second) throw Error(Errc::invalid_config, "duplicate category '" + field.name + "'");
    schema.categories.push_back(std::move(field));
  }
  return schema;
}

// --- ProfileBuilder ----------------------------------------------------------

namespace {

class NodeBuilder {
 public:
  explicit NodeBuilder(const TokenizerConfig& tokenizer) : tokenizer_(tokenizer) {}

  std::optional<TextDocument> text(std::string_view raw) const {
    std::string text = unicode::collapse_whitespace(unicode::nfc(raw));
    if (text.empty()) return std::nullopt;
    return TextDocument{text, tokenize(text, tokenizer_)};
  }

  static std::optional<CategoricalToken> token(std::string_view raw) {
    std::string v = unicode::fold_case(unicode::collapse_whitespace(raw));
    if (v.empty()) return std::nullopt;
    return CategoricalToken{std::move(v)};
  }

  // Converts an arbitrary JSON value into leaves/children of `node`.
  void add_json(CategoryNode& node, const nlohmann::ordered_json& value, const std::string& source) const {
    switch (value.type()) {
      case nlohmann::ordered_json::value_t::string:
        if (auto t = token(value.get_ref<const std::string&>())) node.leaves.push_back({*t, source});
        break;
      case nlohmann::ordered_json::value_t::boolean:
        node.leaves.push_back({CategoricalToken{value.get<bool>() ? "true" : "false"}, source});
        break;
      case nlohmann::ordered_json::value_t::number_integer:
      case nlohmann::ordered_json::value_t::number_unsigned:
      case nlohmann::ordered_json::value_t::number_float:
        if (double d = value.get<double>(); std::isfinite(d)) node.leaves.push_back({NumericValue{d, ""}, source});
        break;
      case nlohmann::ordered_json::value_t::array:
        for (const auto& item : value) add_json(node, item, source);
        break;
      case nlohmann::ordered_json::value_t::object:
        for (const auto& [key, item] : value.items()) {
          std::string name = unicode::fold_case(unicode::trim(key));
          if (name.empty()) continue;
          CategoryNode& child = child_of(node, name);
          add_json(child, item, source + "." + key);
        }
        prune(node);
        break;
      default:
        break;
    }
  }

  static CategoryNode& child_of(CategoryNode& node, const std::string& name) {
    auto it = std::find_if(node.children.begin(), node.children.end(),
                           [&](const CategoryNode& c) { return c.name == name; });
    if (it != node.children.end()) return *it;
    node.children.push_back(CategoryNode{name, {}, {}});
    return node.children.back();
  }

  static void prune(CategoryNode& node) {
    for (auto& c : node.children) prune(c);
    std::erase_if(node.children, [](const CategoryNode& c) { return c.children.empty() && c.leaves.empty(); });
  }

 private:
  const TokenizerConfig& tokenizer_;
};

void fill_field(const NodeBuilder& nb, CategoryNode& node, const ProfileRecord& record, std::string_view field) {
  if (field == "gender") {
    if (record.gender) {
      if (auto t = NodeBuilder::token(*record.gender)) node.leaves.push_back({*t, "record.gender"});
    }
  } else if (field == "age") {
    if (record.age) node.leaves.push_back({NumericValue{static_cast<double>(*record.age), "years"}, "record.age"});
  } else if (field == "education" || field == "job" || field == "location") {
    const auto& value = field == "education" ? record.education : field == "job" ? record.job : record.location;
    if (value) {
      if (auto doc = nb.text(*value)) node.leaves.push_back({std::move(*doc), "record." + std::string(field)});
    }
  } else if (field == "posts") {
    std::string joined;
    std::size_t used = 0;
    for (const auto& post : record.posts) {
      std::string p = unicode::collapse_whitespace(post);
      if (p.empty()) continue;
      if (!joined.empty()) joined += ' ';
      joined += p;
      ++used;
    }
    if (auto doc = nb.text(joined)) {
      node.leaves.push_back({std::move(*doc), "posts aggregate (" + std::to_string(used) + " posts)"});
    }
  } else if (field == "page_meta.topics") {
    if (record.page_meta) {
      for (const auto& topic : record.page_meta->topics) {
        if (auto t = NodeBuilder::token(topic)) node.leaves.push_back({*t, "page_meta.topics"});
      }
    }
  } else if (field == "page_meta.category") {
    if (record.page_meta && record.page_meta->category) {
      if (auto t = NodeBuilder::token(*record.page_meta->category)) node.leaves.push_back({*t, "page_meta.category"});
    }
  } else if (field.starts_with("extra.")) {
    std::string key(field.substr(6));
    if (record.extra.contains(key)) nb.add_json(node, record.extra[key], "extra." + key);
  }
}

}  // namespace

ProfileBuilder::ProfileBuilder(ProfileSchema schema, TokenizerConfig tokenizer)
    : schema_(std::move(schema)), tokenizer_(std::move(tokenizer)) {}

ProfileBuilder::ProfileBuilder() : ProfileBuilder(ProfileSchema::defaults(), TokenizerConfig::defaults()) {}

ProfileTree ProfileBuilder::build(const ProfileRecord& record) const {
  if (record.owner_id.empty()) throw Error(Errc::invalid_argument, "record owner_id must be non-empty");
  NodeBuilder nb(tokenizer_);
  CategoryNode root{"", {}, {}};
  for (const auto& category : schema_.categories) {
    CategoryNode node{category.name, {}, {}};
    fill_field(nb, node, record, category.field);
    NodeBuilder::prune(node);
    if (!node.leaves.empty() || !node.children.empty()) root.children.push_back(std::move(node));
  }
  if (schema_.include_extra && !record.extra.empty()) {
    CategoryNode extra{"extra", {}, {}};
    nb.add_json(extra, record.extra, "extra");
    if (!extra.children.empty()) root.children.push_back(std::move(extra));
  }
  if (root.children.empty()) {
    throw Error(Errc::empty_profile, "record '" + record.owner_id + "' has no populated category");
  }
  return ProfileTree(record.owner_id, record.kind, std::move(root));
}

ProfileTree build_profile(const ProfileRecord& record) {
  static const ProfileBuilder builder;
  return builder.build(record);
}

// --- structural queries ------------------------------------------------------

std::vector<CategoryPath> common_categories(const ProfileTree& a, const ProfileTree& b) {
  std::vector<CategoryPath> out;
  for (const auto& category : a.root().children) {
    if (b.root().find_child(category.name) != nullptr) out.emplace_back(std::vector<std::string>{category.name});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void collect_leaves(const CategoryNode& node, std::vector<InstanceLeaf>& out) {
  out.insert(out.end(), node.leaves.begin(), node.leaves.end());
  for (const auto& child : node.children) collect_leaves(child, out);
}

}  // namespace

std::vector<InstanceLeaf> leaves_at(const ProfileTree& tree, const CategoryPath& path) {
  std::vector<InstanceLeaf> out;
  if (const CategoryNode* node = tree.find(path)) collect_leaves(*node, out);
  return out;
}

}  // namespace brandmatch
