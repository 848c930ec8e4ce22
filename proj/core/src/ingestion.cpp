#include "brandmatch/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "brandmatch/digest.hpp"
#include "brandmatch/error.hpp"
#include "brandmatch/json_schema.hpp"
#include "brandmatch/resources.hpp"
#include "brandmatch/unicode.hpp"

namespace brandmatch {

std::string_view to_string(ProfileKind kind) noexcept {
  return kind == ProfileKind::brand_page ? "brand_page" : "user";
}

ProfileKind parse_profile_kind(std::string_view text) {
  if (text == "user") return ProfileKind::user;
  if (text == "brand_page") return ProfileKind::brand_page;
  throw Error(Errc::invalid_field, "unknown profile kind '" + std::string(text) + "'");
}

const ProfileRecord* Dataset::find(std::string_view owner_id) const {
  for (const auto* list : {&users, &pages}) {
    for (const auto& r : *list) {
      if (r.owner_id == owner_id) return &r;
    }
  }
  return nullptr;
}

std::size_t IngestReport::dropped_records() const {
  return static_cast<std::size_t>(
      std::count_if(drops.begin(), drops.end(), [](const DropEntry& d) { return d.item == "record"; }));
}

nlohmann::json IngestReport::to_json() const {
  nlohmann::json drops_json = nlohmann::json::array();
  for (const auto& d : drops) {
    drops_json.push_back({{"item", d.item}, {"owner_id", d.owner_id}, {"location", d.location}, {"reason", d.reason}});
  }
  return {{"input_records", input_records},
          {"output_records", input_records - dropped_records()},
          {"dropped_records", dropped_records()},
          {"dropped_posts", drops.size() - dropped_records()},
          {"drops", std::move(drops_json)}};
}

// --- gender table ------------------------------------------------------------

const GenderTable& GenderTable::defaults() {
  static const GenderTable table = from_json(nlohmann::json::parse(resource("data/gender_variants.json")));
  return table;
}

GenderTable GenderTable::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::invalid_config, "gender table must map codes to variant lists");
  GenderTable table;
  for (const auto& [code, variants] : j.items()) {
    if (code != "m" && code != "f" && code != "other") {
      throw Error(Errc::invalid_config, "gender code must be m, f or other, got '" + code + "'");
    }
    if (!variants.is_array()) throw Error(Errc::invalid_config, "variants for '" + code + "' must be an array");
    for (const auto& v : variants) {
      std::string key = unicode::fold_case(unicode::trim(v.get<std::string>()));
      auto [it, inserted] = table.variants_.emplace(key, code);
      if (!inserted && it->second != code) {
        throw Error(Errc::invalid_config, "gender variant '" + key + "' maps to both " + it->second + " and " + code);
      }
    }
    table.variants_.emplace(code, code);
  }
  return table;
}

std::optional<std::string> GenderTable::lookup(std::string_view raw) const {
  auto it = variants_.find(unicode::fold_case(unicode::trim(raw)));
  if (it == variants_.end()) return std::nullopt;
  return it->second;
}

// --- posts -------------------------------------------------------------------

namespace {

struct PostVerdict {
  std::size_t index;
  std::string reason;  // empty when kept
};

std::vector<PostVerdict> judge_posts(const std::vector<std::string>& posts) {
  std::vector<PostVerdict> out;
  std::map<std::vector<std::string>, std::size_t> first_seen;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    auto tokens = raw_tokens(posts[i]);
    if (tokens.empty()) {
      out.push_back({i, "post has no text content"});
      continue;
    }
    auto [it, inserted] = first_seen.emplace(std::move(tokens), i);
    if (!inserted) {
      out.push_back({i, "duplicate of post " + std::to_string(it->second)});
    } else {
      out.push_back({i, ""});
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> clean_posts(const std::vector<std::string>& posts) {
  std::vector<std::string> out;
  for (const auto& v : judge_posts(posts)) {
    if (v.reason.empty()) out.push_back(posts[v.index]);
  }
  return out;
}

// --- record normalization ----------------------------------------------------

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(Errc::invalid_field, field + ": " + why);
}

std::optional<std::string> optional_text(const nlohmann::ordered_json& raw, const char* field) {
  if (!raw.contains(field) || raw[field].is_null()) return std::nullopt;
  if (!raw[field].is_string()) invalid(field, "expected a string");
  std::string v = unicode::collapse_whitespace(unicode::nfc(raw[field].get<std::string>()));
  if (v.empty()) return std::nullopt;
  return v;
}

std::optional<int> parse_age(const nlohmann::ordered_json& v) {
  long long years = 0;
  if (v.is_null()) return std::nullopt;
  if (v.is_number_integer()) {
    years = v.get<long long>();
  } else if (v.is_number_float()) {
    double d = v.get<double>();
    if (!std::isfinite(d) || std::floor(d) != d) invalid("age", "not a whole number of years");
    years = static_cast<long long>(d);
  } else if (v.is_string()) {
    std::string s = unicode::trim(v.get<std::string>());
    if (s.empty()) return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), years);
    if (ec != std::errc() || ptr != s.data() + s.size()) invalid("age", "'" + s + "' is not numeric");
  } else {
    invalid("age", "expected a number or numeric string");
  }
  if (years < 1 || years > 120) invalid("age", std::to_string(years) + " outside [1, 120]");
  return static_cast<int>(years);
}

std::uint64_t parse_follow_count(const nlohmann::ordered_json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) invalid("page_meta.follow_count", "must be >= 0");
  if (!v.is_string()) invalid("page_meta.follow_count", "expected an integer or a string such as \"2.7M\"");
  std::string s = unicode::trim(v.get<std::string>());
  double scale = 1.0;
  if (!s.empty()) {
    switch (s.back()) {
      case 'k': case 'K': scale = 1e3; s.pop_back(); break;
      case 'm': case 'M': scale = 1e6; s.pop_back(); break;
      case 'b': case 'B': scale = 1e9; s.pop_back(); break;
      default: break;
    }
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value) || value < 0) {
    invalid("page_meta.follow_count", "'" + v.get<std::string>() + "' is not a follower count");
  }
  return static_cast<std::uint64_t>(std::llround(value * scale));
}

PageMeta parse_page_meta(const nlohmann::ordered_json& v) {
  if (!v.is_object()) invalid("page_meta", "expected an object");
  PageMeta meta;
  if (v.contains("name")) {
    if (!v["name"].is_string()) invalid("page_meta.name", "expected a string");
    meta.name = unicode::collapse_whitespace(unicode::nfc(v["name"].get<std::string>()));
  }
  if (v.contains("category") && !v["category"].is_null()) {
    if (!v["category"].is_string()) invalid("page_meta.category", "expected a string");
    std::string c = unicode::collapse_whitespace(unicode::nfc(v["category"].get<std::string>()));
    if (!c.empty()) meta.category = std::move(c);
  }
  if (v.contains("topics")) {
    if (!v["topics"].is_array()) invalid("page_meta.topics", "expected an array");
    for (const auto& t : v["topics"]) {
      if (!t.is_string()) invalid("page_meta.topics", "expected strings");
      std::string topic = unicode::collapse_whitespace(unicode::nfc(t.get<std::string>()));
      if (!topic.empty()) meta.topics.push_back(std::move(topic));
    }
  }
  if (v.contains("follow_count")) meta.follow_count = parse_follow_count(v["follow_count"]);
  return meta;
}

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {"owner_id", "kind",     "gender", "age",      "education",
                                                          "job",      "location", "posts",  "page_meta"};
  return keys;
}

}  // namespace

ProfileRecord normalize_record(const nlohmann::ordered_json& raw, ProfileKind expected_kind, const GenderTable& genders) {
  if (!raw.is_object()) invalid("record", "expected an object");
  ProfileRecord rec;
  if (!raw.contains("owner_id") || !raw["owner_id"].is_string()) invalid("owner_id", "missing or not a string");
  rec.owner_id = unicode::nfc(unicode::trim(raw["owner_id"].get<std::string>()));
  if (rec.owner_id.empty()) invalid("owner_id", "empty after trimming");

  rec.kind = expected_kind;
  if (raw.contains("kind")) {
    if (!raw["kind"].is_string()) invalid("kind", "expected a string");
    ProfileKind declared = parse_profile_kind(raw["kind"].get<std::string>());
    if (declared != expected_kind) {
      invalid("kind", "record declares " + std::string(to_string(declared)) + " but is listed under " +
                          (expected_kind == ProfileKind::user ? "users" : "pages"));
    }
  }

  if (raw.contains("gender") && !raw["gender"].is_null()) {
    if (!raw["gender"].is_string()) invalid("gender", "expected a string");
    const auto& g = raw["gender"].get_ref<const std::string&>();
    if (!unicode::trim(g).empty()) {
      auto code = genders.lookup(g);
      if (!code) invalid("gender", "unrecognized value '" + g + "'");
      rec.gender = *code;
    }
  }
  if (raw.contains("age")) rec.age = parse_age(raw["age"]);
  rec.education = optional_text(raw, "education");
  rec.job = optional_text(raw, "job");
  rec.location = optional_text(raw, "location");

  if (raw.contains("posts")) {
    if (!raw["posts"].is_array()) invalid("posts", "expected an array of strings");
    for (const auto& p : raw["posts"]) {
      if (!p.is_string()) invalid("posts", "expected an array of strings");
      rec.posts.push_back(unicode::trim(unicode::nfc(p.get<std::string>())));
    }
  }
  if (raw.contains("page_meta") && !raw["page_meta"].is_null()) rec.page_meta = parse_page_meta(raw["page_meta"]);

  for (const auto& [key, value] : raw.items()) {
    if (!known_keys().contains(key)) rec.extra[key] = value;
  }
  return rec;
}

// --- dataset -----------------------------------------------------------------

namespace {

std::vector<SourceDigest> parse_provenance(const nlohmann::ordered_json& j) {
  std::vector<SourceDigest> out;
  if (!j.contains("provenance")) return out;
  for (const auto& s : j["provenance"]["sources"]) {
    out.push_back({s["file"].get<std::string>(), s["sha256"].get<std::string>()});
  }
  return out;
}

}  // namespace

LoadedDataset parse_dataset(const nlohmann::ordered_json& j, const IngestOptions& options) {
  static const JsonSchema schema = JsonSchema::bundled("schemas/dataset.schema.json");
  schema.require_valid(j, "dataset");

  const GenderTable& genders = options.genders != nullptr ? *options.genders : GenderTable::defaults();
  LoadedDataset out;
  out.dataset.provenance = parse_provenance(j);

  std::set<std::string> ids;
  for (const auto& [list, kind] : {std::pair{"users", ProfileKind::user}, std::pair{"pages", ProfileKind::brand_page}}) {
    const auto& raw_list = j[list];
    auto& target = kind == ProfileKind::user ? out.dataset.users : out.dataset.pages;
    for (std::size_t i = 0; i < raw_list.size(); ++i) {
      const auto& raw = raw_list[i];
      const std::string where = std::string("/") + list + "/" + std::to_string(i);
      const std::string id = unicode::nfc(unicode::trim(raw["owner_id"].get<std::string>()));
      ++out.report.input_records;
      if (!id.empty() && !ids.insert(id).second) {
        throw Error(Errc::duplicate_id, "owner_id '" + id + "' appears more than once (again at " + where + ")");
      }
      ProfileRecord rec;
      try {
        rec = normalize_record(raw, kind, genders);
      } catch (const Error& e) {
        if (e.code() != Errc::invalid_field) throw;
        out.report.drops.push_back({"record", id, where, e.what()});
        continue;
      }
      std::vector<std::string> kept;
      for (const auto& verdict : judge_posts(rec.posts)) {
        if (verdict.reason.empty()) {
          kept.push_back(std::move(rec.posts[verdict.index]));
        } else {
          out.report.drops.push_back(
              {"post", rec.owner_id, where + "/posts/" + std::to_string(verdict.index), verdict.reason});
        }
      }
      rec.posts = std::move(kept);
      target.push_back(std::move(rec));
    }
  }
  if (out.report.input_records == 0) throw Error(Errc::schema_error, "dataset contains no records");
  return out;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

LoadedDataset load_dataset(const std::filesystem::path& path, const IngestOptions& options) {
  const std::string text = read_file(path);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(Errc::schema_error, path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                        ": malformed JSON (" + e.what() + ")");
  }
  LoadedDataset out;
  try {
    out = parse_dataset(j, options);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  if (out.dataset.provenance.empty()) {
    out.dataset.provenance.push_back({path.filename().string(), sha256_hex(text)});
  }
  return out;
}

nlohmann::ordered_json record_to_json(const ProfileRecord& r) {
  nlohmann::ordered_json j;
  j["owner_id"] = r.owner_id;
  j["kind"] = to_string(r.kind);
  if (r.gender) j["gender"] = *r.gender;
  if (r.age) j["age"] = *r.age;
  if (r.education) j["education"] = *r.education;
  if (r.job) j["job"] = *r.job;
  if (r.location) j["location"] = *r.location;
  j["posts"] = r.posts;
  if (r.page_meta) {
    nlohmann::ordered_json meta;
    meta["name"] = r.page_meta->name;
    if (r.page_meta->category) meta["category"] = *r.page_meta->category;
    meta["topics"] = r.page_meta->topics;
    meta["follow_count"] = r.page_meta->follow_count;
    j["page_meta"] = std::move(meta);
  }
  for (const auto& [key, value] : r.extra.items()) j[key] = value;
  return j;
}

nlohmann::ordered_json dataset_to_json(const Dataset& d) {
  nlohmann::ordered_json j;
  j["users"] = nlohmann::ordered_json::array();
  for (const auto& r : d.users) j["users"].push_back(record_to_json(r));
  j["pages"] = nlohmann::ordered_json::array();
  for (const auto& r : d.pages) j["pages"].push_back(record_to_json(r));
  if (!d.provenance.empty()) {
    auto& sources = j["provenance"]["sources"] = nlohmann::ordered_json::array();
    for (const auto& s : d.provenance) sources.push_back({{"file", s.file}, {"sha256", s.sha256}});
  }
  return j;
}

std::string serialize_dataset(const Dataset& dataset) {
  return dataset_to_json(dataset).dump(2) + "\n";
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << serialize_dataset(dataset);
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

std::string dataset_digest(const Dataset& dataset) {
  return sha256_hex(serialize_dataset(dataset));
}

}  // namespace brandmatch
