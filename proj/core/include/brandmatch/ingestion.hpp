#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandmatch/record.hpp"
#include "brandmatch/tokenizer.hpp"

namespace brandmatch {

struct SourceDigest {
  std::string file;    // file name without directories
  std::string sha256;  // lowercase hex

  friend bool operator==(const SourceDigest&, const SourceDigest&) = default;
};

struct Dataset {
  std::vector<ProfileRecord> users;
  std::vector<ProfileRecord> pages;
  std::vector<SourceDigest> provenance;

  std::size_t size() const noexcept { return users.size() + pages.size(); }
  /// Linear search over users then pages.
  const ProfileRecord* find(std::string_view owner_id) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// One item removed during ingestion. `item` is "record" or "post".
struct DropEntry {
  std::string item;
  std::string owner_id;  // empty when the record had no usable id
  std::string location;  // JSON pointer of the dropped element
  std::string reason;

  friend bool operator==(const DropEntry&, const DropEntry&) = default;
};

struct IngestReport {
  std::size_t input_records = 0;
  std::vector<DropEntry> drops;

  std::size_t dropped_records() const;
  nlohmann::json to_json() const;
};

struct LoadedDataset {
  Dataset dataset;
  IngestReport report;
};

/// Maps free-form gender strings to "m" | "f" | "other". Ships as a data
/// file; any variant list can be supplied instead.
class GenderTable {
 public:
  static const GenderTable& defaults();
  static GenderTable from_json(const nlohmann::json& j);

  std::optional<std::string> lookup(std::string_view raw) const;

 private:
  std::map<std::string, std::string> variants_;
};

struct IngestOptions {
  TokenizerConfig tokenizer = TokenizerConfig::defaults();
  const GenderTable* genders = nullptr;  // nullptr: bundled table
};

/// Removes posts whose raw tokenization is empty and posts whose token
/// sequence repeats an earlier post; first occurrences keep their order.
std::vector<std::string> clean_posts(const std::vector<std::string>& posts);

/// Normalizes one parsed record. Unknown keys land in `extra`.
/// Throws Error(invalid_field) for unusable values (bad age, unknown gender,
/// wrong field types).
ProfileRecord normalize_record(const nlohmann::ordered_json& raw, ProfileKind expected_kind,
                               const GenderTable& genders = GenderTable::defaults());

/// Validates `j` against the bundled dataset schema, then normalizes and
/// cleans each record. Records failing normalization are dropped and
/// reported. Throws Error(schema_error) for structural problems and
/// Error(duplicate_id) when an owner_id repeats across users and pages.
LoadedDataset parse_dataset(const nlohmann::ordered_json& j, const IngestOptions& options = {});

/// Reads, parses and ingests a dataset file. Parse errors report line and
/// column. Provenance is the embedded provenance block when present,
/// otherwise the file's own digest.
LoadedDataset load_dataset(const std::filesystem::path& path, const IngestOptions& options = {});

nlohmann::ordered_json record_to_json(const ProfileRecord& record);
nlohmann::ordered_json dataset_to_json(const Dataset& dataset);

/// Canonical serialization (2-space indent, trailing newline).
std::string serialize_dataset(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// SHA-256 of the canonical serialization.
std::string dataset_digest(const Dataset& dataset);

}  // namespace brandmatch
