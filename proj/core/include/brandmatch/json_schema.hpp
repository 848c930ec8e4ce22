#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace brandmatch {

struct SchemaViolation {
  std::string pointer;  // JSON pointer into the instance, "" for the root
  std::string message;
};

/// Validator for the JSON Schema subset used by the bundled schemas:
/// type, enum, properties, required, additionalProperties, items, minItems,
/// maxItems, minLength, maxLength, minimum, maximum, exclusiveMinimum and
/// local "$ref" into "#/definitions/...".
class JsonSchema {
 public:
  explicit JsonSchema(nlohmann::json schema);

  /// Parses a schema bundled with the library (see resource()).
  static JsonSchema bundled(std::string_view name);

  std::vector<SchemaViolation> validate(const nlohmann::json& instance) const;
  std::vector<SchemaViolation> validate(const nlohmann::ordered_json& instance) const;

  /// Throws Error(schema_error) listing the first few violations.
  void require_valid(const nlohmann::json& instance, std::string_view what) const;
  void require_valid(const nlohmann::ordered_json& instance, std::string_view what) const;

 private:
  nlohmann::json schema_;
};

}  // namespace brandmatch
