#include "brandmatch/json_schema.hpp"

#include <algorithm>
#include <cmath>

#include "brandmatch/error.hpp"
#include "brandmatch/resources.hpp"
#include "brandmatch/unicode.hpp"

namespace brandmatch {
namespace {

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

template <class Json>
bool has_type(const Json& v, std::string_view type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    if (v.is_number_float()) {
      double d = v.template get<double>();
      return std::isfinite(d) && std::floor(d) == d;
    }
    return false;
  }
  return false;
}

template <class Json>
class Validator {
 public:
  Validator(const nlohmann::json& root, std::vector<SchemaViolation>& out) : root_(root), out_(out) {}

  void check(const nlohmann::json& schema, const Json& v, const std::string& ptr) {
    if (schema.contains("$ref")) {
      check(resolve(schema["$ref"].get<std::string>()), v, ptr);
      return;
    }
    if (schema.contains("type")) {
      const auto& t = schema["type"];
      bool ok = false;
      if (t.is_string()) {
        ok = has_type(v, t.get<std::string>());
      } else {
        for (const auto& alt : t) ok = ok || has_type(v, alt.get<std::string>());
      }
      if (!ok) {
        fail(ptr, "expected type " + t.dump() + ", got " + std::string(v.type_name()));
        return;
      }
    }
    if (schema.contains("enum")) {
      bool found = false;
      const std::string dumped = v.dump();
      for (const auto& option : schema["enum"]) found = found || option.dump() == dumped;
      if (!found) fail(ptr, "value " + v.dump() + " not in " + schema["enum"].dump());
    }
    if (v.is_string()) check_string(schema, v.template get<std::string>(), ptr);
    if (v.is_number()) check_number(schema, v.template get<double>(), ptr);
    if (v.is_object()) check_object(schema, v, ptr);
    if (v.is_array()) check_array(schema, v, ptr);
  }

 private:
  const nlohmann::json& resolve(const std::string& ref) {
    if (!ref.starts_with("#")) throw Error(Errc::invalid_argument, "only local $ref supported: " + ref);
    return root_.at(nlohmann::json::json_pointer(ref.substr(1)));
  }

  void fail(const std::string& ptr, std::string message) {
    out_.push_back({ptr, std::move(message)});
  }

  void check_string(const nlohmann::json& schema, const std::string& s, const std::string& ptr) {
    const auto len = unicode::code_points(s);
    if (schema.contains("minLength") && len < schema["minLength"].get<std::size_t>()) {
      fail(ptr, "string shorter than " + schema["minLength"].dump());
    }
    if (schema.contains("maxLength") && len > schema["maxLength"].get<std::size_t>()) {
      fail(ptr, "string longer than " + schema["maxLength"].dump());
    }
  }

  void check_number(const nlohmann::json& schema, double d, const std::string& ptr) {
    if (!std::isfinite(d)) fail(ptr, "number is not finite");
    if (schema.contains("minimum") && d < schema["minimum"].get<double>()) {
      fail(ptr, "value below minimum " + schema["minimum"].dump());
    }
    if (schema.contains("maximum") && d > schema["maximum"].get<double>()) {
      fail(ptr, "value above maximum " + schema["maximum"].dump());
    }
    if (schema.contains("exclusiveMinimum") && d <= schema["exclusiveMinimum"].get<double>()) {
      fail(ptr, "value must exceed " + schema["exclusiveMinimum"].dump());
    }
  }

  void check_object(const nlohmann::json& schema, const Json& v, const std::string& ptr) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!v.contains(key.get<std::string>())) fail(ptr, "missing required property '" + key.get<std::string>() + "'");
      }
    }
    const nlohmann::json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
    for (const auto& [key, value] : v.items()) {
      const std::string child = ptr + "/" + escape_pointer(key);
      if (props != nullptr && props->contains(key)) {
        check((*props)[key], value, child);
      } else if (schema.contains("additionalProperties")) {
        const auto& extra = schema["additionalProperties"];
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) fail(child, "unexpected property '" + key + "'");
        } else {
          check(extra, value, child);
        }
      }
    }
  }

  void check_array(const nlohmann::json& schema, const Json& v, const std::string& ptr) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>()) {
      fail(ptr, "array has fewer than " + schema["minItems"].dump() + " items");
    }
    if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>()) {
      fail(ptr, "array has more than " + schema["maxItems"].dump() + " items");
    }
    if (schema.contains("items")) {
      std::size_t i = 0;
      for (const auto& item : v) check(schema["items"], item, ptr + "/" + std::to_string(i++));
    }
  }

  const nlohmann::json& root_;
  std::vector<SchemaViolation>& out_;
};

std::string summarize(const std::vector<SchemaViolation>& violations, std::string_view what) {
  std::string msg = std::string(what) + " violates schema:";
  const std::size_t shown = std::min<std::size_t>(violations.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    msg += " [" + (violations[i].pointer.empty() ? std::string("/") : violations[i].pointer) + "] " +
           violations[i].message + ";";
  }
  if (violations.size() > shown) msg += " (" + std::to_string(violations.size() - shown) + " more)";
  return msg;
}

}  // namespace

JsonSchema::JsonSchema(nlohmann::json schema) : schema_(std::move(schema)) {}

JsonSchema JsonSchema::bundled(std::string_view name) {
  return JsonSchema(nlohmann::json::parse(resource(name)));
}

std::vector<SchemaViolation> JsonSchema::validate(const nlohmann::json& instance) const {
  std::vector<SchemaViolation> out;
  Validator<nlohmann::json>(schema_, out).check(schema_, instance, "");
  return out;
}

std::vector<SchemaViolation> JsonSchema::validate(const nlohmann::ordered_json& instance) const {
  std::vector<SchemaViolation> out;
  Validator<nlohmann::ordered_json>(schema_, out).check(schema_, instance, "");
  return out;
}

void JsonSchema::require_valid(const nlohmann::json& instance, std::string_view what) const {
  auto violations = validate(instance);
  if (!violations.empty()) throw Error(Errc::schema_error, summarize(violations, what));
}

void JsonSchema::require_valid(const nlohmann::ordered_json& instance, std::string_view what) const {
  auto violations = validate(instance);
  if (!violations.empty()) throw Error(Errc::schema_error, summarize(violations, what));
}

}  // namespace brandmatch
