#include "brandmatch/error.hpp"

namespace brandmatch {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::empty_profile: return "EmptyProfile";
    case Errc::empty_document: return "EmptyDocument";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::kind_mismatch: return "KindMismatch";
    case Errc::missing_context: return "MissingContext";
    case Errc::schema_error: return "SchemaError";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::invalid_field: return "InvalidField";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::unknown_endpoint: return "UnknownEndpoint";
    case Errc::self_loop: return "SelfLoop";
    case Errc::unknown_node: return "UnknownNode";
    case Errc::unknown_brand: return "UnknownBrand";
    case Errc::empty_user_set: return "EmptyUserSet";
    case Errc::empty_class: return "EmptyClass";
    case Errc::io_error: return "IoError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_input_error(Errc code) noexcept {
  switch (code) {
    case Errc::missing_context:
    case Errc::invalid_argument:
      return false;
    default:
      return true;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace brandmatch
