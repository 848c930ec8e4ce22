#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace brandmatch {

enum class Errc {
  empty_profile,
  empty_document,
  empty_corpus,
  kind_mismatch,
  missing_context,
  schema_error,
  duplicate_id,
  invalid_field,
  invalid_config,
  unknown_endpoint,
  self_loop,
  unknown_node,
  unknown_brand,
  empty_user_set,
  empty_class,
  io_error,
  invalid_argument,
};

std::string_view to_string(Errc code) noexcept;

/// True for errors caused by bad inputs or configuration (CLI exit code 2),
/// false for internal failures.
bool is_input_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace brandmatch
