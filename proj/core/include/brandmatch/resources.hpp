#pragma once

#include <string_view>

namespace brandmatch {

/// Data files and JSON schemas compiled into the library, addressed by their
/// source-tree path relative to core/ (e.g. "schemas/dataset.schema.json").
/// Throws Error(io_error) for unknown names.
std::string_view resource(std::string_view name);

}  // namespace brandmatch
