#include "brandmatch/resources.hpp"

#include <string>

#include "brandmatch/error.hpp"

namespace brandmatch {
namespace detail {
std::string_view find_embedded(std::string_view name);
}

std::string_view resource(std::string_view name) {
  std::string_view data = detail::find_embedded(name);
  if (data.data() == nullptr) throw Error(Errc::io_error, "no embedded resource " + std::string(name));
  return data;
}

}  // namespace brandmatch
