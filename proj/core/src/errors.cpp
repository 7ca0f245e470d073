#include "coldgas/errors.hpp"

#include <utility>

namespace coldgas {

Error::Error(std::string module, std::string kind, const std::string& message)
    : std::runtime_error(module + "." + kind + ": " + message),
      module_(std::move(module)),
      kind_(std::move(kind)) {}

}  // namespace coldgas
