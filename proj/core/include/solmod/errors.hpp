#pragma once

#include <stdexcept>
#include <string>

namespace solmod {

/// A field's translated or rescaled support no longer fits in the box.
struct SupportOverflow : std::runtime_error {
  explicit SupportOverflow(const std::string& what) : std::runtime_error(what) {}
};

/// Newton refinement of the modulation parameters failed to converge.
struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace solmod
