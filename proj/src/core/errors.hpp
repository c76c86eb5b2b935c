#pragma once

#include <stdexcept>

namespace ec {

// File/stream trouble, kept distinct from logic errors so API layers can map
// it to an IO status instead of a generic failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ec
