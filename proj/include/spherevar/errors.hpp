#pragma once

#include <stdexcept>

namespace spherevar {

// Raised when a request exceeds a documented ceiling (shell size, basis
// degree, grid resolution), as opposed to being malformed.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spherevar
