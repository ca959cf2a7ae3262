#pragma once

#include <stdexcept>

namespace agmgan {

// Bad user input: unreadable files, malformed lines, out-of-range parameters.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Refusal to run a request that exceeds the desk-scale guards.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace agmgan
