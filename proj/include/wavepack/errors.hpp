#pragma once

#include <stdexcept>
#include <string>

namespace wavepack {

// A numeric invariant failed (rank deficiency, verification residual over
// tolerance, malformed binary payload...). The CLI maps this family to exit
// code 1, std::invalid_argument (bad caller input) to 2 and io_error to 3.
class invariant_error : public std::runtime_error {
 public:
  explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem or decode failure.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wavepack
