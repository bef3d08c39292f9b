#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blockess {

// Bad parameter, index or specification supplied by the caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A correlation (sub)matrix failed to factor. `pivot()` is the 0-based
// row at which the factorization broke down.
class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(std::size_t pivot, const std::string& context)
      : std::runtime_error("matrix is not positive definite (pivot " +
                           std::to_string(pivot) + ")" +
                           (context.empty() ? "" : ": " + context)),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

// The requested computation exceeds a configured dense-size cap.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blockess
