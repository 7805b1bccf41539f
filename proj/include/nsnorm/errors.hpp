#pragma once

#include <stdexcept>
#include <string>

namespace nsnorm {

/// Invalid grid, config or solver parameters.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A ratio whose denominator vanishes identically (zero field).
class undefined_ratio_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fewer samples than a finite-difference stencil needs.
class insufficient_data_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Integer rescaling pushed a populated mode out of the grid's band.
class rescale_overflow_error : public std::out_of_range {
 public:
  rescale_overflow_error(const std::string& what, long lambda)
      : std::out_of_range(what), lambda_(lambda) {}
  long lambda() const noexcept { return lambda_; }

 private:
  long lambda_;
};

/// Malformed snapshot / CSV input.
class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsnorm
