#pragma once
// Shared basic types and error categories.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sio {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Raised when a computation cannot produce a trustworthy number
// (failed extrapolation, disagreeing cross-checks, under-resolved input).
// Input/precondition violations use std::invalid_argument instead.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Log-spaced grid with `per_decade` points per decade, endpoints included.
std::vector<double> log_grid(double lo, double hi, int per_decade);

}  // namespace sio
