#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace eitsim {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Bad input: malformed config file, out-of-range parameter, violated grid guard.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// The numerics gave up: NaN/divergence during marching, non-convergent steady state.
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eitsim
