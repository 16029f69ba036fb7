#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace specflow {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Numeric defaults; every CLI override maps onto one of these fields.
struct NumericConfig {
  double rtol = 1e-10;      // ODE relative tolerance, valid range [1e-13, 1e-6]
  int K = 32;               // twisted truncation: frequencies -K..K (and M = K Dirichlet modes)
  int P = 64;               // time samples per form path
  int Q = 32;               // Gauss points per quadrature panel
  int N_max = 16;           // iterate range
  int grid_per_arc = 5;     // interior constancy points per spectrum arc
  int K_cap = 128;          // truncation ceiling for stabilization
  double tol_circle = 1e-7;   // |.|-distance from the unit circle
  double tol_angle = 1e-6;    // angular dedup of unit eigenvalues (radians)
  double tau_rank = 1e-7;     // rank threshold, relative to the problem scale
  double tau_inertia = 1e-8;  // inertia zero band, relative to the matrix/problem scale
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ComputationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Truncation sweep did not settle; carries the values seen.
struct StabilizationError : ComputationError {
  StabilizationError(const std::string& msg, std::vector<int> vals)
      : ComputationError(msg), values(std::move(vals)) {}
  std::vector<int> values;
};

// A time grid too coarse for the requested crossing diagnostics.
struct GridError : ComputationError {
  using ComputationError::ComputationError;
};

// A verified identity or bound failed; callers map this to exit status 2.
struct IdentityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace specflow
