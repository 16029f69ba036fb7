#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "specflow/common.hpp"
#include "specflow/model.hpp"

namespace specflow {

// Trial space for the Hermitian form path t -> B_t.
//
//   twisted(z):  t -> e^{i(theta + 2 pi k) t} e_j,  k = -K..K, z = e^{i theta};
//                every function satisfies V(1) = z V(0) exactly.
//   dirichlet:   t -> sin(m pi t) e_j,  m = 1..M;  vanishes at both endpoints.
struct TrialBasis {
  enum class Space { twisted, dirichlet };

  Space space = Space::twisted;
  double theta = 0.0;
  int K = 32;  // frequency half-range (twisted) or mode count (dirichlet)
  int n = 1;

  static TrialBasis twisted(cplx z, int K, int n);
  static TrialBasis dirichlet(int M, int n);

  int slots() const { return space == Space::twisted ? 2 * K + 1 : K; }
  int count() const { return n * slots(); }
  cplx z() const;
  double frequency(int slot) const;  // mu_k (twisted) or m*pi (dirichlet)
  cplx scalar_value(int slot, double t) const;
  cplx scalar_deriv(int slot, double t) const;
};

struct Inertia {
  int n_minus = 0;
  int n_zero = 0;
  int n_plus = 0;
};

// Eigenvalue counts of a Hermitian matrix with zero band
// tau * max(|eig|_max, scale_floor).
Inertia inertia_counts(const Eigen::MatrixXcd& herm, double tau,
                       double scale_floor = 0.0);

/// (eigenvalues < -tau*scale, |eigenvalues| <= tau*scale)
std::pair<int, int> strict_negative_index(const Eigen::MatrixXcd& herm,
                                          double tau);

struct CrossingEvent {
  double t_lo = 0.0;
  double t_hi = 0.0;
  int branch = 0;
  int direction = 0;  // +1 when the branch leaves the negative cone upward
};

// Discretized form path.  Endpoint matrices are kept eagerly; interior
// matrices come from assemble_at on demand (a dense P x m^2 complex store
// would reach hundreds of MB at the largest truncations).
struct GalerkinPath {
  TrialBasis basis;
  std::vector<double> times;  // t_0 = 0 < ... < t_P = T_end
  Eigen::MatrixXcd B_start;
  Eigen::MatrixXcd B_end;
  Eigen::MatrixXcd gram;  // H^1 inner product on the basis
  std::function<Eigen::MatrixXcd(double)> assemble_at;
  int kernel_start = 0;
  int kernel_end = 0;
  double quad_residual = 0.0;  // relative endpoint change when Q doubles
};

GalerkinPath assemble_path(const GeodesicSystem& sys, const TrialBasis& basis,
                           double T_end, int P, int Q,
                           bool check_quadrature = true,
                           const NumericConfig& cfg = {});

struct SpectralFlowResult {
  int value = 0;  // strict n_- at t_0 minus strict n_- at t_P
  int n_minus_start = 0;
  int n_minus_end = 0;
  int kernel_start = 0;
  int kernel_end = 0;
  bool crossings_computed = false;
  std::vector<CrossingEvent> crossings;
};

// Endpoint-difference spectral flow.  The form path is a compact perturbation
// of the signature symmetry V -> GV, so the value is determined by the
// endpoint inertias; the optional crossing log tracks eigenvalue branches
// across the time grid (overlap-matched eigenvectors, bisection refinement)
// for diagnostics.  Inertia counts are taken on the form matrix directly;
// the Gram-preconditioned pencil is congruent to it and yields the same
// counts.
SpectralFlowResult spectral_flow(const GalerkinPath& path,
                                 const NumericConfig& cfg = {},
                                 bool with_crossings = false);

struct StabilizedFlow {
  int value = 0;
  int truncation = 0;  // truncation that confirmed the value
  std::vector<int> truncations;
  std::vector<int> history;
};

// Runs the flow at truncations K0, 2*K0, ... and accepts the value once two
// consecutive truncations agree; throws StabilizationError past cfg.K_cap.
StabilizedFlow stabilized_spectral_flow(const GeodesicSystem& sys,
                                        TrialBasis::Space space, cplx z,
                                        double T_end,
                                        const NumericConfig& cfg = {});

// Matched eigenvalue branches on the time grid, for CSV dumps.
struct BranchData {
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[branch][time index]
};

BranchData eigenvalue_branches(const GalerkinPath& path,
                               const NumericConfig& cfg = {});

namespace detail {
void gauss_legendre(int q, std::vector<double>& nodes,
                    std::vector<double>& weights);
}

}  // namespace specflow
