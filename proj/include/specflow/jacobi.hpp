#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specflow/common.hpp"
#include "specflow/model.hpp"

namespace specflow {

struct EigenvalueInfo {
  cplx value;
  int algebraic = 0;
  int geometric = 0;
};

struct UnitSpectrum {
  std::vector<double> angles;            // in (0, 2pi), sorted
  std::vector<EigenvalueInfo> entries;   // parallel to angles
  bool has_eigenvalue_one = false;
  int one_algebraic = 0;
  int one_geometric = 0;
  double tol_circle = 0.0;
  double tol_angle = 0.0;
};

struct Nullities {
  int n_0 = 0;              // fixed-endpoint nullity
  int n_per = 0;            // dim Ker(P - Id)
  int dim_jper_cap_j0 = 0;  // fixed vectors of the form (0, v')
};

// Fundamental solution of the linearized flow and the time-one map.
// The propagator evolves plain (value, derivative) pairs; the Poincare map is
// expressed in covariant (value, covariant derivative) coordinates, where it
// preserves the symplectic form with matrix [[0, G], [-G, 0]].
struct MonodromyData {
  int n = 0;
  double rtol = 0.0;
  Eigen::VectorXd epsilon;
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> fundamental;
  Eigen::MatrixXd poincare;
  double symplectic_residual = 0.0;
  double scale = 1.0;  // largest singular value of the Poincare map
  std::vector<EigenvalueInfo> spectrum;
  UnitSpectrum unit;

  Eigen::MatrixXd G() const { return epsilon.asDiagonal(); }
};

MonodromyData fundamental_solution(const GeodesicSystem& sys, double rtol,
                                   const NumericConfig& cfg = {});

UnitSpectrum unit_spectrum(const MonodromyData& mono, double tol_circle,
                           double tol_angle);

Nullities nullities(const MonodromyData& mono,
                    double tau_rank = NumericConfig{}.tau_rank);

// Hermitian boundary form on the solution space J2(z) = { V : V(1) = z V(0) },
// b_z(V, W) = G(conj(z) DV(1) - DV(0), W(0)); the connection terms cancel on
// J2(z) for every |z| = 1, so covariant initial data is all that is needed.
struct BoundaryForm {
  cplx z;
  Eigen::MatrixXcd basis;   // orthonormal columns of covariant initial data
  Eigen::MatrixXcd matrix;  // form on that basis
  int n_minus = 0;
  int nullity = 0;
  int n_plus = 0;
  double herm_residual = 0.0;
};

BoundaryForm boundary_form(const MonodromyData& mono, cplx z,
                           const NumericConfig& cfg = {});

/// negative index of b_1 on the fields with matching endpoint values
int concavity_index(const MonodromyData& mono, const NumericConfig& cfg = {});

/// dim of { double-vanishing solutions with V'(1) = z V'(0) }
int dim_J1(const MonodromyData& mono, cplx z,
           double tau_rank = NumericConfig{}.tau_rank);

/// dim Ker(P - z Id)
int kernel_dim_poincare(const MonodromyData& mono, cplx z,
                        double tau_rank = NumericConfig{}.tau_rank);

}  // namespace specflow
