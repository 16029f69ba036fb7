#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "specflow/common.hpp"

namespace specflow {

// Diagonal +-1 metric on R^n.  Arbitrary symmetric metrics are rejected at
// ingestion; inputs are expected pre-diagonalized to this normal form.
struct SignatureMetric {
  int n = 0;
  Eigen::VectorXd epsilon;  // entries in {-1,+1}
  int n_minus = 0;          // count of -1 entries

  Eigen::MatrixXd G() const { return epsilon.asDiagonal(); }
};

// 1-periodic real n x n matrix path.  Either a closed-form constant (presets)
// or a trigonometric interpolant of uniform samples over [0,1):
//   X(t) = A[0] + sum_f A[f] cos(2 pi f t) + B[f] sin(2 pi f t),
// with a cosine-only Nyquist term for even sample counts.  Smooth periodic
// data makes the interpolant spectrally accurate, and its derivative is exact.
class CoefficientPath {
 public:
  CoefficientPath() = default;
  static CoefficientPath constant(Eigen::MatrixXd value);
  static CoefficientPath from_samples(std::vector<Eigen::MatrixXd> grid);

  Eigen::MatrixXd eval(double t) const;
  Eigen::MatrixXd deriv(double t) const;

  bool is_constant() const { return constant_; }
  int dim() const { return n_; }
  int sample_count() const { return static_cast<int>(grid_.size()); }
  const std::vector<Eigen::MatrixXd>& samples() const { return grid_; }
  // highest active frequency, in cycles per period
  int bandwidth() const;

 private:
  bool constant_ = true;
  int n_ = 0;
  std::vector<Eigen::MatrixXd> cosA_;  // cosA_[f], f = 0..F
  std::vector<Eigen::MatrixXd> sinB_;  // sinB_[f], f = 1..F (index 0 unused)
  bool nyquist_ = false;               // even m: extra cos(pi m t) term
  Eigen::MatrixXd nyquistA_;
  int m_ = 0;  // sample count
  std::vector<Eigen::MatrixXd> grid_;
};

struct GeodesicSystem {
  SignatureMetric metric;
  CoefficientPath gamma;      // G-antisymmetric connection path
  CoefficientPath curvature;  // G-symmetric curvature path
  std::string label;

  int n() const { return metric.n; }
};

struct ValidationCheck {
  std::string name;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct ValidationReport {
  std::string label;
  std::vector<ValidationCheck> checks;
  bool pass = true;
};

// Canonical closed-form systems:
//   flat-R        n=1, G=+1, zero coefficients
//   flat-L        n=2, G=diag(1,-1), zero coefficients
//   hyp-L(c)      n=1, G=-1, curvature c > 0 (hyperbolic monodromy)
//   ell-R(a)      n=1, G=+1, curvature -(2 pi a)^2, 0 < a < 1/2
//   dirichlet-R   n=1, G=+1, curvature -(2 pi)^2
GeodesicSystem preset(const std::string& name);

// Config document: {"preset": name} or
// {"n":int, "epsilon":[...], "gamma":{"grid":[[n*n row-major],...]},
//  "curvature":{"grid":[...]}, "label":str}; grids sampled at t = j/m.
GeodesicSystem load_system(const nlohmann::json& doc);
GeodesicSystem load_system_file(const std::string& path);

// Sampled-form config document for round-tripping; presets are emitted as
// grids so the interpolation path is exercised.
nlohmann::ordered_json to_config_json(const GeodesicSystem& sys, int grid_m = 64);

ValidationReport validate_system(const GeodesicSystem& sys);

// Seed-fixed random G-compatible sampled system (n = 0 picks from {2,3,4}).
GeodesicSystem random_system(std::uint64_t seed, int n = 0);

namespace detail {
double structural_tolerance(const GeodesicSystem& sys);
}

}  // namespace specflow
