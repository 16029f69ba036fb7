#pragma once

#include <boost/rational.hpp>
#include <optional>
#include <string>
#include <vector>

#include "specflow/spectral.hpp"

namespace specflow {

using Rational = boost::rational<long long>;

struct ArcDatum {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  int d = 0;  // n_-(b_z) on the arc
};

struct BoundCheck {
  std::string name;
  int N = 0;
  int P = 0;
  double lhs = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double margin = 0.0;  // min(lhs - lo, hi - lhs)
  bool pass = true;
};

enum class Growth { bounded, uniform_linear };

struct KGammaResult {
  double value = 0.0;
  std::optional<Rational> exact;  // when all arc angles are rational in pi
  std::vector<ArcDatum> arcs;
  double crosscheck_value = 0.0;  // B_N / N at the reference N
  double crosscheck_tol = 0.0;
};

struct LGammaResult {
  double value = 0.0;
  std::optional<Rational> exact;
  double crosscheck_value = 0.0;  // sf(gamma^N)/N, direct route
  double crosscheck_tol = 0.0;
};

struct GrowthReport {
  double K_gamma = 0.0;
  double L_gamma = 0.0;
  std::optional<Rational> K_exact;
  std::optional<Rational> L_exact;
  int C_gamma = 0;
  double alpha = 0.0;
  // largest deviations actually seen, so the looseness of alpha is visible
  double observed_dev_curlyB = 0.0;  // max |B_{N+P} - B_N - K P|
  double observed_dev_sf = 0.0;      // max |sf^{N+P} - sf^N - L P|
  Growth classification = Growth::bounded;
  std::vector<ArcDatum> arc_data;
  std::vector<int> curlyB;     // B_N for N = 1..N_max
  std::vector<int> sf_values;  // sf(gamma^(N)) for N = 1..N_max
  std::vector<BoundCheck> bound_checks;
  bool all_bounds_ok = true;
};

/// B_N = sum of n_-(b) over the N-th roots of unity
int curly_B(const SystemAnalysis& an, int N);
int curly_B(const GeodesicSystem& sys, int N, const NumericConfig& cfg = {});

KGammaResult K_gamma(const SystemAnalysis& an);
double K_gamma(const GeodesicSystem& sys, const NumericConfig& cfg = {});

LGammaResult L_gamma(const SystemAnalysis& an);
double L_gamma(const GeodesicSystem& sys, const NumericConfig& cfg = {});

GrowthReport growth_report(const SystemAnalysis& an, int N_max);
GrowthReport growth_report(const GeodesicSystem& sys, int N_max,
                           const NumericConfig& cfg = {});

/// closed-form iterate flow for hyperbolic systems; empty when the unit
/// circle meets the spectrum
std::optional<int> hyperbolic_sf(const SystemAnalysis& an, int N);
std::optional<int> hyperbolic_sf(const GeodesicSystem& sys, int N,
                                 const NumericConfig& cfg = {});

namespace detail {
std::optional<Rational> rational_approx(double x, long long max_den,
                                        double tol);
}

}  // namespace specflow
