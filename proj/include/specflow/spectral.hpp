#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "specflow/common.hpp"
#include "specflow/galerkin.hpp"
#include "specflow/jacobi.hpp"
#include "specflow/model.hpp"

namespace specflow {

// Terms of the finite-dimensional reduction at a point z of the unit circle.
struct ReducedTerms {
  int dim_J1 = 0;
  int n_minus_b = 0;
  int kernel_b = 0;
  int lambda = 0;  // lambda(z) assembled from the reduction formula
};

struct IndexPack {
  int lambda_o = 0;
  int maslov = 0;
  int n_0 = 0;
  int n_per = 0;
  int dim_jper_cap_j0 = 0;
  int i_conc = 0;
  int n_minus_g = 0;
  int sf_gamma = 0;  // defining spectral flow at z = 1 (Galerkin)
  bool identity_ok = true;
};

struct ArcInfo {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  int lambda = 0;
  int d = 0;           // n_-(b_z) on the arc
  int kernel_dim = 0;  // kernel of b_z on the arc
};

struct JumpInfo {
  double theta = 0.0;
  int left = 0;   // arc value approaching from below
  int right = 0;  // arc value approaching from above
  int point = 0;  // lambda at the angle itself (Galerkin)
  int bound = 0;
};

struct LambdaProfile {
  std::vector<double> distinguished;  // theta = 0 plus unit-spectrum angles
  std::vector<ArcInfo> arcs;
  std::vector<JumpInfo> jumps;
  int value_at_1 = 0;
  bool z1_jump_checked = false;  // ran (1 not in spec(P)) and passed
  bool z1_ok = true;
  bool jump_bounds_ok = true;
};

// Shared context: monodromy data plus memoized per-angle reduction terms and
// Galerkin flows.  All mutation is construction-time or cache fills; the
// public surface is const.
class SystemAnalysis {
 public:
  explicit SystemAnalysis(GeodesicSystem sys, NumericConfig cfg = {});

  const GeodesicSystem& system() const { return sys_; }
  const NumericConfig& config() const { return cfg_; }
  const MonodromyData& monodromy() const { return mono_; }
  const Nullities& nulls() const { return nulls_; }
  int n() const { return sys_.n(); }
  int n_minus_g() const { return sys_.metric.n_minus; }

  int lambda_o() const;
  int maslov() const;
  const ReducedTerms& reduced_terms(cplx z) const;
  int lambda_reduced(cplx z) const { return reduced_terms(z).lambda; }
  int lambda_galerkin(cplx z) const;
  int concavity() const;

 private:
  GeodesicSystem sys_;
  NumericConfig cfg_;
  MonodromyData mono_;
  Nullities nulls_;
  mutable std::optional<int> lambda_o_;
  mutable std::optional<int> concavity_;
  mutable std::map<long long, ReducedTerms> reduced_cache_;
  mutable std::map<long long, int> galerkin_cache_;
};

int lambda_o(const GeodesicSystem& sys, const NumericConfig& cfg = {});
int maslov_index(const GeodesicSystem& sys, const NumericConfig& cfg = {});
int lambda_reduced(const GeodesicSystem& sys, cplx z,
                   const NumericConfig& cfg = {});
int lambda_galerkin(const GeodesicSystem& sys, cplx z,
                    const NumericConfig& cfg = {});

LambdaProfile lambda_profile(const SystemAnalysis& an, int grid_per_arc);
LambdaProfile lambda_profile(const GeodesicSystem& sys, int grid_per_arc,
                             const NumericConfig& cfg = {});

IndexPack index_pack(const SystemAnalysis& an);
IndexPack index_pack(const GeodesicSystem& sys, const NumericConfig& cfg = {});

enum class IterateMethod { fourier, direct, reduction };

int sf_iterate(const SystemAnalysis& an, int N, IterateMethod method);
int sf_iterate(const GeodesicSystem& sys, int N, IterateMethod method,
               const NumericConfig& cfg = {});

// Band-limited field V(t) = e^{i twist t} u(t) with u 1-periodic, held as a
// sparse mode list over the 2048-point sample grid it was built from.
class SampledField {
 public:
  SampledField() = default;
  SampledField(int n, double twist, int S);

  static SampledField from_samples(double twist,
                                   const std::vector<Eigen::VectorXcd>& samples);
  static SampledField from_modes(
      double twist, int n, int S,
      std::vector<std::pair<int, Eigen::VectorXcd>> modes);
  static SampledField random_trig(std::uint64_t seed, int n, int max_freq,
                                  int S = 2048);

  int dim() const { return n_; }
  int sample_count() const { return S_; }
  double twist() const { return twist_; }
  const std::vector<std::pair<int, Eigen::VectorXcd>>& modes() const {
    return modes_;
  }

  Eigen::VectorXcd eval(double t) const;
  Eigen::VectorXcd deriv(double t) const;
  std::vector<Eigen::VectorXcd> samples() const;
  double max_abs() const;

 private:
  int n_ = 0;
  int S_ = 2048;
  double twist_ = 0.0;
  std::vector<std::pair<int, Eigen::VectorXcd>> modes_;  // sorted by frequency
};

// V in H_1 -> (V_0, ..., V_{N-1}) with V_k(1) = e^{2 pi i k/N} V_k(0),
//   V_k(t) = (1/N) sum_j w^{-jk} V((t+j)/N).
std::vector<SampledField> fourier_split(const SampledField& V, int N);

// inverse map, V(t) = sum_k V_k(t N)
SampledField fourier_merge(const std::vector<SampledField>& fields, int N);

// quadrature of the form B_t on two fields
cplx form_B(const GeodesicSystem& sys, double t, const SampledField& V,
            const SampledField& W, int Q = NumericConfig{}.Q);

}  // namespace specflow
