#include "specflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace specflow {

namespace {

// angle in [0, 2pi), with keys stable across re-derivations of the same root
double normalized_angle(cplx z) {
  double th = std::arg(z);
  if (th < 0) th += kTwoPi;
  if (th > kTwoPi - 1e-9) th = 0.0;
  return th;
}

long long angle_key(double theta) {
  return llround(theta * 1e12);
}

bool is_one(double theta) { return theta < 1e-9; }

}  // namespace

SystemAnalysis::SystemAnalysis(GeodesicSystem sys, NumericConfig cfg)
    : sys_(std::move(sys)),
      cfg_(cfg),
      mono_(fundamental_solution(sys_, cfg.rtol, cfg)),
      nulls_(nullities(mono_, cfg.tau_rank)) {}

int SystemAnalysis::lambda_o() const {
  if (!lambda_o_) {
    lambda_o_ = stabilized_spectral_flow(sys_, TrialBasis::Space::dirichlet,
                                         cplx{1.0, 0.0}, 1.0, cfg_)
                    .value;
  }
  return *lambda_o_;
}

int SystemAnalysis::maslov() const {
  return nulls_.n_0 - n_minus_g() - lambda_o();
}

int SystemAnalysis::concavity() const {
  if (!concavity_) concavity_ = concavity_index(mono_, cfg_);
  return *concavity_;
}

const ReducedTerms& SystemAnalysis::reduced_terms(cplx z) const {
  const double theta = normalized_angle(z);
  const long long key = angle_key(theta);
  auto it = reduced_cache_.find(key);
  if (it != reduced_cache_.end()) return it->second;

  const cplx zn = std::polar(1.0, theta);
  ReducedTerms terms;
  terms.dim_J1 = dim_J1(mono_, zn, cfg_.tau_rank);
  const BoundaryForm bf = boundary_form(mono_, zn, cfg_);
  terms.n_minus_b = bf.n_minus;
  terms.kernel_b = bf.nullity;
  terms.lambda = lambda_o() + (is_one(theta) ? 0 : n_minus_g()) -
                 nulls_.n_0 + terms.dim_J1 - terms.n_minus_b;
  return reduced_cache_.emplace(key, terms).first->second;
}

int SystemAnalysis::lambda_galerkin(cplx z) const {
  const double theta = normalized_angle(z);
  const long long key = angle_key(theta);
  auto it = galerkin_cache_.find(key);
  if (it != galerkin_cache_.end()) return it->second;
  const int value =
      stabilized_spectral_flow(sys_, TrialBasis::Space::twisted,
                               std::polar(1.0, theta), 1.0, cfg_)
          .value;
  galerkin_cache_.emplace(key, value);
  return value;
}

int lambda_o(const GeodesicSystem& sys, const NumericConfig& cfg) {
  return stabilized_spectral_flow(sys, TrialBasis::Space::dirichlet,
                                  cplx{1.0, 0.0}, 1.0, cfg)
      .value;
}

int maslov_index(const GeodesicSystem& sys, const NumericConfig& cfg) {
  return SystemAnalysis(sys, cfg).maslov();
}

int lambda_reduced(const GeodesicSystem& sys, cplx z,
                   const NumericConfig& cfg) {
  return SystemAnalysis(sys, cfg).lambda_reduced(z);
}

int lambda_galerkin(const GeodesicSystem& sys, cplx z,
                    const NumericConfig& cfg) {
  return SystemAnalysis(sys, cfg).lambda_galerkin(z);
}

LambdaProfile lambda_profile(const SystemAnalysis& an, int grid_per_arc) {
  if (grid_per_arc < 3) throw InputError("grid_per_arc must be at least 3");
  const UnitSpectrum& unit = an.monodromy().unit;

  LambdaProfile prof;
  prof.distinguished.push_back(0.0);
  for (double th : unit.angles) prof.distinguished.push_back(th);

  const auto k = prof.distinguished.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double lo = prof.distinguished[i];
    const double hi = i + 1 < k ? prof.distinguished[i + 1] : kTwoPi;

    ArcInfo arc;
    arc.theta_lo = lo;
    arc.theta_hi = hi;
    bool first = true;
    for (int g = 1; g <= grid_per_arc; ++g) {
      const double th = lo + (hi - lo) * g / (grid_per_arc + 1);
      const ReducedTerms& terms = an.reduced_terms(std::polar(1.0, th));
      if (first) {
        arc.lambda = terms.lambda;
        arc.d = terms.n_minus_b;
        arc.kernel_dim = terms.kernel_b;
        first = false;
      } else if (terms.lambda != arc.lambda || terms.n_minus_b != arc.d ||
                 terms.kernel_b != arc.kernel_dim) {
        throw ComputationError(
            "lambda not constant inside a spectrum-free arc; tolerances or "
            "the unit spectrum are suspect");
      }
    }
    prof.arcs.push_back(arc);
  }

  prof.value_at_1 = an.lambda_galerkin(cplx{1.0, 0.0});

  for (std::size_t i = 0; i < k; ++i) {
    const double th = prof.distinguished[i];
    JumpInfo jump;
    jump.theta = th;
    jump.left = prof.arcs[(i + k - 1) % k].lambda;
    jump.right = prof.arcs[i].lambda;
    jump.point = i == 0 ? prof.value_at_1
                        : an.lambda_galerkin(std::polar(1.0, th));
    // At theta = 0 the constant-field kernel of B_0 contributes n on top of
    // the eigenspace dimension; elsewhere the eigenspace bound applies as is.
    const int eig_dim =
        kernel_dim_poincare(an.monodromy(), std::polar(1.0, th),
                            an.config().tau_rank);
    jump.bound = i == 0 ? eig_dim + an.n() : eig_dim;
    if (i != 0 && std::abs(jump.left - jump.right) > jump.bound)
      prof.jump_bounds_ok = false;
    prof.jumps.push_back(jump);
  }

  if (!unit.has_eigenvalue_one) {
    prof.z1_jump_checked = true;
    const int expected = prof.value_at_1 + an.n_minus_g();
    if (prof.arcs.front().lambda != expected ||
        prof.arcs.back().lambda != expected) {
      prof.z1_ok = false;
      prof.z1_jump_checked = false;
    }
  }
  return prof;
}

LambdaProfile lambda_profile(const GeodesicSystem& sys, int grid_per_arc,
                             const NumericConfig& cfg) {
  return lambda_profile(SystemAnalysis(sys, cfg), grid_per_arc);
}

IndexPack index_pack(const SystemAnalysis& an) {
  IndexPack pack;
  pack.lambda_o = an.lambda_o();
  pack.maslov = an.maslov();
  pack.n_0 = an.nulls().n_0;
  pack.n_per = an.nulls().n_per;
  pack.dim_jper_cap_j0 = an.nulls().dim_jper_cap_j0;
  pack.i_conc = an.concavity();
  pack.n_minus_g = an.n_minus_g();
  pack.sf_gamma = an.lambda_galerkin(cplx{1.0, 0.0});
  pack.identity_ok = pack.sf_gamma == pack.dim_jper_cap_j0 - pack.maslov -
                                          pack.i_conc - pack.n_minus_g;
  return pack;
}

IndexPack index_pack(const GeodesicSystem& sys, const NumericConfig& cfg) {
  return index_pack(SystemAnalysis(sys, cfg));
}

int sf_iterate(const SystemAnalysis& an, int N, IterateMethod method) {
  if (N < 1) throw InputError("iterate count must be positive");
  switch (method) {
    case IterateMethod::fourier: {
      int sum = 0;
      for (int j = 0; j < N; ++j)
        sum += an.lambda_reduced(std::polar(1.0, kTwoPi * j / N));
      return sum;
    }
    case IterateMethod::direct:
      return stabilized_spectral_flow(an.system(), TrialBasis::Space::twisted,
                                      cplx{1.0, 0.0},
                                      static_cast<double>(N), an.config())
          .value;
    case IterateMethod::reduction: {
      int sum_J1 = 0, sum_b = 0;
      for (int j = 0; j < N; ++j) {
        const ReducedTerms& terms =
            an.reduced_terms(std::polar(1.0, kTwoPi * j / N));
        sum_J1 += terms.dim_J1;
        sum_b += terms.n_minus_b;
      }
      return -N * an.maslov() - an.n_minus_g() + sum_J1 - sum_b;
    }
  }
  throw InputError("unknown iterate method");
}

int sf_iterate(const GeodesicSystem& sys, int N, IterateMethod method,
               const NumericConfig& cfg) {
  return sf_iterate(SystemAnalysis(sys, cfg), N, method);
}

SampledField::SampledField(int n, double twist, int S)
    : n_(n), S_(S), twist_(twist) {}

SampledField SampledField::from_modes(
    double twist, int n, int S,
    std::vector<std::pair<int, Eigen::VectorXcd>> modes) {
  SampledField f(n, twist, S);
  std::sort(modes.begin(), modes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  f.modes_ = std::move(modes);
  return f;
}

SampledField SampledField::from_samples(
    double twist, const std::vector<Eigen::VectorXcd>& samples) {
  if (samples.empty()) throw InputError("empty field sample list");
  const int S = static_cast<int>(samples.size());
  const int n = static_cast<int>(samples[0].size());
  // remove the boundary twist, then a plain DFT of the periodic part
  std::vector<Eigen::VectorXcd> u(samples.size());
  for (int j = 0; j < S; ++j)
    u[j] = samples[j] * std::polar(1.0, -twist * j / S);

  SampledField f(n, twist, S);
  double peak = 0.0;
  for (const auto& s : u) peak = std::max(peak, s.cwiseAbs().maxCoeff());
  for (int freq = -S / 2; freq < (S + 1) / 2; ++freq) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
    for (int j = 0; j < S; ++j)
      c += u[j] * std::polar(1.0 / S, -kTwoPi * freq * j / S);
    if (c.cwiseAbs().maxCoeff() > 1e-13 * std::max(peak, 1.0))
      f.modes_.emplace_back(freq, std::move(c));
  }
  return f;
}

SampledField SampledField::random_trig(std::uint64_t seed, int n, int max_freq,
                                       int S) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::pair<int, Eigen::VectorXcd>> modes;
  for (int f = -max_freq; f <= max_freq; ++f) {
    Eigen::VectorXcd c(n);
    for (int i = 0; i < n; ++i)
      c[i] = cplx{unit(rng), unit(rng)} / (1.0 + std::abs(f));
    modes.emplace_back(f, std::move(c));
  }
  return from_modes(0.0, n, S, std::move(modes));
}

Eigen::VectorXcd SampledField::eval(double t) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_);
  for (const auto& [freq, c] : modes_)
    out += c * std::polar(1.0, (twist_ + kTwoPi * freq) * t);
  return out;
}

Eigen::VectorXcd SampledField::deriv(double t) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_);
  for (const auto& [freq, c] : modes_) {
    const double mu = twist_ + kTwoPi * freq;
    out += c * (cplx{0.0, mu} * std::polar(1.0, mu * t));
  }
  return out;
}

std::vector<Eigen::VectorXcd> SampledField::samples() const {
  std::vector<Eigen::VectorXcd> out(S_);
  for (int j = 0; j < S_; ++j) out[j] = eval(static_cast<double>(j) / S_);
  return out;
}

double SampledField::max_abs() const {
  double m = 0.0;
  for (const auto& [freq, c] : modes_)
    m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

std::vector<SampledField> fourier_split(const SampledField& V, int N) {
  if (N < 1) throw InputError("split order must be positive");
  if (std::abs(V.twist()) > 1e-10)
    throw InputError("split input must be 1-periodic (zero twist)");

  std::vector<std::vector<std::pair<int, Eigen::VectorXcd>>> modes(N);
  for (const auto& [freq, c] : V.modes()) {
    const int k = ((freq % N) + N) % N;
    modes[k].emplace_back((freq - k) / N, c);
  }
  std::vector<SampledField> out;
  out.reserve(N);
  for (int k = 0; k < N; ++k)
    out.push_back(SampledField::from_modes(kTwoPi * k / N, V.dim(),
                                           V.sample_count(), std::move(modes[k])));
  return out;
}

SampledField fourier_merge(const std::vector<SampledField>& fields, int N) {
  if (static_cast<int>(fields.size()) != N)
    throw InputError("merge expects exactly N fields");
  const int n = fields[0].dim();
  const int S = fields[0].sample_count();
  std::vector<std::pair<int, Eigen::VectorXcd>> modes;
  for (int k = 0; k < N; ++k) {
    const SampledField& f = fields[k];
    if (f.dim() != n || f.sample_count() != S)
      throw InputError("merge fields have mismatched shapes");
    if (std::abs(f.twist() - kTwoPi * k / N) > 1e-10)
      throw InputError("boundary-twist violation in merge input");
    for (const auto& [freq, c] : f.modes()) modes.emplace_back(k + N * freq, c);
  }
  return SampledField::from_modes(0.0, n, S, std::move(modes));
}

cplx form_B(const GeodesicSystem& sys, double t, const SampledField& V,
            const SampledField& W, int Q) {
  const Eigen::VectorXd& eps = sys.metric.epsilon;
  auto gform = [&](const Eigen::VectorXcd& u, const Eigen::VectorXcd& w) {
    cplx s = 0.0;
    for (int i = 0; i < eps.size(); ++i) s += eps[i] * u[i] * std::conj(w[i]);
    return s;
  };

  double field_cycles = 1.0;
  for (const auto& [freq, c] : V.modes())
    field_cycles = std::max(field_cycles, std::abs(freq + V.twist() / kTwoPi));
  for (const auto& [freq, c] : W.modes())
    field_cycles = std::max(field_cycles, std::abs(freq + W.twist() / kTwoPi));
  const int bw = std::max(sys.gamma.bandwidth(), sys.curvature.bandwidth());
  const double omega = kTwoPi * (2.0 * field_cycles + bw * std::max(t, 1.0) + 2.0);
  const int panels = std::max(4, static_cast<int>(std::ceil(omega / (1.5 * Q))));

  std::vector<double> x, w;
  detail::gauss_legendre(Q, x, w);
  cplx acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double b = static_cast<double>(p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < Q; ++i) {
      const double r = mid + half * x[i];
      const double wq = half * w[i];
      const Eigen::VectorXcd v = V.eval(r), dv = V.deriv(r);
      const Eigen::VectorXcd ww = W.eval(r), dw = W.deriv(r);
      const Eigen::MatrixXcd g = sys.gamma.eval(t * r).cast<cplx>();
      const Eigen::MatrixXcd rb = sys.curvature.eval(t * r).cast<cplx>();
      const Eigen::VectorXcd gv = g * v, gw = g * ww;
      acc += wq * (gform(dv, dw) + t * gform(gv, dw) + t * gform(dv, gw) +
                   t * t * gform(gv, gw) + t * t * gform(rb * v, ww));
    }
  }
  return acc;
}

}  // namespace specflow
