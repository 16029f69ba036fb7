#include "specflow/jacobi.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <cmath>

namespace specflow {

namespace {

int rank_of(const Eigen::MatrixXcd& m, double threshold) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > threshold) ++r;
  return r;
}

// state is the 2n x 2n propagator flattened column-major
struct JacobiRhs {
  const GeodesicSystem* sys;
  void operator()(const Eigen::VectorXd& y, Eigen::VectorXd& dy,
                  double t) const {
    const int n = sys->n();
    const Eigen::MatrixXd g = sys->gamma.eval(t);
    const Eigen::MatrixXd gd = sys->gamma.deriv(t);
    const Eigen::MatrixXd r = sys->curvature.eval(t);
    const Eigen::Map<const Eigen::MatrixXd> Y(y.data(), 2 * n, 2 * n);
    dy.resize(4 * n * n);
    Eigen::Map<Eigen::MatrixXd> dY(dy.data(), 2 * n, 2 * n);
    // V'' = -2 Gamma V' - (Gamma' + Gamma^2 - Rbar) V
    dY.topRows(n) = Y.bottomRows(n);
    dY.bottomRows(n) =
        (r - gd - g * g) * Y.topRows(n) - 2.0 * g * Y.bottomRows(n);
  }
};

}  // namespace

MonodromyData fundamental_solution(const GeodesicSystem& sys, double rtol,
                                   const NumericConfig& cfg) {
  if (!(rtol >= 1e-13 && rtol <= 1e-6))
    throw InputError("rtol must lie in [1e-13, 1e-6]");
  if (ValidationReport rep = validate_system(sys); !rep.pass) {
    for (const auto& c : rep.checks)
      if (!c.pass)
        throw InputError("invalid system (" + c.name + " violated)");
  }

  const int n = sys.n();
  MonodromyData mono;
  mono.n = n;
  mono.rtol = rtol;
  mono.epsilon = sys.metric.epsilon;

  const int samples = 128;
  for (int j = 0; j <= samples; ++j)
    mono.times.push_back(static_cast<double>(j) / samples);

  namespace ode = boost::numeric::odeint;
  using Stepper =
      ode::runge_kutta_fehlberg78<Eigen::VectorXd, double, Eigen::VectorXd,
                                  double, ode::vector_space_algebra>;
  Eigen::MatrixXd y0 = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(y0.data(), 4 * n * n);
  mono.fundamental.reserve(mono.times.size());
  try {
    ode::integrate_times(
        ode::make_controlled(0.1 * rtol, rtol, Stepper()), JacobiRhs{&sys}, y,
        mono.times.begin(), mono.times.end(), 1e-3,
        [&](const Eigen::VectorXd& state, double) {
          mono.fundamental.push_back(
              Eigen::Map<const Eigen::MatrixXd>(state.data(), 2 * n, 2 * n));
        });
  } catch (const std::exception& e) {
    throw ComputationError(std::string("integration failed (step-size underflow): ") +
                           e.what());
  }

  for (const auto& m : mono.fundamental)
    if (std::abs(m.partialPivLu().determinant()) < 1e-8)
      throw ComputationError("fundamental solution became singular");

  // covariant change of frame: (v, Dv) = (v, v' + Gamma_0 v)
  const Eigen::MatrixXd g0 = sys.gamma.eval(0.0);
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  C.block(n, 0, n, n) = g0;
  Eigen::MatrixXd Cinv = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  Cinv.block(n, 0, n, n) = -g0;
  mono.poincare = C * mono.fundamental.back() * Cinv;

  const Eigen::MatrixXd G = mono.G();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  omega.block(0, n, n, n) = G;
  omega.block(n, 0, n, n) = -G;
  mono.symplectic_residual =
      (mono.poincare.transpose() * omega * mono.poincare - omega)
          .cwiseAbs()
          .maxCoeff();
  if (mono.symplectic_residual > 1e-6)
    throw ComputationError("symplecticity violated beyond 1e-6; coefficients suspect");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mono.poincare);
  mono.scale = svd.singularValues()(0);

  // eigenvalue clusters with algebraic/geometric multiplicities
  Eigen::EigenSolver<Eigen::MatrixXd> eig(mono.poincare);
  std::vector<cplx> vals(eig.eigenvalues().data(),
                         eig.eigenvalues().data() + 2 * n);
  std::sort(vals.begin(), vals.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  const double cluster_tol = 1e-5 * mono.scale;
  const Eigen::MatrixXcd Pc = mono.poincare.cast<cplx>();
  const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
  for (std::size_t i = 0; i < vals.size();) {
    std::size_t j = i;
    cplx sum = 0.0;
    while (j < vals.size() && std::abs(vals[j] - vals[i]) <= cluster_tol)
      sum += vals[j++];
    EigenvalueInfo info;
    info.value = sum / static_cast<double>(j - i);
    info.algebraic = static_cast<int>(j - i);
    info.geometric =
        2 * n - rank_of(Pc - info.value * Id, cfg.tau_rank * mono.scale);
    mono.spectrum.push_back(info);
    i = j;
  }

  mono.unit = unit_spectrum(mono, cfg.tol_circle, cfg.tol_angle);
  return mono;
}

UnitSpectrum unit_spectrum(const MonodromyData& mono, double tol_circle,
                           double tol_angle) {
  UnitSpectrum out;
  out.tol_circle = tol_circle;
  out.tol_angle = tol_angle;
  const int n2 = 2 * mono.n;
  const Eigen::MatrixXcd Pc = mono.poincare.cast<cplx>();
  const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(n2, n2);

  Eigen::EigenSolver<Eigen::MatrixXd> eig(mono.poincare);
  std::vector<double> unit_angles;
  for (int i = 0; i < n2; ++i) {
    const cplx lam = eig.eigenvalues()(i);
    if (std::abs(std::abs(lam) - 1.0) > tol_circle) continue;
    double theta = std::arg(lam);
    if (theta < 0) theta += kTwoPi;
    if (theta < tol_angle || theta > kTwoPi - tol_angle) {
      ++out.one_algebraic;
      out.has_eigenvalue_one = true;
    } else {
      unit_angles.push_back(theta);
    }
  }
  if (out.has_eigenvalue_one)
    out.one_geometric =
        n2 - rank_of(Pc - Id, NumericConfig{}.tau_rank * mono.scale);

  std::sort(unit_angles.begin(), unit_angles.end());
  for (std::size_t i = 0; i < unit_angles.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < unit_angles.size() && unit_angles[j] - unit_angles[i] <= tol_angle)
      sum += unit_angles[j++];
    const double theta = sum / static_cast<double>(j - i);
    EigenvalueInfo info;
    info.value = std::polar(1.0, theta);
    info.algebraic = static_cast<int>(j - i);
    info.geometric =
        n2 - rank_of(Pc - info.value * Id, NumericConfig{}.tau_rank * mono.scale);
    out.angles.push_back(theta);
    out.entries.push_back(info);
    i = j;
  }
  return out;
}

Nullities nullities(const MonodromyData& mono, double tau_rank) {
  const int n = mono.n;
  const double thr = tau_rank * mono.scale;
  Nullities out;
  const Eigen::MatrixXcd P12 =
      mono.poincare.block(0, n, n, n).cast<cplx>();
  out.n_0 = n - rank_of(P12, thr);

  const Eigen::MatrixXcd PmI =
      (mono.poincare - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cast<cplx>();
  out.n_per = 2 * n - rank_of(PmI, thr);
  out.dim_jper_cap_j0 = n - rank_of(PmI.rightCols(n), thr);
  return out;
}

BoundaryForm boundary_form(const MonodromyData& mono, cplx z,
                           const NumericConfig& cfg) {
  if (std::abs(std::abs(z) - 1.0) > 1e-8)
    throw InputError("boundary form requires |z| = 1");
  const int n = mono.n;
  const Eigen::MatrixXcd Pc = mono.poincare.cast<cplx>();

  // J2(z) = Ker of the top block of (P - z Id)
  Eigen::MatrixXcd L =
      (Pc - z * Eigen::MatrixXcd::Identity(2 * n, 2 * n)).topRows(n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L, Eigen::ComputeFullV);
  const double thr = cfg.tau_rank * mono.scale;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > thr) ++rank;
  const int d = 2 * n - rank;

  BoundaryForm out;
  out.z = z;
  out.basis = svd.matrixV().rightCols(d);

  const Eigen::MatrixXcd PB = Pc * out.basis;
  const Eigen::MatrixXcd U =
      std::conj(z) * PB.bottomRows(n) - out.basis.bottomRows(n);
  const Eigen::MatrixXcd W = out.basis.topRows(n);
  const Eigen::MatrixXcd M = W.adjoint() * mono.G().cast<cplx>() * U;
  out.matrix = M;
  out.herm_residual = (M - M.adjoint()).cwiseAbs().maxCoeff();

  const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(H,
                                                      Eigen::EigenvaluesOnly);
  double mag = 0.0;
  for (int i = 0; i < d; ++i) mag = std::max(mag, std::abs(eig.eigenvalues()[i]));
  const double band = cfg.tau_inertia * std::max(mag, mono.scale);
  for (int i = 0; i < d; ++i) {
    const double v = eig.eigenvalues()[i];
    if (v < -band)
      ++out.n_minus;
    else if (v > band)
      ++out.n_plus;
    else
      ++out.nullity;
  }
  return out;
}

int concavity_index(const MonodromyData& mono, const NumericConfig& cfg) {
  return boundary_form(mono, cplx{1.0, 0.0}, cfg).n_minus;
}

int dim_J1(const MonodromyData& mono, cplx z, double tau_rank) {
  const int n = mono.n;
  const double thr = tau_rank * mono.scale;
  const Eigen::MatrixXd P12 = mono.poincare.block(0, n, n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P12, Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > thr) ++rank;
  const int n0 = n - rank;
  if (n0 == 0) return 0;
  const Eigen::MatrixXcd Q0 = svd.matrixV().rightCols(n0).cast<cplx>();
  const Eigen::MatrixXcd P22 = mono.poincare.block(n, n, n, n).cast<cplx>();
  return n0 - rank_of(P22 * Q0 - z * Q0, thr);
}

int kernel_dim_poincare(const MonodromyData& mono, cplx z, double tau_rank) {
  const int n2 = 2 * mono.n;
  const Eigen::MatrixXcd Pc = mono.poincare.cast<cplx>();
  return n2 - rank_of(Pc - z * Eigen::MatrixXcd::Identity(n2, n2),
                      tau_rank * mono.scale);
}

}  // namespace specflow
