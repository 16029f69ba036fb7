#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "specflow/galerkin.hpp"
#include "specflow/jacobi.hpp"
#include "specflow/spectral.hpp"

using namespace specflow;

namespace {
const NumericConfig cfg{};
}

TEST_CASE("gauss nodes integrate polynomials and oscillations") {
  std::vector<double> x, w;
  detail::gauss_legendre(16, x, w);
  double sum = 0.0, quad = 0.0, osc = 0.0;
  for (int i = 0; i < 16; ++i) {
    sum += w[i];
    quad += w[i] * x[i] * x[i];
    osc += w[i] * std::cos(5.0 * x[i]);
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(quad == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(osc == doctest::Approx(2.0 * std::sin(5.0) / 5.0).epsilon(1e-12));
}

TEST_CASE("twisted basis satisfies its boundary condition exactly") {
  for (double theta : {0.0, 0.5, M_PI, 5.1}) {
    const TrialBasis basis = TrialBasis::twisted(std::polar(1.0, theta), 6, 2);
    const cplx z = basis.z();
    for (int slot = 0; slot < basis.slots(); ++slot) {
      const cplx v1 = basis.scalar_value(slot, 1.0);
      const cplx v0 = basis.scalar_value(slot, 0.0);
      CHECK(std::abs(v1 - z * v0) <= 1e-14);
    }
  }
  const TrialBasis diri = TrialBasis::dirichlet(6, 1);
  for (int slot = 0; slot < 6; ++slot) {
    CHECK(std::abs(diri.scalar_value(slot, 0.0)) <= 1e-15);
    CHECK(std::abs(diri.scalar_value(slot, 1.0)) <= 1e-13);
  }
}

TEST_CASE("flat-L twisted(i): the path is constant in t") {
  const GeodesicSystem sys = preset("flat-L");
  const TrialBasis basis = TrialBasis::twisted(cplx{0.0, 1.0}, 8, 2);
  const GalerkinPath path = assemble_path(sys, basis, 1.0, 8, 16, true, cfg);
  const double scale = path.B_start.cwiseAbs().maxCoeff();
  for (double t : {0.25, 0.5, 0.75}) {
    const Eigen::MatrixXcd M = path.assemble_at(t);
    CHECK((M - path.B_start).cwiseAbs().maxCoeff() <= 1e-14 * scale);
  }
  CHECK((path.B_end - path.B_start).cwiseAbs().maxCoeff() <= 1e-14 * scale);
}

TEST_CASE("dirichlet-R dirichlet modes are diagonal with the analytic values") {
  const GeodesicSystem sys = preset("dirichlet-R");
  const TrialBasis basis = TrialBasis::dirichlet(8, 1);
  const GalerkinPath path = assemble_path(sys, basis, 1.0, 8, 32, true, cfg);
  for (double t : {0.0, 0.5, 1.0}) {
    const Eigen::MatrixXcd M = path.assemble_at(t);
    for (int m = 1; m <= 8; ++m) {
      const double expect =
          0.5 * (m * m * M_PI * M_PI - t * t * kTwoPi * kTwoPi);
      CHECK(std::abs(M(m - 1, m - 1) - expect) < 1e-9 * (1.0 + std::abs(expect)));
      for (int mm = 1; mm <= 8; ++mm)
        if (mm != m) CHECK(std::abs(M(m - 1, mm - 1)) < 1e-9);
    }
  }
}

TEST_CASE("hyp-L(4) twisted(1) endpoint form is negative definite") {
  const GeodesicSystem sys = preset("hyp-L(4)");
  const TrialBasis basis = TrialBasis::twisted(cplx{1.0, 0.0}, 8, 1);
  const GalerkinPath path = assemble_path(sys, basis, 1.0, 8, 32, true, cfg);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(path.B_end,
                                                     Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().maxCoeff() < 0.0);
}

TEST_CASE("matrices are Hermitian and the gram is positive definite") {
  const GeodesicSystem sys = random_system(23, 3);
  for (auto space : {TrialBasis::Space::twisted, TrialBasis::Space::dirichlet}) {
    const TrialBasis basis = space == TrialBasis::Space::twisted
                                 ? TrialBasis::twisted(std::polar(1.0, 1.1), 10, 3)
                                 : TrialBasis::dirichlet(10, 3);
    const GalerkinPath path = assemble_path(sys, basis, 1.0, 8, 32, true, cfg);
    for (double t : {0.0, 0.4, 1.0}) {
      const Eigen::MatrixXcd M = path.assemble_at(t);
      CHECK((M - M.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(path.gram,
                                                       Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK(path.quad_residual <= 1e-9);
  }
}

TEST_CASE("strict negative index") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = -1.0;
  d(2, 2) = 2.0;
  const auto [nm, nz] = strict_negative_index(d, 1e-8);
  CHECK(nm == 1);
  CHECK(nz == 1);

  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(4, 4);
  const auto [zm, zz] = strict_negative_index(zero, 1e-8);
  CHECK(zm == 0);
  CHECK(zz == 4);

  const GalerkinPath path = assemble_path(
      preset("dirichlet-R"), TrialBasis::dirichlet(8, 1), 1.0, 8, 32, true, cfg);
  const auto [dm, dz] = strict_negative_index(path.B_end, cfg.tau_inertia);
  CHECK(dm == 1);  // sin(pi t) has gone negative
  CHECK(dz == 1);  // sin(2 pi t) sits in the kernel at t = 1
}

TEST_CASE("endpoint spectral flow on the presets") {
  // flat-L twisted(i): constant path
  {
    const GalerkinPath path =
        assemble_path(preset("flat-L"), TrialBasis::twisted(cplx{0.0, 1.0}, 8, 2),
                      1.0, 8, 32, true, cfg);
    CHECK(spectral_flow(path, cfg).value == 0);
  }
  // dirichlet-R: one crossing at t = 1/2, the endpoint kernel excluded
  {
    const GalerkinPath path = assemble_path(
        preset("dirichlet-R"), TrialBasis::dirichlet(8, 1), 1.0, 16, 32, true, cfg);
    const SpectralFlowResult sf = spectral_flow(path, cfg, true);
    CHECK(sf.value == -1);
    CHECK(sf.kernel_end == 1);
    CHECK(sf.crossings_computed);
    bool saw_half = false;
    for (const auto& ev : sf.crossings)
      if (ev.direction == -1 && ev.t_lo <= 0.5 && 0.5 <= ev.t_hi + 0.1)
        saw_half = true;
    CHECK(saw_half);
  }
  // hyp-L(4) twisted(1): the constant branch leaves zero downward
  {
    const GalerkinPath path =
        assemble_path(preset("hyp-L(4)"), TrialBasis::twisted(cplx{1.0, 0.0}, 8, 1),
                      1.0, 8, 32, true, cfg);
    const SpectralFlowResult sf = spectral_flow(path, cfg);
    CHECK(sf.value == -1);
    CHECK(sf.kernel_start == 1);
    CHECK(sf.kernel_end == 0);
  }
}

TEST_CASE("the path start carries no coefficient contribution") {
  // at t = 0 the form is int G(V', W'): diagonal mu_l mu_k eps on the twisted
  // basis even when Gamma and Rbar are nontrivial
  const GeodesicSystem sys = random_system(71, 3);
  const TrialBasis basis = TrialBasis::twisted(std::polar(1.0, 0.7), 6, 3);
  const GalerkinPath path = assemble_path(sys, basis, 1.0, 8, 32, false, cfg);
  for (int a = 0; a < basis.count(); ++a)
    for (int b = 0; b < basis.count(); ++b) {
      if (a == b) {
        const double mu = basis.frequency(a / 3);
        const double eps = sys.metric.epsilon[a % 3];
        CHECK(std::abs(path.B_start(a, a) - mu * mu * eps) < 1e-9 * (1 + mu * mu));
      } else {
        CHECK(std::abs(path.B_start(a, b)) < 1e-9 * path.B_start.cwiseAbs().maxCoeff());
      }
    }
}

TEST_CASE("B_0 degeneracy structure on twisted spaces") {
  const GeodesicSystem sys = preset("flat-L");
  const GalerkinPath at_one = assemble_path(
      sys, TrialBasis::twisted(cplx{1.0, 0.0}, 8, 2), 1.0, 8, 32, true, cfg);
  CHECK(at_one.kernel_start == 2);  // the constants
  const GalerkinPath at_i = assemble_path(
      sys, TrialBasis::twisted(cplx{0.0, 1.0}, 8, 2), 1.0, 8, 32, true, cfg);
  CHECK(at_i.kernel_start == 0);
}

TEST_CASE("stabilized flows and truncation stability") {
  NumericConfig c = cfg;
  c.K = 4;
  const StabilizedFlow fr = stabilized_spectral_flow(
      preset("flat-R"), TrialBasis::Space::twisted, cplx{1.0, 0.0}, 1.0, c);
  CHECK(fr.value == 0);
  CHECK(fr.history.size() == 2);  // settles at the first confirmation

  const StabilizedFlow dir = stabilized_spectral_flow(
      preset("dirichlet-R"), TrialBasis::Space::dirichlet, cplx{1.0, 0.0}, 1.0, c);
  CHECK(dir.value == -1);

  const StabilizedFlow hyp = stabilized_spectral_flow(
      preset("hyp-L(4)"), TrialBasis::Space::twisted, cplx{1.0, 0.0}, 1.0, c);
  CHECK(hyp.value == -1);

  // value at K and 2K agree for K >= 8 across presets and both spaces
  for (const char* name : {"flat-L", "hyp-L(4)", "ell-R(0.3)", "dirichlet-R"}) {
    const GeodesicSystem sys = preset(name);
    for (int K : {8, 16}) {
      for (auto z : {cplx{1.0, 0.0}, cplx{0.0, 1.0}}) {
        const auto flow = [&](int KK) {
          const GalerkinPath p = assemble_path(
              sys, TrialBasis::twisted(z, KK, sys.n()), 1.0, 8, 32, false, cfg);
          return spectral_flow(p, cfg).value;
        };
        CHECK(flow(K) == flow(2 * K));
      }
      const auto dflow = [&](int MM) {
        const GalerkinPath p = assemble_path(
            sys, TrialBasis::dirichlet(MM, sys.n()), 1.0, 8, 32, false, cfg);
        return spectral_flow(p, cfg).value;
      };
      CHECK(dflow(K) == dflow(2 * K));
    }
  }
}

TEST_CASE("kernel of the endpoint form matches the Poincare eigenspace") {
  for (const char* name : {"flat-L", "ell-R(0.3)", "dirichlet-R"}) {
    const GeodesicSystem sys = preset(name);
    const MonodromyData mono = fundamental_solution(sys, cfg.rtol, cfg);
    for (int j = 0; j < 8; ++j) {
      const cplx z = std::polar(1.0, kTwoPi * j / 8.0);
      const GalerkinPath path = assemble_path(
          sys, TrialBasis::twisted(z, 32, sys.n()), 1.0, 8, 32, false, cfg);
      CHECK(path.kernel_end == kernel_dim_poincare(mono, z, cfg.tau_rank));
    }
  }
}

TEST_CASE("branch table covers every branch at every sample") {
  const GalerkinPath path = assemble_path(
      preset("dirichlet-R"), TrialBasis::dirichlet(6, 1), 1.0, 8, 32, true, cfg);
  const BranchData branches = eigenvalue_branches(path, cfg);
  CHECK(branches.values.size() == 6);
  for (const auto& row : branches.values) CHECK(row.size() == path.times.size());
  // mode ordering at t=0: branch for sin(pi t) starts at pi^2/2
  CHECK(branches.values[0][0] == doctest::Approx(M_PI * M_PI / 2).epsilon(1e-9));
}

TEST_CASE("assembled entries match the direct field quadrature") {
  // the transform-based assembly against the plain five-term quadrature of
  // the form on explicit fields
  const GeodesicSystem sys = random_system(67, 2);
  const double theta = 1.1;
  const int K = 3, n = 2;
  const TrialBasis basis = TrialBasis::twisted(std::polar(1.0, theta), K, n);
  const GalerkinPath path = assemble_path(sys, basis, 1.0, 8, 32, false, cfg);

  auto unit_field = [&](int slot, int comp) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e[comp] = 1.0;
    return SampledField::from_modes(theta, n, 64, {{slot - K, e}});
  };
  for (double t : {0.35, 1.0}) {
    const Eigen::MatrixXcd M = path.assemble_at(t);
    for (int a : {0, 3, 5})
      for (int b : {1, 4, 6}) {
        const cplx direct = form_B(sys, t, unit_field(b / n, b % n),
                                   unit_field(a / n, a % n), 32);
        CHECK(std::abs(M(a, b) - direct) <= 1e-8 * (1.0 + std::abs(direct)));
      }
  }

  // dirichlet modes: sin(m pi t) decomposes over half-integer frequencies
  const TrialBasis diri = TrialBasis::dirichlet(4, n);
  const GalerkinPath dpath = assemble_path(sys, diri, 1.0, 8, 32, false, cfg);
  auto sine_field = [&](int mode, int comp) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    const cplx half_over_i{0.0, -0.5};  // 1/(2i)
    std::vector<std::pair<int, Eigen::VectorXcd>> modes;
    if (mode % 2 == 0) {
      e[comp] = half_over_i;
      modes.emplace_back(mode / 2, e);
      e[comp] = -half_over_i;
      modes.emplace_back(-mode / 2, e);
      return SampledField::from_modes(0.0, n, 64, std::move(modes));
    }
    e[comp] = half_over_i;
    modes.emplace_back((mode - 1) / 2, e);
    e[comp] = -half_over_i;
    modes.emplace_back(-(mode + 1) / 2, e);
    return SampledField::from_modes(M_PI, n, 64, std::move(modes));
  };
  for (double t : {0.6, 1.0}) {
    const Eigen::MatrixXcd M = dpath.assemble_at(t);
    for (int a : {0, 2, 5})
      for (int b : {1, 4, 7}) {
        const cplx direct = form_B(sys, t, sine_field(b / n + 1, b % n),
                                   sine_field(a / n + 1, a % n), 32);
        CHECK(std::abs(M(a, b) - direct) <= 1e-8 * (1.0 + std::abs(direct)));
      }
  }
}

TEST_CASE("stabilization failure reports the values it saw") {
  NumericConfig c = cfg;
  c.K = 4;
  c.K_cap = 4;  // a single truncation can never confirm itself
  try {
    stabilized_spectral_flow(preset("dirichlet-R"), TrialBasis::Space::dirichlet,
                             cplx{1.0, 0.0}, 1.0, c);
    FAIL("expected StabilizationError");
  } catch (const StabilizationError& e) {
    CHECK(e.values.size() == 1);
    CHECK(e.values[0] == -1);
  }
}

TEST_CASE("precondition violations throw") {
  const GeodesicSystem sys = preset("flat-R");
  const TrialBasis basis = TrialBasis::twisted(cplx{1.0, 0.0}, 4, 1);
  CHECK_THROWS_AS(assemble_path(sys, basis, 0.0, 8, 32, true, cfg), InputError);
  CHECK_THROWS_AS(assemble_path(sys, basis, 1.0, 4, 32, true, cfg), InputError);
  CHECK_THROWS_AS(assemble_path(sys, basis, 1.0, 8, 8, true, cfg), InputError);
  CHECK_THROWS_AS(TrialBasis::twisted(cplx{2.0, 0.0}, 4, 1), InputError);
}
