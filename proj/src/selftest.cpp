#include "specflow/selftest.hpp"

#include <functional>
#include <memory>

#include "specflow/asymptotics.hpp"
#include "specflow/galerkin.hpp"
#include "specflow/jacobi.hpp"
#include "specflow/model.hpp"
#include "specflow/spectral.hpp"

namespace specflow {

namespace {

struct Runner {
  SelftestReport* report;
  void operator()(const std::string& group, const std::string& name,
                  const std::string& system,
                  const std::function<void()>& body) const {
    SelftestEntry entry{group, name, system, true, ""};
    try {
      body();
    } catch (const std::exception& e) {
      entry.pass = false;
      entry.detail = e.what();
    }
    report->pass = report->pass && entry.pass;
    report->entries.push_back(std::move(entry));
  }
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw IdentityViolation(msg);
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed, const NumericConfig& cfg) {
  SelftestReport report;
  Runner check{&report};

  const std::vector<std::string> preset_names = {
      "flat-R", "flat-L", "hyp-L(4)", "ell-R(0.3)", "dirichlet-R"};

  std::vector<GeodesicSystem> systems;
  for (const auto& name : preset_names) systems.push_back(preset(name));
  systems.push_back(random_system(seed, 2));
  systems.push_back(random_system(seed + 1, 3));

  std::vector<std::unique_ptr<SystemAnalysis>> analyses;
  for (const auto& sys : systems)
    analyses.push_back(std::make_unique<SystemAnalysis>(sys, cfg));

  for (std::size_t s = 0; s < systems.size(); ++s) {
    const GeodesicSystem& sys = systems[s];
    const SystemAnalysis& an = *analyses[s];
    const std::string& label = sys.label;
    const int n = sys.n();

    check("model", "structural invariants", label, [&] {
      const ValidationReport rep = validate_system(sys);
      for (const auto& c : rep.checks)
        require(c.pass, c.name + " violated: " + std::to_string(c.max_violation));
    });

    check("model", "config round-trip", label, [&] {
      const GeodesicSystem back = load_system(to_config_json(sys));
      for (int j = 0; j <= 100; ++j) {
        const double t = j / 100.0;
        require((back.gamma.eval(t) - sys.gamma.eval(t)).cwiseAbs().maxCoeff() <
                    1e-8,
                "gamma round-trip mismatch");
        require((back.curvature.eval(t) - sys.curvature.eval(t))
                        .cwiseAbs()
                        .maxCoeff() < 1e-8,
                "curvature round-trip mismatch");
      }
    });

    check("jacobi", "symplecticity", label, [&] {
      require(an.monodromy().symplectic_residual <= 100 * cfg.rtol,
              "residual " + std::to_string(an.monodromy().symplectic_residual));
    });

    check("jacobi", "multiplicity budget", label, [&] {
      int total = an.monodromy().unit.one_geometric;
      for (const auto& e : an.monodromy().unit.entries) total += e.geometric;
      require(total <= 2 * n, "unit eigenspaces exceed 2n");
    });

    check("jacobi", "b_z Hermitian", label, [&] {
      for (int j = 0; j < 8; ++j) {
        const BoundaryForm bf =
            boundary_form(an.monodromy(), std::polar(1.0, kTwoPi * j / 8.0), cfg);
        require(bf.herm_residual <= 1e-8, "Hermitian residual too large");
      }
    });

    check("jacobi", "J2 dimension off spectrum", label, [&] {
      for (int j = 1; j < 7; ++j) {
        const cplx z = std::polar(1.0, 0.31 + j * 0.83);
        if (kernel_dim_poincare(an.monodromy(), z, cfg.tau_rank) > 0) continue;
        const BoundaryForm bf = boundary_form(an.monodromy(), z, cfg);
        require(bf.basis.cols() == n, "dim J2(z) != n off the spectrum");
      }
    });

    check("spectral", "dual-method lambda agreement", label, [&] {
      for (int j = 0; j < 8; ++j) {
        const cplx z = std::polar(1.0, kTwoPi * j / 8.0);
        require(an.lambda_reduced(z) == an.lambda_galerkin(z),
                "reduction and Galerkin disagree at grid point " +
                    std::to_string(j));
      }
    });

    check("spectral", "iterate methods agree", label, [&] {
      for (int N = 1; N <= 4; ++N) {
        const int f = sf_iterate(an, N, IterateMethod::fourier);
        const int d = sf_iterate(an, N, IterateMethod::direct);
        const int r = sf_iterate(an, N, IterateMethod::reduction);
        require(f == d && d == r,
                "N=" + std::to_string(N) + ": " + std::to_string(f) + "/" +
                    std::to_string(d) + "/" + std::to_string(r));
      }
    });

    check("spectral", "reduction term sign", label, [&] {
      for (int j = 0; j < 8; ++j) {
        const cplx z = std::polar(1.0, kTwoPi * j / 8.0 + 0.05);
        require(dim_J1(an.monodromy(), z, cfg.tau_rank) <= an.nulls().n_0,
                "dim J1(z) exceeds n_0");
      }
    });

    check("spectral", "index identity", label, [&] {
      require(index_pack(an).identity_ok, "periodic index identity violated");
    });

    check("galerkin", "kernel of B_1 matches Poincare eigenspaces", label, [&] {
      for (int j = 0; j < 8; ++j) {
        const cplx z = std::polar(1.0, kTwoPi * j / 8.0);
        const TrialBasis basis = TrialBasis::twisted(z, cfg.K, n);
        const GalerkinPath path =
            assemble_path(sys, basis, 1.0, cfg.P, cfg.Q, false, cfg);
        const int expected = kernel_dim_poincare(an.monodromy(), z, cfg.tau_rank);
        require(path.kernel_end == expected,
                "kernel dim " + std::to_string(path.kernel_end) + " vs " +
                    std::to_string(expected));
      }
    });

    check("asymptotics", "growth bounds", label, [&] {
      const GrowthReport rep = growth_report(an, 8);
      require(rep.all_bounds_ok, "a growth bound failed");
    });

    check("asymptotics", "hyperbolic closed form", label, [&] {
      for (int N = 1; N <= 6; ++N) {
        const auto h = hyperbolic_sf(an, N);
        if (!h) return;
        require(*h == sf_iterate(an, N, IterateMethod::fourier),
                "hyperbolic formula disagrees at N=" + std::to_string(N));
      }
    });
  }

  check("spectral", "fourier split/merge round trips", "random fields", [&] {
    for (int N : {1, 2, 3, 4}) {
      const SampledField V = SampledField::random_trig(seed + N, 2, 12);
      const auto parts = fourier_split(V, N);
      const SampledField back = fourier_merge(parts, N);
      for (int j = 0; j < 32; ++j) {
        const double t = j / 32.0;
        require((back.eval(t) - V.eval(t)).cwiseAbs().maxCoeff() < 1e-12,
                "split-merge round trip drift");
      }
      for (int k = 0; k < N; ++k)
        for (int j = 0; j < 8; ++j) {
          const double t = j / 8.0;
          const cplx w = std::polar(1.0, kTwoPi * k / N);
          require((parts[k].eval(t + 1.0) - w * parts[k].eval(t))
                          .cwiseAbs()
                          .maxCoeff() < 1e-10,
                  "split output violates its boundary twist");
        }
    }
  });

  check("spectral", "form splitting identities", "random fields", [&] {
    const GeodesicSystem sys = random_system(seed + 11, 2);
    for (int N : {2, 3}) {
      const SampledField V = SampledField::random_trig(seed + 21 + N, 2, 8);
      const SampledField W = SampledField::random_trig(seed + 31 + N, 2, 8);
      const auto Vk = fourier_split(V, N);
      const auto Wk = fourier_split(W, N);
      cplx sum1 = 0.0, sum0 = 0.0;
      for (int k = 0; k < N; ++k) {
        sum1 += form_B(sys, 1.0, Vk[k], Wk[k], cfg.Q);
        sum0 += form_B(sys, 0.0, Vk[k], Wk[k], cfg.Q);
      }
      const cplx lhsN = form_B(sys, static_cast<double>(N), V, W, cfg.Q);
      const cplx lhs0 = form_B(sys, 0.0, V, W, cfg.Q);
      require(std::abs(lhsN - static_cast<double>(N * N) * sum1) < 1e-8,
              "B_N splitting identity failed");
      require(std::abs(lhs0 - static_cast<double>(N * N) * sum0) < 1e-8,
              "B_0 splitting identity failed");
    }
  });

  return report;
}

}  // namespace specflow
