// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Runs the preset batteries plus seed-fixed randomized systems at
// desk scale (n <= 4, K <= 64, N <= 16).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "specflow/asymptotics.hpp"
#include "specflow/galerkin.hpp"
#include "specflow/jacobi.hpp"
#include "specflow/model.hpp"
#include "specflow/spectral.hpp"

using namespace specflow;

namespace {

struct Ctx {
  int checks = 0;
  int failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = what;
    }
  }
};

const NumericConfig cfg{};

std::vector<std::string> preset_names() {
  return {"flat-R", "flat-L", "hyp-L(4)", "ell-R(0.3)", "dirichlet-R"};
}

std::vector<std::unique_ptr<SystemAnalysis>>& preset_analyses() {
  static std::vector<std::unique_ptr<SystemAnalysis>> cache;
  if (cache.empty())
    for (const auto& name : preset_names())
      cache.push_back(std::make_unique<SystemAnalysis>(preset(name), cfg));
  return cache;
}

// 20 seed-fixed sampled systems: 8 at n=2, 7 at n=3, 5 at n=4
std::vector<std::unique_ptr<SystemAnalysis>>& random_analyses() {
  static std::vector<std::unique_ptr<SystemAnalysis>> cache;
  if (cache.empty()) {
    int idx = 0;
    for (int n : {2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4})
      cache.push_back(std::make_unique<SystemAnalysis>(
          random_system(1000 + idx++, n), cfg));
  }
  return cache;
}

void criterion_fourier(Ctx& c) {
  for (const auto& an : preset_analyses())
    for (int N = 1; N <= 8; ++N) {
      const int f = sf_iterate(*an, N, IterateMethod::fourier);
      const int d = sf_iterate(*an, N, IterateMethod::direct);
      const int r = sf_iterate(*an, N, IterateMethod::reduction);
      c.expect(f == d && d == r,
               an->system().label + " N=" + std::to_string(N) + ": " +
                   std::to_string(f) + "/" + std::to_string(d) + "/" +
                   std::to_string(r));
    }
}

void criterion_periodic_identity(Ctx& c) {
  auto check_one = [&](const SystemAnalysis& an) {
    const IndexPack pack = index_pack(an);
    c.expect(pack.identity_ok, an.system().label + " identity violated");
  };
  for (const auto& an : preset_analyses()) check_one(*an);
  for (const auto& an : random_analyses()) check_one(*an);
}

void criterion_kernel_match(Ctx& c) {
  for (const auto& an : preset_analyses()) {
    const GeodesicSystem& sys = an->system();
    for (int j = 0; j < 24; ++j) {
      const cplx z = std::polar(1.0, kTwoPi * j / 24.0);
      const GalerkinPath path = assemble_path(
          sys, TrialBasis::twisted(z, 32, sys.n()), 1.0, cfg.P, cfg.Q, false, cfg);
      const int expected =
          kernel_dim_poincare(an->monodromy(), z, cfg.tau_rank);
      c.expect(path.kernel_end == expected,
               sys.label + " grid point " + std::to_string(j) + ": " +
                   std::to_string(path.kernel_end) + " vs " +
                   std::to_string(expected));
    }
  }
}

void criterion_arcs_and_jumps(Ctx& c) {
  for (const auto& an : preset_analyses()) {
    const std::string& label = an->system().label;
    try {
      const LambdaProfile prof = lambda_profile(*an, 3);
      c.expect(prof.jump_bounds_ok, label + " jump bound violated");
      if (!an->monodromy().unit.has_eigenvalue_one)
        c.expect(prof.z1_jump_checked && prof.z1_ok,
                 label + " z=1 jump != n_-(g)");
    } catch (const std::exception& e) {
      c.expect(false, label + ": " + e.what());
    }
  }
  // a second hyperbolic system exercises the z=1 jump away from c = 4
  try {
    const SystemAnalysis hyp2(preset("hyp-L(2.25)"), cfg);
    const LambdaProfile prof = lambda_profile(hyp2, 3);
    c.expect(prof.z1_jump_checked && prof.z1_ok, "hyp-L(2.25) z=1 jump");
  } catch (const std::exception& e) {
    c.expect(false, std::string("hyp-L(2.25): ") + e.what());
  }
}

void criterion_fourier_maps(Ctx& c) {
  int produced = 0;
  std::uint64_t seed = 5000;
  while (produced < 50) {
    for (int N : {2, 3, 4}) {
      if (produced >= 50) break;
      const SampledField V = SampledField::random_trig(seed++, 2, 10);
      const SampledField W = SampledField::random_trig(seed++, 2, 10);
      const auto Vk = fourier_split(V, N);
      const auto Wk = fourier_split(W, N);
      const SampledField Vback = fourier_merge(Vk, N);
      double drift = 0.0;
      for (int j = 0; j < 32; ++j) {
        const double t = j / 32.0;
        drift = std::max(drift,
                         (Vback.eval(t) - V.eval(t)).cwiseAbs().maxCoeff());
      }
      c.expect(drift < 1e-12, "round trip drift " + std::to_string(drift));

      const GeodesicSystem sys = random_system(900 + produced, 2);
      cplx sum1 = 0.0, sum0 = 0.0;
      for (int k = 0; k < N; ++k) {
        sum1 += form_B(sys, 1.0, Vk[k], Wk[k]);
        sum0 += form_B(sys, 0.0, Vk[k], Wk[k]);
      }
      const double err1 = std::abs(form_B(sys, static_cast<double>(N), V, W) -
                                   static_cast<double>(N * N) * sum1);
      const double err0 = std::abs(form_B(sys, 0.0, V, W) -
                                   static_cast<double>(N * N) * sum0);
      c.expect(err1 < 1e-8, "B_N splitting error " + std::to_string(err1));
      c.expect(err0 < 1e-8, "B_0 splitting error " + std::to_string(err0));
      ++produced;
    }
  }
}

void criterion_hyperbolic(Ctx& c) {
  const SystemAnalysis& hyp = *preset_analyses()[2];
  const SystemAnalysis& fl = *preset_analyses()[1];
  for (int N = 1; N <= 16; ++N) {
    const auto closed = hyperbolic_sf(hyp, N);
    c.expect(closed.has_value() && *closed == -1,
             "hyp-L(4) closed form at N=" + std::to_string(N));
    c.expect(sf_iterate(hyp, N, IterateMethod::fourier) == -1,
             "hyp-L(4) iterate at N=" + std::to_string(N));
    c.expect(sf_iterate(fl, N, IterateMethod::fourier) == 0,
             "flat-L iterate at N=" + std::to_string(N));
  }
}

void criterion_growth_bounds(Ctx& c) {
  auto check_one = [&](const SystemAnalysis& an) {
    try {
      const GrowthReport rep = growth_report(an, 16);
      c.expect(rep.all_bounds_ok, an.system().label + " bound violated");
    } catch (const std::exception& e) {
      c.expect(false, an.system().label + ": " + e.what());
    }
  };
  for (const auto& an : preset_analyses()) check_one(*an);
  for (const auto& an : random_analyses()) check_one(*an);
}

void criterion_truncation_stable(Ctx& c) {
  for (const auto& an : preset_analyses()) {
    const GeodesicSystem& sys = an->system();
    for (auto z : {cplx{1.0, 0.0}, cplx{0.0, 1.0}}) {
      int prev = 0;
      for (int idx = 0; idx < 3; ++idx) {
        const int K = 16 << idx;
        const GalerkinPath p = assemble_path(
            sys, TrialBasis::twisted(z, K, sys.n()), 1.0, cfg.P, cfg.Q, false, cfg);
        const int v = spectral_flow(p, cfg).value;
        if (idx > 0)
          c.expect(v == prev, sys.label + " twisted truncation drift at K=" +
                                  std::to_string(K));
        prev = v;
      }
    }
    int prev = 0;
    for (int idx = 0; idx < 3; ++idx) {
      const int M = 16 << idx;
      const GalerkinPath p = assemble_path(
          sys, TrialBasis::dirichlet(M, sys.n()), 1.0, cfg.P, cfg.Q, false, cfg);
      const int v = spectral_flow(p, cfg).value;
      if (idx > 0)
        c.expect(v == prev, sys.label + " dirichlet truncation drift at M=" +
                                std::to_string(M));
      prev = v;
    }
  }
}

void criterion_closed_forms(Ctx& c) {
  const SystemAnalysis& dir = *preset_analyses()[4];
  c.expect(dir.lambda_o() == -1, "dirichlet-R lambda_o");
  c.expect(dir.maslov() == 2, "dirichlet-R Maslov");
  c.expect(dir.nulls().n_0 == 1, "dirichlet-R n_0");

  const SystemAnalysis& fl = *preset_analyses()[1];
  c.expect(fl.maslov() == -1, "flat-L Maslov");
  const KGammaResult kg = K_gamma(fl);
  c.expect(kg.exact && *kg.exact == Rational(1), "flat-L K_gamma");
  const LGammaResult lg = L_gamma(fl);
  c.expect(lg.exact && *lg.exact == Rational(0), "flat-L L_gamma");
}

struct Criterion {
  int id;
  std::string name;
  std::function<void(Ctx&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Fourier iteration: fourier = direct = reduction, N = 1..8",
       criterion_fourier},
      {2, "periodic index identity on presets + 20 sampled systems",
       criterion_periodic_identity},
      {3, "endpoint-form kernels match Poincare eigenspaces, 24-point grid",
       criterion_kernel_match},
      {4, "arc constancy, z=1 jump, and eigenspace jump bounds",
       criterion_arcs_and_jumps},
      {5, "field split/merge round trips and form splitting identities",
       criterion_fourier_maps},
      {6, "hyperbolic iterates: hyp-L(4) pinned at -1, flat-L at 0",
       criterion_hyperbolic},
      {7, "two-sided, partial-sum, and uniform growth bounds, N,P <= 16",
       criterion_growth_bounds},
      {8, "truncation stability of the flow for K >= 16",
       criterion_truncation_stable},
      {9, "closed-form index values (dirichlet-R, flat-L)",
       criterion_closed_forms},
  };

  int failed = 0;
  for (const auto& crit : criteria) {
    Ctx ctx;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.run(ctx);
    } catch (const std::exception& e) {
      ctx.expect(false, std::string("exception: ") + e.what());
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (ctx.failures == 0) {
      std::printf("[PASS] %d. %s  (%d checks, %lld ms)\n", crit.id,
                  crit.name.c_str(), ctx.checks, static_cast<long long>(ms));
    } else {
      ++failed;
      std::printf("[FAIL] %d. %s  (%d/%d checks failed; first: %s)\n", crit.id,
                  crit.name.c_str(), ctx.failures, ctx.checks,
                  ctx.first_failure.c_str());
    }
    std::fflush(stdout);
  }
  std::printf("ACCEPTANCE: %zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
