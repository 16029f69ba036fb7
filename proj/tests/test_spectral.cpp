#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "specflow/spectral.hpp"

using namespace specflow;

namespace {
const NumericConfig cfg{};

const SystemAnalysis& analysis(const std::string& name) {
  static std::map<std::string, std::unique_ptr<SystemAnalysis>> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, std::make_unique<SystemAnalysis>(preset(name), cfg))
             .first;
  return *it->second;
}
}  // namespace

TEST_CASE("lambda_o on the presets") {
  CHECK(analysis("flat-R").lambda_o() == 0);
  CHECK(analysis("flat-L").lambda_o() == 0);
  CHECK(analysis("dirichlet-R").lambda_o() == -1);
  CHECK(analysis("hyp-L(4)").lambda_o() == 0);
  CHECK(analysis("ell-R(0.3)").lambda_o() == 0);
}

TEST_CASE("Maslov index recovered from the Dirichlet flow") {
  CHECK(analysis("dirichlet-R").maslov() == 2);
  CHECK(analysis("flat-L").maslov() == -1);
  CHECK(analysis("hyp-L(4)").maslov() == -1);
  CHECK(analysis("flat-R").maslov() == 0);
  CHECK(analysis("ell-R(0.3)").maslov() == 0);
}

TEST_CASE("lambda by reduction at closed-form points") {
  const cplx I{0.0, 1.0}, one{1.0, 0.0};
  CHECK(analysis("flat-L").lambda_reduced(I) == 0);
  CHECK(analysis("flat-L").lambda_reduced(one) == 0);
  // hyp-L(4): no unit spectrum, so lambda(-1) = lambda(1) + n_-(g) = 0,
  // and the two computation routes must agree
  const SystemAnalysis& hyp = analysis("hyp-L(4)");
  CHECK(hyp.lambda_reduced(cplx{-1.0, 0.0}) ==
        hyp.lambda_galerkin(cplx{-1.0, 0.0}));
  CHECK(hyp.lambda_reduced(cplx{-1.0, 0.0}) == 0);
  CHECK(hyp.lambda_reduced(one) == -1);
}

TEST_CASE("lambda by Galerkin matches the reduction route everywhere") {
  const cplx I{0.0, 1.0};
  CHECK(analysis("flat-L").lambda_galerkin(I) == 0);
  const SystemAnalysis& ell = analysis("ell-R(0.3)");
  const cplx z = std::polar(1.0, 0.2 * M_PI);
  CHECK(ell.lambda_galerkin(z) == ell.lambda_reduced(z));
  for (const char* name : {"flat-R", "flat-L", "hyp-L(4)", "ell-R(0.3)",
                           "dirichlet-R"}) {
    const SystemAnalysis& an = analysis(name);
    CHECK(an.lambda_galerkin(cplx{1.0, 0.0}) == index_pack(an).sf_gamma);
  }
}

TEST_CASE("dual-method agreement on a 12-point grid, presets and random") {
  for (const char* name : {"flat-L", "hyp-L(4)", "ell-R(0.3)", "dirichlet-R"}) {
    const SystemAnalysis& an = analysis(name);
    for (int j = 0; j < 12; ++j) {
      const cplx z = std::polar(1.0, kTwoPi * j / 12.0);
      CHECK(an.lambda_reduced(z) == an.lambda_galerkin(z));
    }
  }
  const SystemAnalysis an(random_system(31, 2), cfg);
  for (int j = 0; j < 6; ++j) {
    const cplx z = std::polar(1.0, kTwoPi * j / 6.0);
    CHECK(an.lambda_reduced(z) == an.lambda_galerkin(z));
  }
}

TEST_CASE("lambda profile shapes") {
  // hyp-L(4): a single arc at value 0 = value_at_1 + n_-(g)
  const LambdaProfile hyp = lambda_profile(analysis("hyp-L(4)"), 5);
  REQUIRE(hyp.arcs.size() == 1);
  CHECK(hyp.value_at_1 == -1);
  CHECK(hyp.arcs[0].lambda == 0);
  CHECK(hyp.z1_jump_checked);
  CHECK(hyp.z1_ok);
  CHECK(hyp.jump_bounds_ok);

  // ell-R(0.3): angles {0, .6pi, 1.4pi}, values -1 / 0 / -1
  const LambdaProfile ell = lambda_profile(analysis("ell-R(0.3)"), 5);
  REQUIRE(ell.distinguished.size() == 3);
  CHECK(ell.distinguished[1] == doctest::Approx(0.6 * M_PI).epsilon(1e-8));
  CHECK(ell.distinguished[2] == doctest::Approx(1.4 * M_PI).epsilon(1e-8));
  REQUIRE(ell.arcs.size() == 3);
  CHECK(ell.arcs[0].lambda == -1);
  CHECK(ell.arcs[1].lambda == 0);
  CHECK(ell.arcs[2].lambda == -1);
  CHECK(ell.value_at_1 == -1);
  CHECK(ell.z1_jump_checked);
  for (const auto& j : ell.jumps)
    CHECK(std::abs(j.left - j.right) <= j.bound);

  // flat-L: a single arc at 0; the bound at theta = 0 includes the constant
  // directions on top of the eigenspace
  const LambdaProfile fl = lambda_profile(analysis("flat-L"), 5);
  REQUIRE(fl.arcs.size() == 1);
  CHECK(fl.arcs[0].lambda == 0);
  CHECK(fl.arcs[0].d == 1);
  CHECK(fl.value_at_1 == 0);
  REQUIRE(fl.jumps.size() == 1);
  CHECK(fl.jumps[0].bound == 4);
  CHECK_FALSE(fl.z1_jump_checked);

  CHECK_THROWS_AS(lambda_profile(analysis("flat-R"), 2), InputError);
}

TEST_CASE("index packs") {
  const IndexPack hyp = index_pack(analysis("hyp-L(4)"));
  CHECK(hyp.lambda_o == 0);
  CHECK(hyp.maslov == -1);
  CHECK(hyp.n_0 == 0);
  CHECK(hyp.i_conc == 1);
  CHECK(hyp.n_minus_g == 1);
  CHECK(hyp.sf_gamma == -1);
  CHECK(hyp.identity_ok);

  const IndexPack fr = index_pack(analysis("flat-R"));
  CHECK(fr.lambda_o == 0);
  CHECK(fr.maslov == 0);
  CHECK(fr.n_0 == 0);
  CHECK(fr.n_per == 1);
  CHECK(fr.i_conc == 0);
  CHECK(fr.sf_gamma == 0);
  CHECK(fr.identity_ok);

  const IndexPack dir = index_pack(analysis("dirichlet-R"));
  CHECK(dir.lambda_o == -1);
  CHECK(dir.maslov == 2);
  CHECK(dir.n_0 == 1);
  CHECK(dir.identity_ok);

  for (const char* name : {"flat-L", "ell-R(0.3)"})
    CHECK(index_pack(analysis(name)).identity_ok);
}

TEST_CASE("iterates by all three methods") {
  // flat-L: identically zero
  for (int N = 1; N <= 5; ++N) {
    CHECK(sf_iterate(analysis("flat-L"), N, IterateMethod::fourier) == 0);
    CHECK(sf_iterate(analysis("flat-L"), N, IterateMethod::direct) == 0);
    CHECK(sf_iterate(analysis("flat-L"), N, IterateMethod::reduction) == 0);
  }
  // hyp-L(4): sf(gamma^N) = -1 for every N
  CHECK(sf_iterate(analysis("hyp-L(4)"), 3, IterateMethod::fourier) == -1);
  // dirichlet-R: sf(gamma^N) = -2N + 1
  for (int N = 1; N <= 4; ++N) {
    const int expect = -2 * N + 1;
    CHECK(sf_iterate(analysis("dirichlet-R"), N, IterateMethod::fourier) ==
          expect);
    CHECK(sf_iterate(analysis("dirichlet-R"), N, IterateMethod::direct) ==
          expect);
    CHECK(sf_iterate(analysis("dirichlet-R"), N, IterateMethod::reduction) ==
          expect);
  }
  // N = 1 reduces to the periodic flow
  for (const char* name : {"flat-R", "hyp-L(4)", "ell-R(0.3)"}) {
    const SystemAnalysis& an = analysis(name);
    CHECK(sf_iterate(an, 1, IterateMethod::fourier) == index_pack(an).sf_gamma);
    CHECK(sf_iterate(an, 1, IterateMethod::direct) == index_pack(an).sf_gamma);
  }
  CHECK_THROWS_AS(sf_iterate(analysis("flat-R"), 0, IterateMethod::fourier),
                  InputError);
}

TEST_CASE("fourier split basics") {
  // N = 1 is the identity
  const SampledField V = SampledField::random_trig(3, 2, 6);
  const auto parts1 = fourier_split(V, 1);
  REQUIRE(parts1.size() == 1);
  for (int j = 0; j < 16; ++j) {
    const double t = j / 16.0;
    CHECK((parts1[0].eval(t) - V.eval(t)).cwiseAbs().maxCoeff() < 1e-13);
  }

  // V(t) = e^{2 pi i t} v0 lands entirely in the k = 1 slot for N = 2
  Eigen::VectorXcd v0(1);
  v0 << cplx{1.0, -0.5};
  const SampledField pure = SampledField::from_modes(
      0.0, 1, 2048, {{1, v0}});
  const auto parts = fourier_split(pure, 2);
  CHECK(parts[0].max_abs() == 0.0);
  for (int j = 0; j < 8; ++j) {
    const double t = j / 8.0;
    const cplx expect = v0[0] * std::polar(1.0, M_PI * t);
    CHECK(std::abs(parts[1].eval(t)[0] - expect) < 1e-13);
  }
}

TEST_CASE("split and merge are inverse to each other") {
  for (int N : {2, 3, 5}) {
    const SampledField V = SampledField::random_trig(40 + N, 3, 14);
    const auto parts = fourier_split(V, N);
    // every output lives in its twisted space
    for (int k = 0; k < N; ++k) {
      const cplx w = std::polar(1.0, kTwoPi * k / N);
      for (int j = 0; j < 8; ++j) {
        const double t = j / 8.0;
        CHECK((parts[k].eval(t + 1.0) - w * parts[k].eval(t))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
      }
    }
    const SampledField back = fourier_merge(parts, N);
    for (int j = 0; j < 64; ++j) {
      const double t = j / 64.0;
      CHECK((back.eval(t) - V.eval(t)).cwiseAbs().maxCoeff() < 1e-12);
    }
    // merge-then-split round trip
    const auto again = fourier_split(back, N);
    for (int k = 0; k < N; ++k)
      for (int j = 0; j < 16; ++j) {
        const double t = j / 16.0;
        CHECK((again[k].eval(t) - parts[k].eval(t)).cwiseAbs().maxCoeff() <
              1e-12);
      }
  }

  // zero fields merge to zero
  std::vector<SampledField> zeros;
  for (int k = 0; k < 3; ++k)
    zeros.emplace_back(2, kTwoPi * k / 3.0, 2048);
  CHECK(fourier_merge(zeros, 3).max_abs() == 0.0);

  // twist violations are rejected
  std::vector<SampledField> bad = zeros;
  bad[1] = SampledField(2, 0.3, 2048);
  CHECK_THROWS_AS(fourier_merge(bad, 3), InputError);
  CHECK_THROWS_AS(fourier_split(SampledField(1, 0.4, 2048), 2), InputError);
}

TEST_CASE("split agrees with its time-domain averaging formula") {
  // V_k(t) = (1/N) sum_j w^{-jk} V((t+j)/N), evaluated directly on the
  // band-limited field, against the mode-space split
  for (int N : {2, 3, 4}) {
    const SampledField V = SampledField::random_trig(600 + N, 2, 9);
    const auto parts = fourier_split(V, N);
    for (int k = 0; k < N; ++k)
      for (int j = 0; j < 12; ++j) {
        const double t = j / 12.0;
        Eigen::VectorXcd direct = Eigen::VectorXcd::Zero(2);
        for (int jj = 0; jj < N; ++jj)
          direct += std::polar(1.0 / N, -kTwoPi * jj * k / N) *
                    V.eval((t + jj) / N);
        CHECK((parts[k].eval(t) - direct).cwiseAbs().maxCoeff() < 1e-12);
      }
  }
}

TEST_CASE("profile of the identity-monodromy system") {
  // dirichlet-R: every solution is periodic, so z = 1 is the only
  // distinguished point and lambda = -2 on the single arc
  const LambdaProfile prof = lambda_profile(analysis("dirichlet-R"), 5);
  REQUIRE(prof.arcs.size() == 1);
  CHECK(prof.arcs[0].lambda == -2);
  CHECK(prof.arcs[0].d == 0);
  CHECK(prof.arcs[0].kernel_dim == 1);
  CHECK(prof.value_at_1 == -1);
  CHECK_FALSE(prof.z1_jump_checked);  // 1 sits in the spectrum
  REQUIRE(prof.jumps.size() == 1);
  CHECK(prof.jumps[0].bound == 3);  // eigenspace (2) plus constants (1)
  CHECK(prof.jumps[0].point == -1);
}

TEST_CASE("three-way agreement at n = 4") {
  const SystemAnalysis an(random_system(1203, 4), cfg);
  for (int N = 1; N <= 3; ++N) {
    const int f = sf_iterate(an, N, IterateMethod::fourier);
    const int d = sf_iterate(an, N, IterateMethod::direct);
    const int r = sf_iterate(an, N, IterateMethod::reduction);
    CHECK(f == d);
    CHECK(d == r);
  }
}

TEST_CASE("sample-based construction matches the mode view") {
  const SampledField V = SampledField::random_trig(77, 2, 10, 256);
  const SampledField back = SampledField::from_samples(0.0, V.samples());
  for (int j = 0; j < 32; ++j) {
    const double t = j / 32.0;
    CHECK((back.eval(t) - V.eval(t)).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("quadratic form splitting identities") {
  const GeodesicSystem sys = random_system(55, 2);
  for (int N : {2, 3, 4}) {
    const SampledField V = SampledField::random_trig(100 + N, 2, 8);
    const SampledField W = SampledField::random_trig(200 + N, 2, 8);
    const auto Vk = fourier_split(V, N);
    const auto Wk = fourier_split(W, N);
    cplx sum1 = 0.0, sum0 = 0.0;
    for (int k = 0; k < N; ++k) {
      sum1 += form_B(sys, 1.0, Vk[k], Wk[k]);
      sum0 += form_B(sys, 0.0, Vk[k], Wk[k]);
    }
    CHECK(std::abs(form_B(sys, static_cast<double>(N), V, W) -
                   static_cast<double>(N * N) * sum1) < 1e-8);
    CHECK(std::abs(form_B(sys, 0.0, V, W) -
                   static_cast<double>(N * N) * sum0) < 1e-8);
  }
}

TEST_CASE("lambda respects conjugation symmetry of real systems") {
  // the coefficient paths are real, so complex conjugation intertwines the
  // twisted spaces: lambda(conj z) = lambda(z)
  for (std::uint64_t seed : {1002ull, 1008ull}) {
    const SystemAnalysis an(random_system(seed, 2), cfg);
    for (double th : {0.7, 1.9, 2.6}) {
      const cplx z = std::polar(1.0, th);
      CHECK(an.lambda_reduced(z) == an.lambda_reduced(std::conj(z)));
    }
  }
  const SystemAnalysis& ell = analysis("ell-R(0.3)");
  const cplx z = std::polar(1.0, 0.35);
  CHECK(ell.lambda_galerkin(z) == ell.lambda_galerkin(std::conj(z)));
}

TEST_CASE("profiles at the edges of the elliptic parameter range") {
  // a -> 1/2: the two unit angles close in on pi; a -> 0: on 0 and 2pi
  for (const char* name : {"ell-R(0.49)", "ell-R(0.05)"}) {
    const SystemAnalysis an(preset(name), cfg);
    const LambdaProfile prof = lambda_profile(an, 3);
    REQUIRE(prof.arcs.size() == 3);
    CHECK(prof.value_at_1 == -1);
    CHECK(prof.arcs[0].lambda == -1);
    CHECK(prof.arcs[1].lambda == 0);
    CHECK(prof.arcs[2].lambda == -1);
    CHECK(prof.z1_jump_checked);
  }
}

TEST_CASE("reduction terms stay within the double-vanishing budget") {
  for (const char* name : {"flat-L", "dirichlet-R", "ell-R(0.3)"}) {
    const SystemAnalysis& an = analysis(name);
    for (int j = 0; j < 10; ++j) {
      const cplx z = std::polar(1.0, kTwoPi * j / 10.0);
      CHECK(an.reduced_terms(z).dim_J1 <= an.nulls().n_0);
    }
  }
}
