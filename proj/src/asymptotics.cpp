#include "specflow/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace specflow {

namespace detail {

std::optional<Rational> rational_approx(double x, long long max_den,
                                        double tol) {
  if (!(std::abs(x) < 1e15)) return std::nullopt;
  long long h0 = 1, h1 = static_cast<long long>(std::floor(x));
  long long k0 = 0, k1 = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(x - approx) <= tol) return Rational(h1, k1);
    if (frac < 1e-14) break;
    const double inv = 1.0 / frac;
    const long long a = static_cast<long long>(std::floor(inv));
    const long long h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > max_den || k2 <= 0) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    frac = inv - std::floor(inv);
  }
  return std::nullopt;
}

}  // namespace detail

namespace {

struct ArcLayout {
  std::vector<double> angles;  // 0 plus the unit-spectrum angles, sorted
  std::vector<ArcDatum> arcs;
};

// arc constancy of n_-(b_z) at three interior points per spectrum-free arc
ArcLayout build_arcs(const SystemAnalysis& an) {
  ArcLayout out;
  out.angles.push_back(0.0);
  for (double th : an.monodromy().unit.angles) out.angles.push_back(th);
  const std::size_t k = out.angles.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double lo = out.angles[i];
    const double hi = i + 1 < k ? out.angles[i + 1] : kTwoPi;
    ArcDatum arc{lo, hi, 0};
    for (int g = 1; g <= 3; ++g) {
      const double th = lo + (hi - lo) * g / 4.0;
      const int d = an.reduced_terms(std::polar(1.0, th)).n_minus_b;
      if (g == 1)
        arc.d = d;
      else if (d != arc.d)
        throw ComputationError(
            "n_-(b_z) not constant inside a spectrum-free arc");
    }
    out.arcs.push_back(arc);
  }
  return out;
}

}  // namespace

int curly_B(const SystemAnalysis& an, int N) {
  if (N < 1) throw InputError("N must be positive");
  int sum = 0;
  for (int j = 0; j < N; ++j)
    sum += an.reduced_terms(std::polar(1.0, kTwoPi * j / N)).n_minus_b;
  return sum;
}

int curly_B(const GeodesicSystem& sys, int N, const NumericConfig& cfg) {
  return curly_B(SystemAnalysis(sys, cfg), N);
}

KGammaResult K_gamma(const SystemAnalysis& an) {
  const ArcLayout layout = build_arcs(an);
  KGammaResult out;
  out.arcs = layout.arcs;
  double sum = 0.0;
  int max_d = 0, sum_d = 0;
  for (const ArcDatum& arc : layout.arcs) {
    sum += arc.d * (arc.theta_hi - arc.theta_lo);
    max_d = std::max(max_d, arc.d);
    sum_d += arc.d;
  }
  out.value = sum / kTwoPi;

  // exact rational value when every arc endpoint is a rational multiple of pi
  bool rational = true;
  Rational acc(0);
  std::vector<Rational> r;
  for (double th : layout.angles) {
    auto q = detail::rational_approx(th / M_PI, 128, 1e-9);
    if (!q) {
      rational = false;
      break;
    }
    r.push_back(*q);
  }
  if (rational) {
    r.push_back(Rational(2));
    for (std::size_t i = 0; i < layout.arcs.size(); ++i)
      acc += Rational(layout.arcs[i].d) * (r[i + 1] - r[i]) / Rational(2);
    out.exact = acc;
    out.value = boost::rational_cast<double>(acc);
  }

  const int Ncheck = 64;
  out.crosscheck_value =
      static_cast<double>(curly_B(an, Ncheck)) / Ncheck;
  const int k_angles = static_cast<int>(layout.angles.size());
  const double tol_spec = 2.0 * k_angles * max_d;
  const double tol_derived =
      2.0 * sum_d + (k_angles + 1.0) * std::max(max_d, 1);
  out.crosscheck_tol = (std::max(tol_spec, tol_derived) + 1e-6) / Ncheck;
  if (std::abs(out.crosscheck_value - out.value) > out.crosscheck_tol)
    throw ComputationError("K_gamma arc sum disagrees with B_N/N");
  return out;
}

double K_gamma(const GeodesicSystem& sys, const NumericConfig& cfg) {
  return K_gamma(SystemAnalysis(sys, cfg)).value;
}

LGammaResult L_gamma(const SystemAnalysis& an) {
  const KGammaResult kg = K_gamma(an);
  LGammaResult out;
  out.value = -kg.value - an.maslov();
  if (kg.exact) out.exact = -*kg.exact - Rational(an.maslov());

  const int Ncheck = 32;
  const int sfN = sf_iterate(an, Ncheck, IterateMethod::direct);
  out.crosscheck_value = static_cast<double>(sfN) / Ncheck;
  const int n = an.n();
  const int C = 4 * n * n - 2 * an.nulls().n_0 * n + an.n_minus_g();
  out.crosscheck_tol = 2.0 * (2 * n + C) / Ncheck;
  if (std::abs(out.crosscheck_value - out.value) > out.crosscheck_tol)
    throw ComputationError("L_gamma disagrees with sf(gamma^N)/N");
  return out;
}

double L_gamma(const GeodesicSystem& sys, const NumericConfig& cfg) {
  return L_gamma(SystemAnalysis(sys, cfg)).value;
}

GrowthReport growth_report(const SystemAnalysis& an, int N_max) {
  if (N_max < 8) throw InputError("N_max must be at least 8");

  GrowthReport rep;
  const KGammaResult kg = K_gamma(an);
  rep.K_gamma = kg.value;
  rep.K_exact = kg.exact;
  rep.arc_data = kg.arcs;
  const LGammaResult lg = L_gamma(an);
  rep.L_gamma = lg.value;
  rep.L_exact = lg.exact;

  const int n = an.n();
  const int n0 = an.nulls().n_0;
  const int nmg = an.n_minus_g();
  const int maslov = an.maslov();
  rep.C_gamma = 4 * n * n - 2 * n0 * n + nmg;
  const int k_angles = static_cast<int>(an.monodromy().unit.angles.size());
  rep.alpha = 5.0 * (k_angles + 1) * (2 * n - n0);

  std::vector<int> sf(2 * N_max + 1, 0), bn(2 * N_max + 1, 0);
  for (int N = 1; N <= 2 * N_max; ++N) {
    sf[N] = sf_iterate(an, N, IterateMethod::reduction);
    bn[N] = curly_B(an, N);
  }
  rep.sf_values.assign(sf.begin() + 1, sf.begin() + N_max + 1);
  rep.curlyB.assign(bn.begin() + 1, bn.begin() + N_max + 1);

  auto push = [&](BoundCheck c) {
    c.margin = std::min(c.lhs - c.lo, c.hi - c.lhs);
    c.pass = c.margin >= 0.0;
    rep.all_bounds_ok = rep.all_bounds_ok && c.pass;
    rep.bound_checks.push_back(std::move(c));
  };

  for (int N = 1; N <= N_max; ++N) {
    push({"iterate two-sided", N, 0, static_cast<double>(sf[N]),
          static_cast<double>(-maslov + n0 - n) * N - rep.C_gamma,
          static_cast<double>(-maslov) * N - nmg + 2.0 * n, 0.0, true});
    push({"curlyB bound", N, 0, static_cast<double>(bn[N]), 0.0,
          static_cast<double>(N) * (n - n0) + 4.0 * n * n - 2.0 * n0 * n, 0.0,
          true});
    int sumJ1 = 0;
    for (int j = 0; j < N; ++j)
      sumJ1 += an.reduced_terms(std::polar(1.0, kTwoPi * j / N)).dim_J1;
    push({"J1 sum bound", N, 0, static_cast<double>(sumJ1), 0.0, 2.0 * n, 0.0,
          true});
  }

  // uniform-growth inequalities; record the worst (N, P) pair of each family
  BoundCheck worstB{"curlyB uniform growth", 0, 0, 0.0, 0.0, 0.0, 1e300, true};
  BoundCheck worstS{"sf uniform growth", 0, 0, 0.0, 0.0, 0.0, 1e300, true};
  for (int N = 1; N <= N_max; ++N)
    for (int P = 1; P <= N_max; ++P) {
      {
        const double lhs = bn[N + P] - bn[N];
        const double lo = rep.K_gamma * P - rep.alpha;
        const double hi = rep.K_gamma * P + rep.alpha;
        const double margin = std::min(lhs - lo, hi - lhs);
        rep.observed_dev_curlyB =
            std::max(rep.observed_dev_curlyB, std::abs(lhs - rep.K_gamma * P));
        if (margin < worstB.margin) worstB = {worstB.name, N, P, lhs, lo, hi, margin, margin >= 0.0};
      }
      {
        const double lhs = sf[N + P] - sf[N];
        const double lo = rep.L_gamma * P - 2.0 * n - rep.alpha;
        const double hi = rep.L_gamma * P + 2.0 * n + rep.alpha;
        const double margin = std::min(lhs - lo, hi - lhs);
        rep.observed_dev_sf =
            std::max(rep.observed_dev_sf, std::abs(lhs - rep.L_gamma * P));
        if (margin < worstS.margin) worstS = {worstS.name, N, P, lhs, lo, hi, margin, margin >= 0.0};
      }
    }
  rep.all_bounds_ok = rep.all_bounds_ok && worstB.pass && worstS.pass;
  rep.bound_checks.push_back(worstB);
  rep.bound_checks.push_back(worstS);

  const bool L_zero =
      rep.L_exact ? *rep.L_exact == Rational(0) : std::abs(rep.L_gamma) < 1e-9;
  rep.classification = L_zero ? Growth::bounded : Growth::uniform_linear;

  // a single iterate past the coarse bound forces unbounded growth
  bool trigger = false;
  for (int N = 1; N <= N_max; ++N)
    if (std::abs(sf[N]) > 2 * n + nmg) trigger = true;
  if (trigger && rep.classification == Growth::bounded) {
    rep.all_bounds_ok = false;
    rep.bound_checks.push_back({"subsequence trigger", 0, 0, 0.0, 0.0, 0.0,
                                -1.0, false});
  }
  return rep;
}

GrowthReport growth_report(const GeodesicSystem& sys, int N_max,
                           const NumericConfig& cfg) {
  return growth_report(SystemAnalysis(sys, cfg), N_max);
}

std::optional<int> hyperbolic_sf(const SystemAnalysis& an, int N) {
  const UnitSpectrum& unit = an.monodromy().unit;
  if (unit.has_eigenvalue_one || !unit.angles.empty()) return std::nullopt;
  const int sf1 = an.lambda_galerkin(cplx{1.0, 0.0});
  return N * sf1 + (N - 1) * an.n_minus_g();
}

std::optional<int> hyperbolic_sf(const GeodesicSystem& sys, int N,
                                 const NumericConfig& cfg) {
  return hyperbolic_sf(SystemAnalysis(sys, cfg), N);
}

}  // namespace specflow
