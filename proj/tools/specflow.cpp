#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "specflow/asymptotics.hpp"
#include "specflow/io.hpp"
#include "specflow/selftest.hpp"
#include "specflow/spectral.hpp"

namespace {

using namespace specflow;

struct Options {
  std::string preset_name;
  std::string input;
  std::string out_dir = ".";
  std::string format = "both";
  double rtol = 1e-10;
  int K = 32;
  int P = 64;
  int Q = 32;
  int N_max = 16;
  int grid_per_arc = 5;
  std::uint64_t seed = 20240901;
  bool dump_branches = false;
};

NumericConfig make_config(const Options& o) {
  NumericConfig cfg;
  cfg.rtol = o.rtol;
  cfg.K = o.K;
  cfg.P = o.P;
  cfg.Q = o.Q;
  cfg.N_max = o.N_max;
  cfg.grid_per_arc = o.grid_per_arc;
  return cfg;
}

GeodesicSystem load_input(const Options& o) {
  if (!o.preset_name.empty()) return preset(o.preset_name);
  if (!o.input.empty()) return load_system_file(o.input);
  throw InputError("either --preset or --input is required");
}

void emit(const Options& o, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(o.out_dir);
  io::write_file((std::filesystem::path(o.out_dir) / name).string(), body);
}

bool want_json(const Options& o) { return o.format != "csv"; }
bool want_csv(const Options& o) { return o.format != "json"; }

int cmd_validate(const Options& o) {
  const GeodesicSystem sys = load_input(o);
  const ValidationReport rep = validate_system(sys);
  if (want_json(o)) emit(o, "validate.json", io::dump_json(io::to_json(rep)));
  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "  ok   " : "  FAIL ") << c.name
              << "  (violation " << io::format_double(c.max_violation)
              << ", tolerance " << io::format_double(c.tolerance) << ")\n";
  std::cout << (rep.pass ? "validation passed" : "validation FAILED") << "\n";
  return rep.pass ? 0 : 2;
}

int cmd_poincare(const Options& o) {
  const GeodesicSystem sys = load_input(o);
  const NumericConfig cfg = make_config(o);
  const MonodromyData mono = fundamental_solution(sys, cfg.rtol, cfg);
  const Nullities nulls = nullities(mono, cfg.tau_rank);
  if (want_json(o))
    emit(o, "monodromy.json", io::dump_json(io::to_json(mono, nulls, sys.label)));
  std::cout << "Poincare map (" << sys.label << "), symplectic residual "
            << io::format_double(mono.symplectic_residual) << "\n";
  std::cout << "nullities: n_0=" << nulls.n_0 << " n_per=" << nulls.n_per
            << " dim(Jper^J0)=" << nulls.dim_jper_cap_j0 << "\n";
  std::cout << "unit-circle angles:";
  for (double a : mono.unit.angles) std::cout << " " << io::format_double(a);
  if (mono.unit.has_eigenvalue_one)
    std::cout << " (eigenvalue 1: alg " << mono.unit.one_algebraic << ", geom "
              << mono.unit.one_geometric << ")";
  std::cout << "\n";
  return 0;
}

int cmd_profile(const Options& o) {
  const GeodesicSystem sys = load_input(o);
  const NumericConfig cfg = make_config(o);
  const SystemAnalysis an(sys, cfg);
  const LambdaProfile prof = lambda_profile(an, o.grid_per_arc);
  if (want_json(o))
    emit(o, "profile.json", io::dump_json(io::to_json(prof, sys.label)));
  if (want_csv(o)) {
    emit(o, "profile.csv", io::profile_csv(prof));
    emit(o, "arcs.csv", io::arcs_csv(prof));
  }
  if (o.dump_branches) {
    const GalerkinPath path =
        assemble_path(sys, TrialBasis::twisted(cplx{1.0, 0.0}, cfg.K, sys.n()),
                      1.0, cfg.P, cfg.Q, false, cfg);
    emit(o, "branches.csv", io::branches_csv(eigenvalue_branches(path, cfg)));
  }
  std::cout << "lambda profile (" << sys.label << "), value at z=1: "
            << prof.value_at_1 << "\n";
  for (const auto& a : prof.arcs)
    std::cout << "  arc (" << io::format_double(a.theta_lo) << ", "
              << io::format_double(a.theta_hi) << "): lambda=" << a.lambda
              << " d=" << a.d << " ker(b)=" << a.kernel_dim << "\n";
  for (const auto& j : prof.jumps)
    std::cout << "  jump at " << io::format_double(j.theta) << ": " << j.left
              << " -> " << j.right << " (point " << j.point << ", bound "
              << j.bound << ")\n";
  const bool ok = prof.jump_bounds_ok &&
                  (!an.monodromy().unit.has_eigenvalue_one ? prof.z1_ok : true);
  return ok ? 0 : 2;
}

int cmd_iterate(const Options& o) {
  const GeodesicSystem sys = load_input(o);
  const SystemAnalysis an(sys, make_config(o));
  std::vector<io::IterateRow> rows;
  bool all = true;
  std::cout << "   N  fourier  direct  reduction\n";
  for (int N = 1; N <= o.N_max; ++N) {
    io::IterateRow row;
    row.N = N;
    row.sf_fourier = sf_iterate(an, N, IterateMethod::fourier);
    row.sf_direct = sf_iterate(an, N, IterateMethod::direct);
    row.sf_reduction = sf_iterate(an, N, IterateMethod::reduction);
    row.agree = row.sf_fourier == row.sf_direct &&
                row.sf_direct == row.sf_reduction;
    all = all && row.agree;
    std::printf("%4d %8d %7d %10d%s\n", N, row.sf_fourier, row.sf_direct,
                row.sf_reduction, row.agree ? "" : "   DISAGREE");
    rows.push_back(row);
  }
  if (want_json(o))
    emit(o, "iterate.json", io::dump_json(io::to_json(rows, sys.label)));
  if (want_csv(o)) emit(o, "iterate.csv", io::iterate_csv(rows));
  return all ? 0 : 2;
}

int cmd_asymptotics(const Options& o) {
  const GeodesicSystem sys = load_input(o);
  const SystemAnalysis an(sys, make_config(o));
  const GrowthReport rep = growth_report(an, o.N_max);
  if (want_json(o))
    emit(o, "growth.json", io::dump_json(io::to_json(rep, sys.label)));
  if (want_csv(o)) emit(o, "growth.csv", io::growth_csv(rep));
  std::cout << "K_gamma = " << io::format_double(rep.K_gamma)
            << ", L_gamma = " << io::format_double(rep.L_gamma)
            << ", C_gamma = " << rep.C_gamma
            << ", alpha = " << io::format_double(rep.alpha) << "\n";
  std::cout << "classification: "
            << (rep.classification == Growth::bounded ? "bounded"
                                                      : "uniform-linear")
            << "\n";
  std::cout << "sf(gamma^N), N=1.." << o.N_max << ":";
  for (int v : rep.sf_values) std::cout << " " << v;
  std::cout << "\n";
  std::cout << (rep.all_bounds_ok ? "all growth bounds hold"
                                  : "growth bound VIOLATION")
            << "\n";
  return rep.all_bounds_ok ? 0 : 2;
}

int cmd_selftest(const Options& o) {
  const SelftestReport rep = run_selftest(o.seed, make_config(o));
  std::string group;
  for (const auto& e : rep.entries) {
    if (e.group != group) {
      group = e.group;
      std::cout << "[" << group << "]\n";
    }
    std::cout << "  " << (e.pass ? "pass" : "FAIL") << "  " << e.name << " ("
              << e.system << ")";
    if (!e.pass) std::cout << "  -- " << e.detail;
    std::cout << "\n";
  }
  int failed = 0;
  for (const auto& e : rep.entries) failed += e.pass ? 0 : 1;
  std::cout << rep.entries.size() - failed << "/" << rep.entries.size()
            << " checks passed\n";
  if (want_json(o)) {
    nlohmann::ordered_json out;
    out["seed"] = o.seed;
    out["pass"] = rep.pass;
    auto list = nlohmann::ordered_json::array();
    for (const auto& e : rep.entries) {
      nlohmann::ordered_json je;
      je["group"] = e.group;
      je["name"] = e.name;
      je["system"] = e.system;
      je["pass"] = e.pass;
      if (!e.detail.empty()) je["detail"] = e.detail;
      list.push_back(je);
    }
    out["checks"] = list;
    emit(o, "selftest.json", io::dump_json(out));
  }
  return rep.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral flow of closed semi-Riemannian geodesics"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_system) {
    if (needs_system) {
      sub->add_option("--preset", opt.preset_name, "preset system name");
      sub->add_option("--input", opt.input, "JSON config file");
    }
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--format", opt.format, "json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    sub->add_option("--rtol", opt.rtol, "ODE relative tolerance");
    sub->add_option("--K", opt.K, "Galerkin truncation");
    sub->add_option("--P", opt.P, "time samples");
    sub->add_option("--Q", opt.Q, "quadrature order");
    sub->add_option("--N-max", opt.N_max, "largest iterate");
    sub->add_option("--grid-per-arc", opt.grid_per_arc,
                    "constancy points per arc");
    sub->add_option("--seed", opt.seed, "seed for randomized checks");
  };

  auto* validate = app.add_subcommand("validate", "check structural invariants");
  auto* poincare = app.add_subcommand("poincare", "monodromy and nullities");
  auto* profile = app.add_subcommand("profile", "lambda profile over the circle");
  profile->add_flag("--dump-branches", opt.dump_branches,
                    "write eigenvalue branches of the periodic flow");
  auto* iterate = app.add_subcommand("iterate", "iterate flows, three methods");
  auto* asymp = app.add_subcommand("asymptotics", "growth invariants and bounds");
  auto* selftest = app.add_subcommand("selftest", "preset invariant suite");
  for (auto* sub : {validate, poincare, profile, iterate, asymp})
    add_common(sub, true);
  add_common(selftest, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (poincare->parsed()) return cmd_poincare(opt);
    if (profile->parsed()) return cmd_profile(opt);
    if (iterate->parsed()) return cmd_iterate(opt);
    if (asymp->parsed()) return cmd_asymptotics(opt);
    if (selftest->parsed()) return cmd_selftest(opt);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const IdentityViolation& e) {
    std::cerr << "identity violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
