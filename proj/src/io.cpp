#include "specflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace specflow::io {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

void dump_rec(const nlohmann::ordered_json& j, std::string& out, int indent,
              int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + nlohmann::json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(item, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

nlohmann::ordered_json complex_entry(cplx v) {
  return nlohmann::ordered_json::array({v.real(), v.imag()});
}

nlohmann::ordered_json matrix_complex(const Eigen::MatrixXcd& m) {
  auto rows = nlohmann::ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_entry(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::ordered_json matrix_real_as_complex(const Eigen::MatrixXd& m) {
  return matrix_complex(m.cast<cplx>());
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

nlohmann::ordered_json to_json(const ValidationReport& rep) {
  nlohmann::ordered_json out;
  out["label"] = rep.label;
  out["pass"] = rep.pass;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["max_violation"] = c.max_violation;
    jc["tolerance"] = c.tolerance;
    jc["pass"] = c.pass;
    checks.push_back(jc);
  }
  out["checks"] = checks;
  return out;
}

nlohmann::ordered_json to_json(const MonodromyData& mono,
                               const Nullities& nulls,
                               const std::string& label) {
  nlohmann::ordered_json out;
  out["label"] = label;
  out["n"] = mono.n;
  out["rtol"] = mono.rtol;
  out["poincare"] = matrix_real_as_complex(mono.poincare);
  out["symplectic_residual"] = mono.symplectic_residual;

  auto spec = nlohmann::ordered_json::array();
  for (const auto& e : mono.spectrum) {
    nlohmann::ordered_json je;
    je["value"] = complex_entry(e.value);
    je["algebraic"] = e.algebraic;
    je["geometric"] = e.geometric;
    spec.push_back(je);
  }
  out["spectrum"] = spec;

  nlohmann::ordered_json unit;
  auto angles = nlohmann::ordered_json::array();
  for (double a : mono.unit.angles) angles.push_back(a);
  unit["angles"] = angles;
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : mono.unit.entries) {
    nlohmann::ordered_json je;
    je["value"] = complex_entry(e.value);
    je["algebraic"] = e.algebraic;
    je["geometric"] = e.geometric;
    entries.push_back(je);
  }
  unit["entries"] = entries;
  unit["has_eigenvalue_one"] = mono.unit.has_eigenvalue_one;
  unit["one_algebraic"] = mono.unit.one_algebraic;
  unit["one_geometric"] = mono.unit.one_geometric;
  out["unit_spectrum"] = unit;

  nlohmann::ordered_json jn;
  jn["n_0"] = nulls.n_0;
  jn["n_per"] = nulls.n_per;
  jn["dim_jper_cap_j0"] = nulls.dim_jper_cap_j0;
  out["nullities"] = jn;

  nlohmann::ordered_json fund;
  auto times = nlohmann::ordered_json::array();
  auto mats = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < mono.times.size(); i += 4) {
    times.push_back(mono.times[i]);
    mats.push_back(matrix_real_as_complex(mono.fundamental[i]));
  }
  fund["times"] = times;
  fund["matrices"] = mats;
  out["fundamental"] = fund;
  return out;
}

nlohmann::ordered_json to_json(const LambdaProfile& prof,
                               const std::string& label) {
  nlohmann::ordered_json out;
  out["label"] = label;
  out["value_at_1"] = prof.value_at_1;
  out["z1_jump_checked"] = prof.z1_jump_checked;
  out["z1_ok"] = prof.z1_ok;
  out["jump_bounds_ok"] = prof.jump_bounds_ok;
  auto arcs = nlohmann::ordered_json::array();
  for (const auto& a : prof.arcs) {
    nlohmann::ordered_json ja;
    ja["theta_lo"] = a.theta_lo;
    ja["theta_hi"] = a.theta_hi;
    ja["lambda"] = a.lambda;
    ja["d"] = a.d;
    ja["kernel_dim"] = a.kernel_dim;
    arcs.push_back(ja);
  }
  out["arcs"] = arcs;
  auto jumps = nlohmann::ordered_json::array();
  for (const auto& jmp : prof.jumps) {
    nlohmann::ordered_json jj;
    jj["theta"] = jmp.theta;
    jj["left"] = jmp.left;
    jj["right"] = jmp.right;
    jj["point"] = jmp.point;
    jj["bound"] = jmp.bound;
    jumps.push_back(jj);
  }
  out["jumps"] = jumps;
  return out;
}

namespace {
std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << r.numerator() << "/" << r.denominator();
  return os.str();
}
}  // namespace

nlohmann::ordered_json to_json(const GrowthReport& rep,
                               const std::string& label) {
  nlohmann::ordered_json out;
  out["label"] = label;
  out["K_gamma"] = rep.K_gamma;
  if (rep.K_exact) out["K_gamma_exact"] = rational_str(*rep.K_exact);
  out["L_gamma"] = rep.L_gamma;
  if (rep.L_exact) out["L_gamma_exact"] = rational_str(*rep.L_exact);
  out["C_gamma"] = rep.C_gamma;
  out["alpha"] = rep.alpha;
  out["observed_dev_curlyB"] = rep.observed_dev_curlyB;
  out["observed_dev_sf"] = rep.observed_dev_sf;
  out["classification"] =
      rep.classification == Growth::bounded ? "bounded" : "uniform-linear";
  auto arcs = nlohmann::ordered_json::array();
  for (const auto& a : rep.arc_data) {
    nlohmann::ordered_json ja;
    ja["theta_lo"] = a.theta_lo;
    ja["theta_hi"] = a.theta_hi;
    ja["d"] = a.d;
    arcs.push_back(ja);
  }
  out["arc_data"] = arcs;
  out["curlyB"] = rep.curlyB;
  out["sf_values"] = rep.sf_values;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : rep.bound_checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["N"] = c.N;
    jc["P"] = c.P;
    jc["lhs"] = c.lhs;
    jc["lo"] = c.lo;
    jc["hi"] = c.hi;
    jc["margin"] = c.margin;
    jc["pass"] = c.pass;
    checks.push_back(jc);
  }
  out["bound_checks"] = checks;
  out["all_bounds_ok"] = rep.all_bounds_ok;
  return out;
}

nlohmann::ordered_json to_json(const std::vector<IterateRow>& rows,
                               const std::string& label) {
  nlohmann::ordered_json out;
  out["label"] = label;
  bool all = true;
  auto jr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["N"] = r.N;
    row["sf_fourier"] = r.sf_fourier;
    row["sf_direct"] = r.sf_direct;
    row["sf_reduction"] = r.sf_reduction;
    row["agree"] = r.agree;
    all = all && r.agree;
    jr.push_back(row);
  }
  out["rows"] = jr;
  out["all_agree"] = all;
  return out;
}

std::string profile_csv(const LambdaProfile& prof) {
  std::ostringstream os;
  os << "theta,lambda\n";
  for (const auto& a : prof.arcs) {
    os << format_double(a.theta_lo) << "," << a.lambda << "\n";
    os << format_double(a.theta_hi) << "," << a.lambda << "\n";
  }
  for (const auto& j : prof.jumps)
    os << format_double(j.theta) << "," << j.point << "\n";
  return os.str();
}

std::string arcs_csv(const LambdaProfile& prof) {
  std::ostringstream os;
  os << "theta_lo,theta_hi,lambda,d,kernel_dim\n";
  for (const auto& a : prof.arcs)
    os << format_double(a.theta_lo) << "," << format_double(a.theta_hi) << ","
       << a.lambda << "," << a.d << "," << a.kernel_dim << "\n";
  return os.str();
}

std::string iterate_csv(const std::vector<IterateRow>& rows) {
  std::ostringstream os;
  os << "N,sf_fourier,sf_direct,sf_reduction\n";
  for (const auto& r : rows)
    os << r.N << "," << r.sf_fourier << "," << r.sf_direct << ","
       << r.sf_reduction << "\n";
  return os.str();
}

std::string growth_csv(const GrowthReport& rep) {
  std::ostringstream os;
  os << "N,sf,bound_lo,bound_hi,margin\n";
  for (const auto& c : rep.bound_checks) {
    if (c.name != "iterate two-sided") continue;
    os << c.N << "," << format_double(c.lhs) << "," << format_double(c.lo)
       << "," << format_double(c.hi) << "," << format_double(c.margin) << "\n";
  }
  return os.str();
}

std::string branches_csv(const BranchData& branches) {
  std::ostringstream os;
  os << "t,branch_id,eigenvalue\n";
  for (std::size_t b = 0; b < branches.values.size(); ++b)
    for (std::size_t p = 0; p < branches.times.size(); ++p)
      os << format_double(branches.times[p]) << "," << b << ","
         << format_double(branches.values[b][p]) << "\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

}  // namespace specflow::io
