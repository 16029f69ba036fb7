#include "specflow/model.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace specflow {

namespace {

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

CoefficientPath CoefficientPath::constant(Eigen::MatrixXd value) {
  CoefficientPath p;
  p.constant_ = true;
  p.n_ = static_cast<int>(value.rows());
  p.cosA_.push_back(std::move(value));
  return p;
}

CoefficientPath CoefficientPath::from_samples(std::vector<Eigen::MatrixXd> grid) {
  if (grid.empty()) throw InputError("empty coefficient grid");
  const int m = static_cast<int>(grid.size());
  const int n = static_cast<int>(grid[0].rows());
  for (const auto& g : grid)
    if (g.rows() != n || g.cols() != n)
      throw InputError("coefficient grid entries have inconsistent dimensions");

  CoefficientPath p;
  p.constant_ = false;
  p.n_ = n;
  p.m_ = m;
  p.grid_ = std::move(grid);

  const int F = (m - 1) / 2;
  p.cosA_.assign(F + 1, Eigen::MatrixXd::Zero(n, n));
  p.sinB_.assign(F + 1, Eigen::MatrixXd::Zero(n, n));
  for (int j = 0; j < m; ++j) p.cosA_[0] += p.grid_[j] / m;
  for (int f = 1; f <= F; ++f) {
    for (int j = 0; j < m; ++j) {
      const double ang = kTwoPi * f * j / m;
      p.cosA_[f] += (2.0 / m) * std::cos(ang) * p.grid_[j];
      p.sinB_[f] += (2.0 / m) * std::sin(ang) * p.grid_[j];
    }
  }
  if (m % 2 == 0 && m > 1) {
    p.nyquist_ = true;
    p.nyquistA_ = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < m; ++j)
      p.nyquistA_ += ((j % 2 == 0) ? 1.0 : -1.0) / m * p.grid_[j];
  }
  return p;
}

Eigen::MatrixXd CoefficientPath::eval(double t) const {
  if (constant_) return cosA_[0];
  Eigen::MatrixXd out = cosA_[0];
  for (std::size_t f = 1; f < cosA_.size(); ++f) {
    const double ang = kTwoPi * static_cast<double>(f) * t;
    out += std::cos(ang) * cosA_[f] + std::sin(ang) * sinB_[f];
  }
  if (nyquist_) out += std::cos(M_PI * m_ * t) * nyquistA_;
  return out;
}

Eigen::MatrixXd CoefficientPath::deriv(double t) const {
  if (constant_) return Eigen::MatrixXd::Zero(n_, n_);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
  for (std::size_t f = 1; f < cosA_.size(); ++f) {
    const double w = kTwoPi * static_cast<double>(f);
    out += -w * std::sin(w * t) * cosA_[f] + w * std::cos(w * t) * sinB_[f];
  }
  if (nyquist_) out += -M_PI * m_ * std::sin(M_PI * m_ * t) * nyquistA_;
  return out;
}

int CoefficientPath::bandwidth() const {
  if (constant_) return 0;
  int F = static_cast<int>(cosA_.size()) - 1;
  if (nyquist_) F = std::max(F, m_ / 2);
  return F;
}

namespace {

SignatureMetric make_metric(const Eigen::VectorXd& eps) {
  SignatureMetric m;
  m.n = static_cast<int>(eps.size());
  m.epsilon = eps;
  m.n_minus = 0;
  for (int i = 0; i < m.n; ++i)
    if (eps[i] < 0) ++m.n_minus;
  return m;
}

GeodesicSystem make_constant_system(const Eigen::VectorXd& eps, double rbar,
                                    const std::string& label) {
  GeodesicSystem sys;
  sys.metric = make_metric(eps);
  const int n = sys.metric.n;
  sys.gamma = CoefficientPath::constant(Eigen::MatrixXd::Zero(n, n));
  sys.curvature =
      CoefficientPath::constant(rbar * Eigen::MatrixXd::Identity(n, n));
  sys.label = label;
  return sys;
}

}  // namespace

GeodesicSystem preset(const std::string& name) {
  std::string base = name;
  double param = 0.0;
  bool has_param = false;
  if (auto open = name.find('('); open != std::string::npos) {
    if (name.back() != ')') throw InputError("malformed preset name: " + name);
    base = name.substr(0, open);
    try {
      param = std::stod(name.substr(open + 1, name.size() - open - 2));
    } catch (const std::exception&) {
      throw InputError("malformed preset parameter in: " + name);
    }
    has_param = true;
  }

  if (base == "flat-R") {
    return make_constant_system(Eigen::VectorXd::Ones(1), 0.0, "flat-R");
  }
  if (base == "flat-L") {
    Eigen::VectorXd eps(2);
    eps << 1.0, -1.0;
    return make_constant_system(eps, 0.0, "flat-L");
  }
  if (base == "hyp-L") {
    if (!has_param || !(param > 0.0))
      throw InputError("hyp-L requires a parameter c > 0");
    return make_constant_system(-Eigen::VectorXd::Ones(1), param, name);
  }
  if (base == "ell-R") {
    if (!has_param || !(param > 0.0 && param < 0.5))
      throw InputError("ell-R requires a parameter in (0, 1/2)");
    const double w = kTwoPi * param;
    return make_constant_system(Eigen::VectorXd::Ones(1), -w * w, name);
  }
  if (base == "dirichlet-R") {
    return make_constant_system(Eigen::VectorXd::Ones(1), -kTwoPi * kTwoPi,
                                "dirichlet-R");
  }
  throw InputError("unknown preset: " + name);
}

namespace detail {
double structural_tolerance(const GeodesicSystem& sys) {
  return (sys.gamma.is_constant() && sys.curvature.is_constant()) ? 1e-10
                                                                  : 1e-8;
}
}  // namespace detail

namespace {

CoefficientPath parse_grid(const nlohmann::json& node, int n,
                           const std::string& what) {
  if (!node.is_object() || !node.contains("grid"))
    throw InputError(what + ": expected an object with a \"grid\" field");
  const auto& grid = node.at("grid");
  if (!grid.is_array() || grid.empty())
    throw InputError(what + ": grid must be a non-empty array");
  std::vector<Eigen::MatrixXd> samples;
  samples.reserve(grid.size());
  for (const auto& entry : grid) {
    if (!entry.is_array() || static_cast<int>(entry.size()) != n * n)
      throw InputError(what + ": each grid entry must hold n*n row-major reals");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = entry.at(i * n + j).get<double>();
    samples.push_back(std::move(m));
  }
  return CoefficientPath::from_samples(std::move(samples));
}

}  // namespace

GeodesicSystem load_system(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("config document must be a JSON object");
  if (doc.contains("preset")) return preset(doc.at("preset").get<std::string>());

  for (const char* field : {"n", "epsilon", "gamma", "curvature"})
    if (!doc.contains(field))
      throw InputError(std::string("config missing field: ") + field);

  const int n = doc.at("n").get<int>();
  if (n < 1) throw InputError("n must be a positive integer");
  const auto& eps_node = doc.at("epsilon");
  if (!eps_node.is_array() || static_cast<int>(eps_node.size()) != n)
    throw InputError("epsilon must list n entries");
  Eigen::VectorXd eps(n);
  for (int i = 0; i < n; ++i) {
    const double e = eps_node.at(i).get<double>();
    if (e != 1.0 && e != -1.0)
      throw InputError("epsilon entries must be +1 or -1 (pre-diagonalize G)");
    eps[i] = e;
  }

  GeodesicSystem sys;
  sys.metric = make_metric(eps);
  sys.gamma = parse_grid(doc.at("gamma"), n, "gamma");
  sys.curvature = parse_grid(doc.at("curvature"), n, "curvature");
  sys.label = doc.value("label", std::string("custom"));

  const double tol = detail::structural_tolerance(sys);
  const Eigen::MatrixXd G = sys.metric.G();
  for (const auto& g : sys.gamma.samples())
    if (max_abs(G * g + g.transpose() * G) > tol)
      throw InputError("gamma not G-antisymmetric");
  for (const auto& r : sys.curvature.samples())
    if (max_abs(G * r - r.transpose() * G) > tol)
      throw InputError("curvature not G-symmetric");
  return sys;
}

GeodesicSystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw InputError(std::string("config parse error: ") + e.what());
  }
  return load_system(doc);
}

nlohmann::ordered_json to_config_json(const GeodesicSystem& sys, int grid_m) {
  nlohmann::ordered_json out;
  const int n = sys.n();
  out["n"] = n;
  auto eps = nlohmann::ordered_json::array();
  for (int i = 0; i < n; ++i) eps.push_back(static_cast<int>(sys.metric.epsilon[i]));
  out["epsilon"] = eps;
  auto dump_path = [&](const CoefficientPath& p) {
    auto grid = nlohmann::ordered_json::array();
    for (int j = 0; j < grid_m; ++j) {
      const Eigen::MatrixXd v = p.eval(static_cast<double>(j) / grid_m);
      auto row = nlohmann::ordered_json::array();
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) row.push_back(v(r, c));
      grid.push_back(row);
    }
    return nlohmann::ordered_json{{"grid", grid}};
  };
  out["gamma"] = dump_path(sys.gamma);
  out["curvature"] = dump_path(sys.curvature);
  out["label"] = sys.label;
  return out;
}

ValidationReport validate_system(const GeodesicSystem& sys) {
  ValidationReport rep;
  rep.label = sys.label;
  const double tol = detail::structural_tolerance(sys);
  const Eigen::MatrixXd G = sys.metric.G();

  auto add = [&](const std::string& name, double violation, double tolerance) {
    ValidationCheck c{name, violation, tolerance, violation <= tolerance};
    rep.pass = rep.pass && c.pass;
    rep.checks.push_back(std::move(c));
  };

  add("G squared identity", max_abs(G * G - Eigen::MatrixXd::Identity(sys.n(), sys.n())), tol);

  int count_minus = 0;
  for (int i = 0; i < sys.n(); ++i)
    if (sys.metric.epsilon[i] < 0) ++count_minus;
  add("signature count", std::abs(count_minus - sys.metric.n_minus), 0.5);

  double viol_gamma = 0.0, viol_curv = 0.0;
  for (int j = 0; j <= 100; ++j) {
    const double t = j / 100.0;
    const Eigen::MatrixXd g = sys.gamma.eval(t);
    const Eigen::MatrixXd r = sys.curvature.eval(t);
    viol_gamma = std::max(viol_gamma, max_abs(G * g + g.transpose() * G));
    viol_curv = std::max(viol_curv, max_abs(G * r - r.transpose() * G));
  }
  for (const auto& g : sys.gamma.samples())
    viol_gamma = std::max(viol_gamma, max_abs(G * g + g.transpose() * G));
  for (const auto& r : sys.curvature.samples())
    viol_curv = std::max(viol_curv, max_abs(G * r - r.transpose() * G));
  add("gamma G-antisymmetry", viol_gamma, tol);
  add("curvature G-symmetry", viol_curv, tol);

  add("gamma periodicity", max_abs(sys.gamma.eval(1.0) - sys.gamma.eval(0.0)), tol);
  add("curvature periodicity",
      max_abs(sys.curvature.eval(1.0) - sys.curvature.eval(0.0)), tol);
  return rep;
}

GeodesicSystem random_system(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  if (n == 0) n = 2 + static_cast<int>(rng() % 3);

  Eigen::VectorXd eps(n);
  for (int i = 0; i < n; ++i) eps[i] = (rng() % 2 == 0) ? 1.0 : -1.0;
  const Eigen::MatrixXd G = eps.asDiagonal();

  const int bw = 2;
  // trig-polynomial coefficient families; antisymmetric A drives gamma = G*A,
  // symmetric S drives curvature = G*S
  auto rand_antisym = [&]() {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        a(i, j) = 0.6 * unit(rng);
        a(j, i) = -a(i, j);
      }
    return a;
  };
  auto rand_sym = [&]() {
    Eigen::MatrixXd s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) s(i, j) = s(j, i) = 0.9 * unit(rng);
    return s;
  };

  std::vector<Eigen::MatrixXd> Ac(bw + 1), As(bw + 1), Sc(bw + 1), Ss(bw + 1);
  for (int f = 0; f <= bw; ++f) {
    const double damp = 1.0 / (1.0 + f * f);
    Ac[f] = damp * rand_antisym();
    As[f] = damp * rand_antisym();
    Sc[f] = damp * rand_sym();
    Ss[f] = damp * rand_sym();
  }

  const int m = 32;
  std::vector<Eigen::MatrixXd> gamma_grid, curv_grid;
  gamma_grid.reserve(m);
  curv_grid.reserve(m);
  for (int j = 0; j < m; ++j) {
    const double t = static_cast<double>(j) / m;
    Eigen::MatrixXd A = Ac[0];
    Eigen::MatrixXd S = Sc[0];
    for (int f = 1; f <= bw; ++f) {
      const double c = std::cos(kTwoPi * f * t), s = std::sin(kTwoPi * f * t);
      A += c * Ac[f] + s * As[f];
      S += c * Sc[f] + s * Ss[f];
    }
    gamma_grid.push_back(G * A);
    curv_grid.push_back(G * S);
  }

  GeodesicSystem sys;
  sys.metric = make_metric(eps);
  sys.gamma = CoefficientPath::from_samples(std::move(gamma_grid));
  sys.curvature = CoefficientPath::from_samples(std::move(curv_grid));
  std::ostringstream label;
  label << "random-" << seed << "-n" << n;
  sys.label = label.str();
  return sys;
}

}  // namespace specflow
