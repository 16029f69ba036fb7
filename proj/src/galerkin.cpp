#include "specflow/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specflow/kernels.hpp"

namespace specflow {

TrialBasis TrialBasis::twisted(cplx z, int K, int n) {
  if (std::abs(std::abs(z) - 1.0) > 1e-8)
    throw InputError("twisted space requires |z| = 1");
  if (K < 1 || n < 1) throw InputError("truncation and dimension must be positive");
  TrialBasis b;
  b.space = Space::twisted;
  double th = std::arg(z);
  if (th < 0) th += kTwoPi;
  if (th >= kTwoPi) th -= kTwoPi;
  b.theta = th;
  b.K = K;
  b.n = n;
  return b;
}

TrialBasis TrialBasis::dirichlet(int M, int n) {
  if (M < 1 || n < 1) throw InputError("truncation and dimension must be positive");
  TrialBasis b;
  b.space = Space::dirichlet;
  b.K = M;
  b.n = n;
  return b;
}

cplx TrialBasis::z() const {
  return space == Space::twisted ? std::polar(1.0, theta) : cplx{0.0, 0.0};
}

double TrialBasis::frequency(int slot) const {
  return space == Space::twisted ? theta + kTwoPi * (slot - K)
                                 : (slot + 1) * M_PI;
}

cplx TrialBasis::scalar_value(int slot, double t) const {
  const double mu = frequency(slot);
  return space == Space::twisted ? std::polar(1.0, mu * t)
                                 : cplx{std::sin(mu * t), 0.0};
}

cplx TrialBasis::scalar_deriv(int slot, double t) const {
  const double mu = frequency(slot);
  return space == Space::twisted ? cplx{0.0, mu} * std::polar(1.0, mu * t)
                                 : cplx{mu * std::cos(mu * t), 0.0};
}

namespace detail {

void gauss_legendre(int q, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(q, q);
  for (int k = 1; k < q; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k - 1, k) = J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(q);
  weights.resize(q);
  for (int i = 0; i < q; ++i) {
    nodes[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    weights[i] = 2.0 * v * v;
  }
}

}  // namespace detail

namespace {

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Quadrature composite_gauss(int Q, int panels) {
  std::vector<double> x, w;
  detail::gauss_legendre(Q, x, w);
  Quadrature q;
  q.nodes.reserve(static_cast<std::size_t>(Q) * panels);
  q.weights.reserve(static_cast<std::size_t>(Q) * panels);
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double b = static_cast<double>(p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < Q; ++i) {
      q.nodes.push_back(mid + half * x[i]);
      q.weights.push_back(half * w[i]);
    }
  }
  return q;
}

// Panels sized so the per-panel phase of the fastest integrand component
// stays below ~1.5 Q; Gauss error then sits far under the 1e-9 target.
int panel_count(const TrialBasis& basis, const GeodesicSystem& sys,
                double T_end, int Q) {
  const int bw = std::max(sys.gamma.bandwidth(), sys.curvature.bandwidth());
  const double basis_cycles =
      basis.space == TrialBasis::Space::twisted ? 2.0 * basis.K + 1.0 : basis.K;
  const double omega = kTwoPi * (basis_cycles + bw * std::max(T_end, 1.0) + 1.0);
  return std::max(4, static_cast<int>(std::ceil(omega / (1.5 * Q))));
}

// G*Gamma and G*(Rbar - Gamma^2) at tau*r_q, each entry contiguous over q.
struct CoeffBuffers {
  std::vector<double> P;
  std::vector<double> S;
};

CoeffBuffers eval_coeffs(const GeodesicSystem& sys, double tau,
                         const Quadrature& quad) {
  const int n = sys.n();
  const std::size_t nodes = quad.nodes.size();
  const Eigen::MatrixXd G = sys.metric.G();
  CoeffBuffers cb;
  cb.P.assign(static_cast<std::size_t>(n) * n * nodes, 0.0);
  cb.S.assign(static_cast<std::size_t>(n) * n * nodes, 0.0);
  for (std::size_t q = 0; q < nodes; ++q) {
    const double s = tau * quad.nodes[q];
    const Eigen::MatrixXd g = sys.gamma.eval(s);
    const Eigen::MatrixXd GP = G * g;
    const Eigen::MatrixXd GS = G * (sys.curvature.eval(s) - g * g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cb.P[(static_cast<std::size_t>(i) * n + j) * nodes + q] = GP(i, j);
        cb.S[(static_cast<std::size_t>(i) * n + j) * nodes + q] = GS(i, j);
      }
  }
  return cb;
}

// entry((l,m),(k,j)) = mu_l mu_k G_mj F1[k-l]
//                    - i tau (mu_k + mu_l) FP[k-l](m,j) + tau^2 FS[k-l](m,j),
// with F*[d] the weighted transforms sum_q w_q e^{2 pi i d r_q} X(tau r_q).
Eigen::MatrixXcd assemble_twisted(const GeodesicSystem& sys,
                                  const TrialBasis& basis, double tau,
                                  const Quadrature& quad) {
  const int n = basis.n, K = basis.K, slots = 2 * K + 1, m = n * slots;
  const std::size_t nodes = quad.nodes.size();
  const CoeffBuffers cb = eval_coeffs(sys, tau, quad);

  const int D = 2 * K;
  std::vector<cplx> F1(D + 1);
  std::vector<Eigen::MatrixXcd> FP(D + 1), FS(D + 1);
  std::vector<cplx> c(nodes), u(nodes);
  for (std::size_t q = 0; q < nodes; ++q)
    u[q] = std::polar(1.0, kTwoPi * quad.nodes[q]);
  for (int d = 0; d <= D; ++d) {
    if (d % 16 == 0) {  // cap phase-recurrence drift
      for (std::size_t q = 0; q < nodes; ++q)
        c[q] = quad.weights[q] * std::polar(1.0, kTwoPi * d * quad.nodes[q]);
    }
    cplx f1 = 0.0;
    for (std::size_t q = 0; q < nodes; ++q) f1 += c[q];
    F1[d] = f1;
    FP[d].resize(n, n);
    FS[d].resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t off = (static_cast<std::size_t>(i) * n + j) * nodes;
        FP[d](i, j) = kernels::dot_cr(c.data(), cb.P.data() + off, nodes);
        FS[d](i, j) = kernels::dot_cr(c.data(), cb.S.data() + off, nodes);
      }
    kernels::cmul_inplace(c.data(), u.data(), nodes);
  }

  Eigen::MatrixXcd M(m, m);
  const Eigen::VectorXd& eps = sys.metric.epsilon;
  for (int b = 0; b < m; ++b) {
    const int kidx = b / n, jj = b % n;
    const double mu_k = basis.frequency(kidx);
    for (int a = 0; a <= b; ++a) {
      const int lidx = a / n, mm = a % n;
      const double mu_l = basis.frequency(lidx);
      const int d = kidx - lidx;
      cplx val = tau * tau * FS[d](mm, jj) -
                 cplx{0.0, tau * (mu_k + mu_l)} * FP[d](mm, jj);
      if (mm == jj) val += mu_l * mu_k * eps[mm] * F1[d];
      if (a == b) val = cplx{val.real(), 0.0};
      M(a, b) = val;
      if (a != b) M(b, a) = std::conj(val);
    }
  }
  return M;
}

Eigen::MatrixXcd assemble_twisted_gram(const TrialBasis& basis,
                                       const Quadrature& quad) {
  const int n = basis.n, slots = 2 * basis.K + 1, m = n * slots;
  const int D = 2 * basis.K;
  std::vector<cplx> F1(D + 1);
  for (int d = 0; d <= D; ++d) {
    cplx f1 = 0.0;
    for (std::size_t q = 0; q < quad.nodes.size(); ++q)
      f1 += quad.weights[q] * std::polar(1.0, kTwoPi * d * quad.nodes[q]);
    F1[d] = f1;
  }
  Eigen::MatrixXcd Gm = Eigen::MatrixXcd::Zero(m, m);
  for (int b = 0; b < m; ++b) {
    const int kidx = b / n, jj = b % n;
    for (int a = 0; a <= b; ++a) {
      const int lidx = a / n, mm = a % n;
      if (mm != jj) continue;
      const cplx val = 1.0 + basis.frequency(lidx) * basis.frequency(kidx) *
                                 F1[kidx - lidx];
      Gm(a, b) = a == b ? cplx{val.real(), 0.0} : val;
      if (a != b) Gm(b, a) = std::conj(val);
    }
  }
  return Gm;
}

// sin/cos transforms of the coefficient buffers at integer half-frequencies
struct DirichletTransforms {
  std::vector<double> C1;            // sum w cos(d pi r)
  std::vector<Eigen::MatrixXd> SP;   // sum w sin(d pi r) (G Gamma)
  std::vector<Eigen::MatrixXd> CS;   // sum w cos(d pi r) (G (Rbar - Gamma^2))
};

DirichletTransforms dirichlet_transforms(const GeodesicSystem& sys,
                                         const TrialBasis& basis, double tau,
                                         const Quadrature& quad,
                                         bool with_coeffs) {
  const int n = basis.n, D = 2 * basis.K;
  const std::size_t nodes = quad.nodes.size();
  DirichletTransforms tr;
  tr.C1.resize(D + 1);
  if (with_coeffs) {
    tr.SP.assign(D + 1, Eigen::MatrixXd::Zero(n, n));
    tr.CS.assign(D + 1, Eigen::MatrixXd::Zero(n, n));
  }
  CoeffBuffers cb;
  if (with_coeffs) cb = eval_coeffs(sys, tau, quad);
  std::vector<double> cosv(nodes), sinv(nodes);
  for (int d = 0; d <= D; ++d) {
    for (std::size_t q = 0; q < nodes; ++q) {
      const double ang = d * M_PI * quad.nodes[q];
      cosv[q] = quad.weights[q] * std::cos(ang);
      sinv[q] = quad.weights[q] * std::sin(ang);
    }
    tr.C1[d] = std::accumulate(cosv.begin(), cosv.end(), 0.0);
    if (!with_coeffs) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t off = (static_cast<std::size_t>(i) * n + j) * nodes;
        tr.SP[d](i, j) = kernels::dot_rr(sinv.data(), cb.P.data() + off, nodes);
        tr.CS[d](i, j) = kernels::dot_rr(cosv.data(), cb.S.data() + off, nodes);
      }
  }
  return tr;
}

Eigen::MatrixXcd assemble_dirichlet(const GeodesicSystem& sys,
                                    const TrialBasis& basis, double tau,
                                    const Quadrature& quad) {
  const int n = basis.n, M = basis.K, m = n * M;
  const DirichletTransforms tr = dirichlet_transforms(sys, basis, tau, quad, true);
  const Eigen::VectorXd& eps = sys.metric.epsilon;
  const double pi2 = M_PI * M_PI;

  Eigen::MatrixXcd out(m, m);
  for (int b = 0; b < m; ++b) {
    const int s = b / n + 1, jj = b % n;
    for (int a = 0; a <= b; ++a) {
      const int p = a / n + 1, ii = a % n;
      const int dm = std::abs(p - s), dp = p + s;
      const double sgn = p == s ? 0.0 : (p > s ? 1.0 : -1.0);
      double val = tau * M_PI * 0.5 *
                       ((p - s) * tr.SP[dp](ii, jj) -
                        dp * sgn * tr.SP[dm](ii, jj)) +
                   tau * tau * 0.5 * (tr.CS[dm](ii, jj) - tr.CS[dp](ii, jj));
      if (ii == jj)
        val += p * s * pi2 * 0.5 * eps[ii] * (tr.C1[dm] + tr.C1[dp]);
      out(a, b) = val;
      if (a != b) out(b, a) = val;
    }
  }
  return out;
}

Eigen::MatrixXcd assemble_dirichlet_gram(const GeodesicSystem& sys,
                                         const TrialBasis& basis,
                                         const Quadrature& quad) {
  const int n = basis.n, M = basis.K, m = n * M;
  const DirichletTransforms tr =
      dirichlet_transforms(sys, basis, 0.0, quad, false);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  for (int b = 0; b < m; ++b) {
    const int s = b / n + 1, jj = b % n;
    for (int a = 0; a <= b; ++a) {
      const int p = a / n + 1, ii = a % n;
      if (ii != jj) continue;
      const double val =
          p * s * M_PI * M_PI * 0.5 * (tr.C1[std::abs(p - s)] + tr.C1[p + s]);
      out(a, b) = val;
      if (a != b) out(b, a) = val;
    }
  }
  return out;
}

Eigen::VectorXd herm_eigenvalues(const Eigen::MatrixXcd& herm) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Inertia counts_from(const Eigen::VectorXd& vals, double tau,
                    double scale_floor) {
  double mag = scale_floor;
  for (int i = 0; i < vals.size(); ++i) mag = std::max(mag, std::abs(vals[i]));
  const double band = tau * mag;
  Inertia out;
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] < -band)
      ++out.n_minus;
    else if (vals[i] > band)
      ++out.n_plus;
    else
      ++out.n_zero;
  }
  return out;
}

}  // namespace

Inertia inertia_counts(const Eigen::MatrixXcd& herm, double tau,
                       double scale_floor) {
  return counts_from(herm_eigenvalues(herm), tau, scale_floor);
}

std::pair<int, int> strict_negative_index(const Eigen::MatrixXcd& herm,
                                          double tau) {
  const Inertia in = inertia_counts(herm, tau);
  return {in.n_minus, in.n_zero};
}

GalerkinPath assemble_path(const GeodesicSystem& sys, const TrialBasis& basis,
                           double T_end, int P, int Q, bool check_quadrature,
                           const NumericConfig& cfg) {
  if (!(T_end > 0)) throw InputError("T_end must be positive");
  if (P < 8) throw InputError("P must be at least 8");
  if (Q < 16) throw InputError("Q must be at least 16");
  if (basis.n != sys.n())
    throw InputError("trial basis dimension does not match the system");

  const int panels = panel_count(basis, sys, T_end, Q);
  const Quadrature quad = composite_gauss(Q, panels);

  GalerkinPath path;
  path.basis = basis;
  for (int p = 0; p <= P; ++p)
    path.times.push_back(T_end * static_cast<double>(p) / P);

  const bool twistedspace = basis.space == TrialBasis::Space::twisted;
  path.assemble_at = [sys, basis, quad, twistedspace](double tau) {
    return twistedspace ? assemble_twisted(sys, basis, tau, quad)
                        : assemble_dirichlet(sys, basis, tau, quad);
  };
  path.B_start = path.assemble_at(0.0);
  path.B_end = path.assemble_at(T_end);
  path.gram = twistedspace ? assemble_twisted_gram(basis, quad)
                           : assemble_dirichlet_gram(sys, basis, quad);

  if (check_quadrature) {
    const Quadrature quad2 = composite_gauss(2 * Q, panels);
    const Eigen::MatrixXcd ref =
        twistedspace ? assemble_twisted(sys, basis, T_end, quad2)
                     : assemble_dirichlet(sys, basis, T_end, quad2);
    path.quad_residual = (path.B_end - ref).cwiseAbs().maxCoeff() /
                         (1.0 + path.B_end.cwiseAbs().maxCoeff());
    if (path.quad_residual > 1e-9)
      throw ComputationError("quadrature not converged at Q doubling");
  }

  path.kernel_start = inertia_counts(path.B_start, cfg.tau_inertia).n_zero;
  path.kernel_end = inertia_counts(path.B_end, cfg.tau_inertia).n_zero;
  return path;
}

namespace {

struct EigPair {
  Eigen::VectorXd vals;
  Eigen::MatrixXcd vecs;
};

EigPair solve_full(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return {es.eigenvalues(), es.eigenvectors()};
}

// maximal-overlap assignment, ties broken by eigenvalue proximity
std::vector<int> match_branches(const EigPair& prev, const EigPair& cur) {
  const int m = static_cast<int>(prev.vals.size());
  Eigen::MatrixXd overlap = (prev.vecs.adjoint() * cur.vecs).cwiseAbs();
  struct Entry {
    double mag;
    double prox;
    int r, c;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(m) * m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      entries.push_back(
          {overlap(r, c), std::abs(prev.vals[r] - cur.vals[c]), r, c});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.mag != b.mag) return a.mag > b.mag;
    return a.prox < b.prox;
  });
  std::vector<int> row_of_col(m, -1);
  std::vector<bool> row_used(m, false), col_used(m, false);
  int assigned = 0;
  for (const auto& e : entries) {
    if (assigned == m) break;
    if (row_used[e.r] || col_used[e.c]) continue;
    row_of_col[e.c] = e.r;
    row_used[e.r] = col_used[e.c] = true;
    ++assigned;
  }
  return row_of_col;
}

int zone(double v, double band) { return v < -band ? -1 : (v > band ? 1 : 0); }

struct Tracker {
  const GalerkinPath* path;
  double band = 0.0;
  double graze = 0.0;
  int max_depth = 6;
  std::vector<CrossingEvent>* events = nullptr;

  // Walks one interval; eigenvector bookkeeping refines where a branch either
  // changes zone or grazes the zero band (possible double crossing).
  void walk(double t0, const EigPair& s0, const std::vector<int>& ids0,
            double t1, const EigPair& s1, std::vector<int>& ids1_out,
            int depth) const {
    const std::vector<int> assign = match_branches(s0, s1);
    const int m = static_cast<int>(s0.vals.size());
    std::vector<int> ids1(m);
    bool suspicious = false;
    for (int c = 0; c < m; ++c) {
      const int r = assign[c];
      ids1[c] = ids0[r];
      const int z0 = zone(s0.vals[r], band), z1 = zone(s1.vals[c], band);
      if (z0 != z1)
        suspicious = true;
      else if (z0 != 0 && (std::abs(s0.vals[r]) < graze ||
                           std::abs(s1.vals[c]) < graze))
        suspicious = true;
    }
    if (suspicious && depth < max_depth) {
      const double tm = 0.5 * (t0 + t1);
      const EigPair sm = solve_full(path->assemble_at(tm));
      std::vector<int> idsm(m);
      walk(t0, s0, ids0, tm, sm, idsm, depth + 1);
      walk(tm, sm, idsm, t1, s1, ids1_out, depth + 1);
      return;
    }
    for (int c = 0; c < m; ++c) {
      const int r = assign[c];
      const int z0 = zone(s0.vals[r], band), z1 = zone(s1.vals[c], band);
      if (z0 != z1) {
        events->push_back({t0, t1, ids0[r], z1 > z0 ? 1 : -1});
      } else if (depth >= max_depth && z0 != 0 &&
                 (std::abs(s0.vals[r]) < graze ||
                  std::abs(s1.vals[c]) < graze)) {
        throw GridError(
            "time grid too coarse: eigenvalue branch grazes the zero band "
            "unresolved at maximal bisection depth");
      }
    }
    ids1_out = ids1;
  }
};

}  // namespace

SpectralFlowResult spectral_flow(const GalerkinPath& path,
                                 const NumericConfig& cfg,
                                 bool with_crossings) {
  const Eigen::VectorXd ev_start = herm_eigenvalues(path.B_start);
  const Eigen::VectorXd ev_end = herm_eigenvalues(path.B_end);
  const Inertia a = counts_from(ev_start, cfg.tau_inertia, 0.0);
  const Inertia b = counts_from(ev_end, cfg.tau_inertia, 0.0);

  SpectralFlowResult res;
  res.n_minus_start = a.n_minus;
  res.n_minus_end = b.n_minus;
  res.kernel_start = a.n_zero;
  res.kernel_end = b.n_zero;
  res.value = a.n_minus - b.n_minus;
  if (!with_crossings) return res;

  res.crossings_computed = true;
  double mag = 0.0;
  for (int i = 0; i < ev_start.size(); ++i)
    mag = std::max({mag, std::abs(ev_start[i]), std::abs(ev_end[i])});
  Tracker tracker;
  tracker.path = &path;
  tracker.band = cfg.tau_inertia * mag;
  tracker.graze = 8.0 * tracker.band;
  tracker.events = &res.crossings;

  EigPair prev = solve_full(path.B_start);
  std::vector<int> ids(prev.vals.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  for (std::size_t p = 1; p < path.times.size(); ++p) {
    const bool last = p + 1 == path.times.size();
    EigPair cur = last ? solve_full(path.B_end)
                       : solve_full(path.assemble_at(path.times[p]));
    std::vector<int> ids_next;
    tracker.walk(path.times[p - 1], prev, ids, path.times[p], cur, ids_next, 0);
    prev = std::move(cur);
    ids = std::move(ids_next);
  }
  std::sort(res.crossings.begin(), res.crossings.end(),
            [](const CrossingEvent& x, const CrossingEvent& y) {
              return x.t_lo < y.t_lo;
            });
  return res;
}

StabilizedFlow stabilized_spectral_flow(const GeodesicSystem& sys,
                                        TrialBasis::Space space, cplx z,
                                        double T_end,
                                        const NumericConfig& cfg) {
  StabilizedFlow out;
  int K = cfg.K;
  while (K <= cfg.K_cap) {
    const TrialBasis basis = space == TrialBasis::Space::twisted
                                 ? TrialBasis::twisted(z, K, sys.n())
                                 : TrialBasis::dirichlet(K, sys.n());
    const GalerkinPath path =
        assemble_path(sys, basis, T_end, cfg.P, cfg.Q,
                      /*check_quadrature=*/out.history.empty(), cfg);
    const SpectralFlowResult sf = spectral_flow(path, cfg, false);
    out.history.push_back(sf.value);
    out.truncations.push_back(K);
    const std::size_t s = out.history.size();
    if (s >= 2 && out.history[s - 1] == out.history[s - 2]) {
      out.value = out.history.back();
      out.truncation = K;
      return out;
    }
    K *= 2;
  }
  std::vector<int> tail = out.history;
  if (tail.size() > 3) tail.erase(tail.begin(), tail.end() - 3);
  throw StabilizationError("spectral flow did not stabilize by the truncation cap",
                           std::move(tail));
}

BranchData eigenvalue_branches(const GalerkinPath& path,
                               const NumericConfig&) {
  BranchData out;
  out.times = path.times;
  EigPair prev = solve_full(path.B_start);
  const int m = static_cast<int>(prev.vals.size());
  out.values.assign(m, std::vector<double>(path.times.size(), 0.0));
  std::vector<int> ids(m);
  for (int i = 0; i < m; ++i) {
    ids[i] = i;
    out.values[i][0] = prev.vals[i];
  }
  for (std::size_t p = 1; p < path.times.size(); ++p) {
    const bool last = p + 1 == path.times.size();
    EigPair cur = last ? solve_full(path.B_end)
                       : solve_full(path.assemble_at(path.times[p]));
    const std::vector<int> assign = match_branches(prev, cur);
    std::vector<int> ids_next(m);
    for (int c = 0; c < m; ++c) {
      ids_next[c] = ids[assign[c]];
      out.values[ids_next[c]][p] = cur.vals[c];
    }
    prev = std::move(cur);
    ids = std::move(ids_next);
  }
  return out;
}

}  // namespace specflow
