#include "liouville/schrodingerizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <fftw3.h>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "liouville/error.hpp"

namespace liouville {

using cd = std::complex<double>;
using SpMatCC = Eigen::SparseMatrix<cd, Eigen::ColMajor, int>;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

HomogenizedSystem homogenize(const SpMat& A, const Vec& b, const Vec& f0) {
  const int n = int(A.rows());
  if (A.cols() != n || b.size() != n || f0.size() != n)
    throw ShapeError("homogenize: inconsistent sizes");
  HomogenizedSystem h;
  h.n = n;
  const double bmax = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
  h.eps = bmax > 0.0 ? bmax : 1.0;
  std::vector<Triplet> t;
  t.reserve(A.nonZeros() + n);
  for (int r = 0; r < n; ++r)
    for (SpMat::InnerIterator it(A, r); it; ++it) t.emplace_back(r, int(it.col()), it.value());
  for (int r = 0; r < n; ++r)
    if (b[r] != 0.0) t.emplace_back(r, n + r, b[r] / h.eps);
  h.At = from_triplets(2 * n, 2 * n, t);
  h.state0.resize(2 * n);
  h.state0.head(n) = f0;
  h.state0.tail(n).setConstant(h.eps);
  return h;
}

HermitianSplit split_hermitian(const SpMat& At) {
  if (At.rows() != At.cols()) throw ShapeError("split_hermitian: matrix must be square");
  SpMat T = At.transpose();
  HermitianSplit s;
  s.H1 = 0.5 * (At + T);
  s.H1.prune(0.0, 0.0);
  SpMat skew = 0.5 * (At - T);
  skew.prune(0.0, 0.0);
  // (At - At^T) / (2i) = -i * skew
  s.H2 = (skew.cast<cd>() * cd(0.0, -1.0)).eval();
  s.H1.makeCompressed();
  s.H2.makeCompressed();
  return s;
}

ExtremeEigs extreme_eigs(const SpMat& H1, double tol, int max_iter) {
  const int n = int(H1.rows());
  ExtremeEigs out;
  if (n == 0) return out;
  if (n <= 200) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(H1), Eigen::EigenvaluesOnly);
    out.lambda_plus = std::max(es.eigenvalues().maxCoeff(), 0.0);
    out.lambda_minus = std::max(-es.eigenvalues().minCoeff(), 0.0);
    return out;
  }
  const int m = std::min(max_iter, n);
  Eigen::MatrixXd Q(n, m + 1);
  std::vector<double> alpha, beta;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Vec q(n);
  for (int i = 0; i < n; ++i) q[i] = nd(rng);
  Q.col(0) = q / q.norm();
  std::vector<double> history;
  Vec w;
  for (int k = 0; k < m; ++k) {
    spmv_parallel(H1, Vec(Q.col(k)), w);
    const double a = Q.col(k).dot(w);
    alpha.push_back(a);
    // full reorthogonalisation, twice
    for (int pass = 0; pass < 2; ++pass) {
      Vec c = Q.leftCols(k + 1).transpose() * w;
      w -= Q.leftCols(k + 1) * c;
    }
    const double bk = w.norm();
    beta.push_back(bk);
    const bool invariant = bk < 1e-12 * std::max(1.0, std::abs(a));
    if ((k + 1) % 10 == 0 || invariant || k + 1 == m) {
      const int s = k + 1;
      Vec d = Eigen::Map<Vec>(alpha.data(), s);
      Vec e = Eigen::Map<Vec>(beta.data(), s - 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
      const auto& th = es.eigenvalues();
      const double lo = th[0], hi = th[s - 1];
      history.push_back(lo);
      history.push_back(hi);
      const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
      const double r_lo = bk * std::abs(es.eigenvectors()(s - 1, 0));
      const double r_hi = bk * std::abs(es.eigenvectors()(s - 1, s - 1));
      if (invariant || (r_lo <= tol * scale && r_hi <= tol * scale)) {
        out.lambda_plus = std::max(hi, 0.0);
        out.lambda_minus = std::max(-lo, 0.0);
        out.iterations = s;
        return out;
      }
    }
    Q.col(k + 1) = w / bk;
  }
  throw ConvergenceError("Lanczos did not converge in " + std::to_string(m) + " steps",
                         history);
}

double PGrid::mu(int q) const {
  const int l = q < n_p / 2 ? q : q - n_p;
  return 2.0 * std::numbers::pi * l / (R - L);
}

PGrid make_p_grid(double L, double R, int n_p, double alpha_minus) {
  if (!(L < 0.0 && R > 0.0)) throw ConfigError("p interval must satisfy L < 0 < R");
  if (n_p < 2 || (n_p & (n_p - 1)) != 0) throw ConfigError("N_p must be a power of two");
  if (!(alpha_minus >= 1.0)) throw ConfigError("alpha for p < 0 must be >= 1");
  PGrid g;
  g.L = L;
  g.R = R;
  g.n_p = n_p;
  g.dp = (R - L) / n_p;
  g.alpha_minus = alpha_minus;
  g.p.resize(n_p);
  for (int k = 0; k < n_p; ++k) g.p[k] = L + k * g.dp;
  return g;
}

PGrid design_p_grid(double lambda_plus, double lambda_minus, double T, double eps_target,
                    int n_p, double margin, double alpha_minus) {
  if (!(eps_target > 0.0 && eps_target < 1.0)) throw ConfigError("eps_target must lie in (0,1)");
  const double off = std::log(1.0 / eps_target) + margin;
  return make_p_grid(-lambda_minus * T - off, lambda_plus * T + off, n_p, alpha_minus);
}

RecoveryPlan plan_recovery(const PGrid& g, double lambda_plus_T, std::optional<double> override_p) {
  RecoveryPlan plan;
  if (override_p) {
    if (!(*override_p > 0.0)) throw DomainError("recovery point must be positive");
    const int k = int(std::lround((*override_p - g.L) / g.dp));
    if (k < 0 || k >= g.n_p) throw DomainError("recovery point lies outside the p grid");
    plan.index = k;
    plan.p = g.p[k];
    if (plan.p <= 0.0) throw DomainError("recovery point snapped to a nonpositive grid point");
    if (std::abs(plan.p - *override_p) > 1e-12 * std::max(1.0, std::abs(*override_p)))
      plan.warning = "recovery point snapped from " + std::to_string(*override_p) + " to " +
                     std::to_string(plan.p) + "; ";
  } else {
    int k = int(std::ceil((std::max(lambda_plus_T, 0.0) - g.L) / g.dp - 1e-9));
    while (k < g.n_p && g.p[k] <= 0.0) ++k;
    if (k >= g.n_p) throw DomainError("no positive recovery point on the p grid");
    plan.index = k;
    plan.p = g.p[k];
  }
  plan.valid = plan.p >= lambda_plus_T;
  if (!plan.valid)
    plan.warning += "recovery point " + std::to_string(plan.p) + " is below lambda_plus*T = " +
                    std::to_string(lambda_plus_T);
  return plan;
}

Extended init_warped(const Vec& u0, const PGrid& g) {
  Extended w(u0.size(), g.n_p);
  for (int k = 0; k < g.n_p; ++k) {
    const double pk = g.p[k];
    const double s = std::exp(-g.alpha(pk) * std::abs(pk));
    for (int m = 0; m < u0.size(); ++m) w(m, k) = s * u0[m];
  }
  return w;
}

void spectral_transform_p(Extended& w, const PGrid& g, Direction dir, Exec exec) {
  if (w.cols() != g.n_p) throw ShapeError("spectral transform: column count must equal N_p");
  const int rows = int(w.rows());
  if (rows == 0) return;
  auto* data = reinterpret_cast<fftw_complex*>(w.data());
  int n = g.n_p;
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan;
  // plan creation is not thread safe; execution on new arrays is
#ifdef _OPENMP
#pragma omp critical(fftw_planner)
#endif
  plan = fftw_plan_many_dft(1, &n, 1, data, nullptr, rows, 1, data, nullptr, rows, 1, sign,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int m = 0; m < rows; ++m) fftw_execute_dft(plan, data + m, data + m);
  } else {
    for (int m = 0; m < rows; ++m) fftw_execute_dft(plan, data + m, data + m);
  }
#ifdef _OPENMP
#pragma omp critical(fftw_planner)
#endif
  fftw_destroy_plan(plan);
  if (dir == Direction::forward) w /= double(g.n_p);
}

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::exact: return "exact";
    case Engine::crank_nicolson: return "cn";
    case Engine::backward_euler: return "be";
  }
  return "?";
}

Engine parse_engine(const std::string& s) {
  if (s == "exact") return Engine::exact;
  if (s == "cn" || s == "crank-nicolson") return Engine::crank_nicolson;
  if (s == "be" || s == "backward-euler") return Engine::backward_euler;
  throw ConfigError("unknown engine '" + s + "'");
}

namespace {

void evolve_mode_exact(Eigen::Ref<Eigen::VectorXcd> w, const Eigen::MatrixXcd& H1,
                       const Eigen::MatrixXcd& H2, double mu, double T) {
  Eigen::MatrixXcd M = H2 - mu * H1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  Eigen::VectorXcd c = es.eigenvectors().adjoint() * w;
  for (int i = 0; i < c.size(); ++i) c[i] *= std::exp(cd(0.0, es.eigenvalues()[i] * T));
  w = es.eigenvectors() * c;
}

// Crank-Nicolson (theta = 1/2) or backward Euler (theta = 1) on
// w' = K w with K = i M.
void evolve_mode_implicit(Eigen::Ref<Eigen::VectorXcd> w, const SpMatCC& H1,
                          const SpMatCC& H2, double mu, double T, double dt, double theta) {
  const int n = int(w.size());
  SpMatCC K = (H2 - mu * H1) * cd(0.0, 1.0);
  SpMatCC I(n, n);
  I.setIdentity();
  const int full = int(std::floor(T / dt * (1.0 + 1e-12)));
  double last = T - full * dt;
  if (last < 1e-12 * dt) last = 0.0;
  auto run = [&](double h, int steps) {
    if (steps == 0) return;
    SpMatCC lhs = I - (theta * h) * K;
    SpMatCC rhs = I + ((1.0 - theta) * h) * K;
    Eigen::SparseLU<SpMatCC, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(lhs);
    if (lu.info() != Eigen::Success) throw SolverError("mode LU factorisation failed");
    Eigen::VectorXcd tmp;
    for (int s = 0; s < steps; ++s) {
      tmp = rhs * w;
      w = lu.solve(tmp);
    }
  };
  run(dt, full);
  if (last > 0.0) run(last, 1);
}

}  // namespace

void evolve(Extended& wt, const HermitianSplit& split, const PGrid& g, double T,
            const EvolveOptions& opt) {
  const int d = int(wt.rows());
  if (split.H1.rows() != d || split.H2.rows() != d || wt.cols() != g.n_p)
    throw ShapeError("evolve: dimension mismatch");
  if (T < 0.0) throw ConfigError("evolve: negative horizon");
  if (T == 0.0) return;
  if (opt.engine == Engine::exact) {
    if (d > opt.exact_dim_cap)
      throw ConfigError("exact engine limited to dimension " + std::to_string(opt.exact_dim_cap));
    const Eigen::MatrixXcd H1 = Eigen::MatrixXd(split.H1).cast<cd>();
    const Eigen::MatrixXcd H2 = Eigen::MatrixXcd(split.H2);
    if (opt.exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (int q = 0; q < g.n_p; ++q) evolve_mode_exact(wt.col(q), H1, H2, g.mu(q), T);
    } else {
      for (int q = 0; q < g.n_p; ++q) evolve_mode_exact(wt.col(q), H1, H2, g.mu(q), T);
    }
    return;
  }
  if (!(opt.dt > 0.0)) throw ConfigError("time step must be positive");
  const double theta = opt.engine == Engine::crank_nicolson ? 0.5 : 1.0;
  const SpMatCC H1 = split.H1.cast<cd>();
  const SpMatCC H2 = split.H2;
  if (opt.exec == Exec::parallel) {
    std::string err;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int q = 0; q < g.n_p; ++q) {
      try {
        evolve_mode_implicit(wt.col(q), H1, H2, g.mu(q), T, opt.dt, theta);
      } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical(evolve_error)
#endif
        err = e.what();
      }
    }
    if (!err.empty()) throw SolverError(err);
  } else {
    for (int q = 0; q < g.n_p; ++q)
      evolve_mode_implicit(wt.col(q), H1, H2, g.mu(q), T, opt.dt, theta);
  }
}

Vec recover(const Extended& w, const PGrid& g, const RecoveryPlan& plan, int n_rows) {
  if (!(plan.p > 0.0)) throw DomainError("recovery point must be positive");
  if (plan.index < 0 || plan.index >= g.n_p) throw DomainError("recovery index out of range");
  const double s = std::exp(g.p[plan.index]);
  Vec u(n_rows);
  for (int m = 0; m < n_rows; ++m) u[m] = s * w(m, plan.index).real();
  return u;
}

SpMatC kron_hamiltonian(const HermitianSplit& split, const PGrid& g) {
  const int d = int(split.H1.rows()), np = g.n_p;
  std::vector<Eigen::Triplet<cd, int>> t;
  for (int r = 0; r < d; ++r) {
    for (SpMat::InnerIterator it(split.H1, r); it; ++it)
      for (int q = 0; q < np; ++q)
        t.emplace_back(r * np + q, int(it.col()) * np + q, it.value() * g.mu(q));
    for (SpMatC::InnerIterator it(split.H2, r); it; ++it)
      for (int q = 0; q < np; ++q) t.emplace_back(r * np + q, int(it.col()) * np + q, -it.value());
  }
  SpMatC H(d * np, d * np);
  H.setFromTriplets(t.begin(), t.end());
  H.makeCompressed();
  return H;
}

double pipeline_memory_bytes(int n, int n_p) { return 2.0 * n * double(n_p) * 16.0; }

PipelineResult run_pipeline(const SpMat& A, const Vec& b, const Vec& f0, double T,
                            const PipelineParams& prm) {
  const auto need = pipeline_memory_bytes(int(A.rows()), prm.n_p);
  if (need > prm.memory_cap_bytes)
    throw ResourceError("extended state needs " + std::to_string(need / 1073741824.0) +
                        " GiB, above the cap of " +
                        std::to_string(prm.memory_cap_bytes / 1073741824.0) + " GiB");
  PipelineResult res;
  auto& rep = res.report;
  auto t0 = std::chrono::steady_clock::now();
  const auto hs = homogenize(A, b, f0);
  const auto split = split_hermitian(hs.At);
  rep.eps = hs.eps;
  rep.t_setup = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto eig = extreme_eigs(split.H1);
  rep.t_eigs = seconds_since(t0);
  rep.lambda_plus = eig.lambda_plus;
  rep.lambda_minus = eig.lambda_minus;
  rep.lanczos_iterations = eig.iterations;

  PGrid g = (prm.L_override && prm.R_override)
                ? make_p_grid(*prm.L_override, *prm.R_override, prm.n_p, prm.alpha_minus)
                : design_p_grid(eig.lambda_plus, eig.lambda_minus, T, prm.eps_target, prm.n_p,
                                prm.margin, prm.alpha_minus);
  rep.L = g.L;
  rep.R = g.R;
  rep.dp = g.dp;
  rep.n_p = g.n_p;
  const auto plan = plan_recovery(g, eig.lambda_plus * T, prm.p_override);
  rep.p_recover = plan.p;
  rep.p_valid = plan.valid;
  rep.warning = plan.warning;
  rep.engine = engine_name(prm.evolve.engine);

  t0 = std::chrono::steady_clock::now();
  Extended w = init_warped(hs.state0, g);
  spectral_transform_p(w, g, Direction::forward, prm.evolve.exec);
  rep.t_transform = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  evolve(w, split, g, T, prm.evolve);
  rep.t_evolve = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  spectral_transform_p(w, g, Direction::inverse, prm.evolve.exec);
  rep.t_transform += seconds_since(t0);
  res.f = recover(w, g, plan, hs.n);
  return res;
}

}  // namespace liouville
