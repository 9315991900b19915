#include "liouville/classical_engine.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "liouville/error.hpp"

namespace liouville {

CflReport cfl_dt(const PhaseMesh1D& m, const WaveSpeed1D& s, double safety) {
  CflReport r;
  for (int i = 0; i < m.nx; ++i) {
    const double dc = std::abs(s.c_minus[i + 1] - s.c_plus[i]) / (m.dx * m.dxi);
    for (int j = 0; j < m.nxi; ++j) {
      const double v = s.c_cell[i] / m.dx + dc * std::abs(m.xi[j]);
      if (v > r.rate) {
        r.rate = v;
        r.cell = int(m.index(i, j));
      }
    }
  }
  r.dt = r.rate > 0.0 ? safety / r.rate : INFINITY;
  return r;
}

CflReport cfl_dt(const PhaseMesh2D& m, const WaveSpeed2D& s, double safety) {
  CflReport r;
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.ny; ++j) {
      const double dcx = std::abs(s.cxm(i + 1, j) - s.cxp(i, j)) / (m.dx * m.dxi);
      const double dcy = std::abs(s.cym(i, j + 1) - s.cyp(i, j)) / (m.dy * m.deta);
      for (int k = 0; k < m.nxi; ++k)
        for (int l = 0; l < m.neta; ++l) {
          const double xi = m.xi[k], eta = m.eta[l];
          const double v = std::sqrt(xi * xi + eta * eta);
          const double c = s.cell(i, j);
          const double rate = c * std::abs(xi) / (m.dx * v) + c * std::abs(eta) / (m.dy * v) +
                              (dcx + dcy) * v;
          if (rate > r.rate) {
            r.rate = rate;
            r.cell = int(m.index(i, j, k, l));
          }
        }
    }
  r.dt = r.rate > 0.0 ? safety / r.rate : INFINITY;
  return r;
}

Method parse_method(const std::string& s) {
  if (s == "fe" || s == "forward-euler") return Method::forward_euler;
  if (s == "cn" || s == "crank-nicolson") return Method::crank_nicolson;
  throw ConfigError("unknown method '" + s + "'");
}

namespace {

using ColMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// One implicit stepper (I - h/2 A) f+ = (I + h/2 A) f + h b for a fixed h.
class CnStepper {
 public:
  CnStepper(const SpMat& A, const Vec& b, double h, const IntegrateOptions& opt)
      : A_(A), b_(b), h_(h), exec_(opt.exec) {
    const int n = int(A.rows());
    SpMat I(n, n);
    I.setIdentity();
    lhs_ = I - (0.5 * h) * A;
    direct_ = n < opt.direct_limit;
    if (direct_) {
      lu_.compute(ColMat(lhs_));
      if (lu_.info() != Eigen::Success) throw SolverError("CN: sparse LU failed");
    } else {
      it_.setTolerance(opt.tol);
      it_.setMaxIterations(1000);
      it_.compute(lhs_);  // the solver keeps a reference
      if (it_.info() != Eigen::Success) throw SolverError("CN: preconditioner setup failed");
    }
  }

  void step(Vec& f) {
    axpy_apply(A_, 0.5 * h_, f, rhs_, exec_);
    rhs_ += h_ * b_;
    if (direct_) {
      f = lu_.solve(rhs_);
    } else {
      Vec guess = f;
      f = it_.solveWithGuess(rhs_, guess);
      if (it_.info() != Eigen::Success)
        throw SolverError("CN: BiCGSTAB did not converge, residual " +
                          std::to_string(it_.error()));
    }
  }

 private:
  const SpMat& A_;
  const Vec& b_;
  double h_;
  Exec exec_;
  bool direct_ = true;
  SpMat lhs_;
  Vec rhs_;
  Eigen::SparseLU<ColMat, Eigen::COLAMDOrdering<int>> lu_;
  Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> it_;
};

}  // namespace

IntegrateResult integrate(const SpMat& A, const Vec& b, const Vec& f0, double T,
                          const IntegrateOptions& opt) {
  if (A.rows() != A.cols() || b.size() != A.rows() || f0.size() != A.rows())
    throw ShapeError("integrate: inconsistent sizes");
  if (!(opt.dt > 0.0)) throw ConfigError("time step must be positive");
  if (T < 0.0) throw ConfigError("negative horizon");
  const int full = int(std::floor(T / opt.dt * (1.0 + 1e-12)));
  double last = T - full * opt.dt;
  if (last < 1e-12 * opt.dt) last = 0.0;

  IntegrateResult r;
  r.f = f0;
  r.last_dt = last > 0.0 ? last : opt.dt;
  if (opt.method == Method::forward_euler) {
    const double rate = A.diagonal().cwiseAbs().maxCoeff();
    if (opt.dt * rate > 1.0 + 1e-12)
      throw StabilityError("forward Euler step " + std::to_string(opt.dt) +
                           " exceeds the CFL limit " + std::to_string(1.0 / rate));
    Vec tmp;
    auto step = [&](double h) {
      axpy_apply(A, h, r.f, tmp, opt.exec);
      r.f = tmp + h * b;
    };
    for (int s = 0; s < full; ++s) step(opt.dt);
    if (last > 0.0) step(last);
  } else {
    if (full > 0) {
      CnStepper cn(A, b, opt.dt, opt);
      for (int s = 0; s < full; ++s) cn.step(r.f);
    }
    if (last > 0.0) {
      CnStepper cn(A, b, last, opt);
      cn.step(r.f);
    }
  }
  r.steps = full + (last > 0.0 ? 1 : 0);
  return r;
}

}  // namespace liouville
