#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liouville/sparse.hpp"

namespace liouville {

/// u' = A u + b rewritten as w' = At w with w = [u; eps * 1].
struct HomogenizedSystem {
  SpMat At;     // [A, diag(b)/eps; 0, 0]
  Vec state0;   // [f0; eps * 1]
  double eps = 1.0;
  int n = 0;    // size of the physical block
};
HomogenizedSystem homogenize(const SpMat& A, const Vec& b, const Vec& f0);

/// At = H1 + i H2 with H1 real symmetric and H2 Hermitian.
struct HermitianSplit {
  SpMat H1;
  SpMatC H2;
};
HermitianSplit split_hermitian(const SpMat& At);

struct ExtremeEigs {
  double lambda_plus = 0.0;   // max(largest eigenvalue, 0)
  double lambda_minus = 0.0;  // max(-smallest eigenvalue, 0)
  int iterations = 0;
};
/// Lanczos with full reorthogonalisation; dense solve for small matrices.
ExtremeEigs extreme_eigs(const SpMat& H1, double tol = 1e-6, int max_iter = 1500);

struct PGrid {
  double L = 0.0, R = 0.0;
  int n_p = 0;
  double dp = 0.0;
  double alpha_minus = 1.0;  // damping rate for p < 0
  std::vector<double> p;     // p_k = L + k dp, k < n_p

  /// Fourier mode of FFT slot q, i.e. 2 pi l / (R - L) with l = q or q - n_p.
  double mu(int q) const;
  double alpha(double pv) const { return pv > 0.0 ? 1.0 : alpha_minus; }
};
PGrid make_p_grid(double L, double R, int n_p, double alpha_minus = 1.0);

/// R = lp T + ln(1/eps) + margin, L = -lm T - ln(1/eps) - margin.
PGrid design_p_grid(double lambda_plus, double lambda_minus, double T, double eps_target,
                    int n_p, double margin = 0.0, double alpha_minus = 1.0);

struct RecoveryPlan {
  double p = 0.0;     // recovery point, always a grid point
  int index = 0;
  bool valid = true;  // p >= lambda_plus T
  std::string warning;
};
/// Smallest grid point >= lambda_plus T (and > 0), or the grid point nearest to
/// `override_p` when given.
RecoveryPlan plan_recovery(const PGrid& grid, double lambda_plus_T,
                           std::optional<double> override_p = std::nullopt);

/// Extended state: row m is system component m, column k is p_k (or mode slot).
using Extended = Eigen::MatrixXcd;

Extended init_warped(const Vec& u0, const PGrid& grid);

enum class Direction { forward, inverse };
/// Per-row DFT in p. Forward gives coefficients c_q with
/// v(p_k) = sum_q c_q exp(i mu_q (p_k - L)).
void spectral_transform_p(Extended& w, const PGrid& grid, Direction dir,
                          Exec exec = Exec::parallel);

enum class Engine { exact, crank_nicolson, backward_euler };
const char* engine_name(Engine e);
Engine parse_engine(const std::string& s);

struct EvolveOptions {
  Engine engine = Engine::crank_nicolson;
  double dt = 0.02;
  Exec exec = Exec::parallel;
  int exact_dim_cap = 256;
};

/// Each mode column evolves under d/dt w_q = i (H2 - mu_q H1) w_q.
void evolve(Extended& wt, const HermitianSplit& split, const PGrid& grid, double T,
            const EvolveOptions& opt);

/// u_m = exp(p) v_m(p) at the plan's grid point, first n_rows rows.
Vec recover(const Extended& w, const PGrid& grid, const RecoveryPlan& plan, int n_rows);

/// H = H1 (x) D_mu - H2 (x) I on the system-major index m * n_p + q.
SpMatC kron_hamiltonian(const HermitianSplit& split, const PGrid& grid);

struct PipelineParams {
  int n_p = 1024;
  double eps_target = 0.006737946999085467;  // e^-5
  double margin = 0.0;
  double alpha_minus = 1.0;
  std::optional<double> p_override;
  std::optional<double> L_override, R_override;
  EvolveOptions evolve;
  double memory_cap_bytes = 8.0 * 1024 * 1024 * 1024;
};

struct PipelineReport {
  double lambda_plus = 0.0, lambda_minus = 0.0;
  int lanczos_iterations = 0;
  double L = 0.0, R = 0.0, dp = 0.0;
  int n_p = 0;
  double p_recover = 0.0;
  bool p_valid = true;
  std::string warning;
  std::string engine;
  double eps = 1.0;
  double t_setup = 0.0, t_eigs = 0.0, t_transform = 0.0, t_evolve = 0.0;
};

struct PipelineResult {
  Vec f;
  PipelineReport report;
};

/// Bytes needed for the extended state of a system of size n.
double pipeline_memory_bytes(int n, int n_p);

PipelineResult run_pipeline(const SpMat& A, const Vec& b, const Vec& f0, double T,
                            const PipelineParams& params);

}  // namespace liouville
