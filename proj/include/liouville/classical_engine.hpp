#pragma once

#include <string>

#include "liouville/phase_grid.hpp"
#include "liouville/sparse.hpp"

namespace liouville {

struct CflReport {
  double dt = 0.0;    // safety * 1 / rate
  double rate = 0.0;  // max over cells of the summed speed bound
  int cell = 0;       // flattened index attaining the maximum
};

CflReport cfl_dt(const PhaseMesh1D& mesh, const WaveSpeed1D& speed, double safety = 0.9);
CflReport cfl_dt(const PhaseMesh2D& mesh, const WaveSpeed2D& speed, double safety = 0.9);

enum class Method { forward_euler, crank_nicolson };
Method parse_method(const std::string& s);

struct IntegrateOptions {
  Method method = Method::crank_nicolson;
  double dt = 0.02;
  Exec exec = Exec::parallel;
  double tol = 1e-10;
  int direct_limit = 10000;  // sparse LU below this dimension, BiCGSTAB above
};

struct IntegrateResult {
  Vec f;
  int steps = 0;
  double last_dt = 0.0;
};

/// f' = A f + b from f0 up to exactly T. Forward Euler refuses steps with
/// dt * max|A_ii| > 1, the diagonal being the CFL rate of the upwind system.
IntegrateResult integrate(const SpMat& A, const Vec& b, const Vec& f0, double T,
                          const IntegrateOptions& opt);

}  // namespace liouville
