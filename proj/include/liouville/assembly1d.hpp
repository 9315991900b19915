#pragma once

#include <vector>

#include "liouville/phase_grid.hpp"
#include "liouville/sparse.hpp"

namespace liouville {

/// Time-independent ghost values. Empty vectors mean zero inflow.
/// left/right have N_xi entries (only the incoming half is read),
/// low/high have N_x entries.
struct Inflow1D {
  std::vector<double> left, right, low, high;
  bool time_dependent = false;
};

struct SparseSystem {
  SpMat A;   // -A1 - A2
  Vec b;     // -b1 - b2
  SpMat A1;  // transport
  SpMat A2;  // slowness advection
  Vec b1, b2;
  SparsityAudit audit_A1, audit_A2, audit_A;
  int q_bound = 4;
  int edge_hits = 0;  // transmitted slownesses landing on the last node

  int dim() const { return int(A.rows()); }
};

struct TransportPart {
  SpMat A1;
  Vec b1;
  int edge_hits = 0;
};
TransportPart assemble_transport_1d(const PhaseMesh1D& mesh, const WaveSpeed1D& speed,
                                    const Inflow1D& inflow = {}, Exec exec = Exec::parallel);

struct SlownessPart {
  SpMat A2;
  Vec b2;
};
SlownessPart assemble_slowness_1d(const PhaseMesh1D& mesh, const WaveSpeed1D& speed,
                                  const Inflow1D& inflow = {});

SparseSystem assemble_system_1d(const PhaseMesh1D& mesh, const WaveSpeed1D& speed,
                                const Inflow1D& inflow = {}, Exec exec = Exec::parallel);

/// 2 * max(ceil(c+/c-), ceil(c-/c+)) + 2 over all interfaces.
int q_bound_1d(const WaveSpeed1D& speed);

struct FluxPair {
  double minus = 0.0;
  double plus = 0.0;
};

/// Numerical flux pair at one face, written as a direct if/else
/// transcription of the interface algorithm. Test oracle only.
FluxPair flux_oracle_1d(double c_minus, double c_plus, InterfaceModel model,
                        const std::vector<double>& f_left,
                        const std::vector<double>& f_right, int j,
                        const PhaseMesh1D& mesh);

/// Semi-discrete right-hand side evaluated flux by flux with the oracle.
/// `transport_only` drops the slowness-advection term.
Vec direct_rhs_1d(const PhaseMesh1D& mesh, const WaveSpeed1D& speed,
                  const Inflow1D& inflow, const Vec& f, bool transport_only = false);

/// Linear advection u_t + c(x) u_x = 0 with a jump at x = 0 and the
/// interface condition u(0+) = rho u(0-). Unknowns u_{-(n-1)} .. u_n on
/// x_j = j a / n.
SparseSystem assemble_advection_interface(int n, double a, double c_minus, double c_plus,
                                          double rho, double u_left = 0.0,
                                          double u_right = 0.0);

}  // namespace liouville
