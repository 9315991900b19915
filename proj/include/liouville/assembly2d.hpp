#pragma once

#include <vector>

#include "liouville/assembly1d.hpp"
#include "liouville/phase_grid.hpp"
#include "liouville/sparse.hpp"

namespace liouville {

/// Ghost values, empty means zero.
///   x_low/x_high   [(j*nxi + k)*neta + l]
///   y_low/y_high   [(i*nxi + k)*neta + l]
///   xi_low/xi_high [(i*ny + j)*neta + l]
///   eta_low/eta_high [(i*ny + j)*nxi + k]
struct Inflow2D {
  std::vector<double> x_low, x_high, y_low, y_high;
  std::vector<double> xi_low, xi_high, eta_low, eta_high;
  bool time_dependent = false;
};

struct SparseSystem2D {
  SpMat A;  // -A1 - A2 - A3 - A4
  Vec b;
  SpMat A1, A2, A3, A4;
  Vec b1, b2, b3, b4;
  SparsityAudit audit_A1, audit_A2, audit_A3, audit_A4, audit_A;
  int q1 = 4, q2 = 4;
  int edge_hits = 0;
  int total_reflection_rows = 0;

  int dim() const { return int(A.rows()); }
};

struct FluxPart2D {
  SpMat A;
  Vec b;
  int edge_hits = 0;
  int total_reflection_rows = 0;
};

FluxPart2D assemble_xflux_2d(const PhaseMesh2D& mesh, const WaveSpeed2D& speed,
                             const Inflow2D& inflow = {}, Exec exec = Exec::parallel);
FluxPart2D assemble_yflux_2d(const PhaseMesh2D& mesh, const WaveSpeed2D& speed,
                             const Inflow2D& inflow = {}, Exec exec = Exec::parallel);
SlownessPart assemble_xi_advection_2d(const PhaseMesh2D& mesh, const WaveSpeed2D& speed,
                                      const Inflow2D& inflow = {});
SlownessPart assemble_eta_advection_2d(const PhaseMesh2D& mesh, const WaveSpeed2D& speed,
                                       const Inflow2D& inflow = {});

SparseSystem2D assemble_system_2d(const PhaseMesh2D& mesh, const WaveSpeed2D& speed,
                                  const Inflow2D& inflow = {}, Exec exec = Exec::parallel);

/// Column bounds 2 * max(ceil(c+/c-), ceil(c-/c+)) + 2 over vertical (x) and
/// horizontal (y) interfaces.
int q_bound_x(const WaveSpeed2D& speed);
int q_bound_y(const WaveSpeed2D& speed);

/// Flux pair at one face for normal slowness nodes[k] and tangential
/// slowness `tangential`; f_left/f_right are slices over the normal index.
/// Direct transcription of the 2D interface algorithm. Test oracle only.
FluxPair flux_oracle_2d(double c_minus, double c_plus, InterfaceModel model,
                        const std::vector<double>& f_left,
                        const std::vector<double>& f_right, int k, double tangential,
                        const std::vector<double>& nodes, double spacing);

enum RhsPart : unsigned {
  rhs_xflux = 1u,
  rhs_yflux = 2u,
  rhs_xi_adv = 4u,
  rhs_eta_adv = 8u,
  rhs_all = 15u,
};

Vec direct_rhs_2d(const PhaseMesh2D& mesh, const WaveSpeed2D& speed,
                  const Inflow2D& inflow, const Vec& f, unsigned parts = rhs_all);

}  // namespace liouville
