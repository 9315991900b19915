#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liouville/assembly1d.hpp"
#include "liouville/assembly2d.hpp"
#include "liouville/phase_grid.hpp"
#include "liouville/sparse.hpp"

namespace liouville {

/// One linear system f' = A f + b with its initial state. Ex.3 carries two
/// (level set and weight) sharing A.
struct Component {
  std::string name;
  SpMat A;
  Vec b;
  Vec f0;
};

struct Problem {
  std::string id;
  int space_dim = 1;  // 0 for the advection warm-up
  PhaseMesh1D mesh1;
  WaveSpeed1D speed1;
  PhaseMesh2D mesh2;
  WaveSpeed2D speed2;
  std::vector<double> grid0;  // advection nodes
  std::vector<Component> parts;
  double T = 1.0;
  double dt = 0.02;
  double beta = 0.0;  // discrete delta width for moments, 0 if unused
  int n_p = 1024;
  // reference p interval and recovery point, set only at the default mesh
  std::optional<double> p_L, p_R;
  std::optional<double> p_override;
  SparsityAudit audit_A1, audit_A2;
  int q_bound = 4;
};

/// Builtin ids: ex1, ex2, ex3, ex4, advection. n = 0 keeps the default
/// resolution (2^7 per direction in 1D, 2^3 in 2D, 64 for advection). At the
/// default resolution the reference p interval and recovery point are attached.
Problem make_problem(const std::string& id, int n = 0);

/// Ex.1 initial data and speed, shared with tests.
double example1_initial(double x, double xi);
double example2_profile(double x);
double example3_profile(double x);
SpeedSpec1D example3_speed();
double example4_initial(double x, double y, double xi, double eta);

/// Nearest face to `x` on a mesh with nx cells over `r`.
double snap_to_face(double x, Interval r, int nx);

}  // namespace liouville
