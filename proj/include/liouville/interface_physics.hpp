#pragma once

#include <vector>

namespace liouville {

struct InterfaceCoeffs {
  double reflect = 0.0;   // alpha_R
  double transmit = 1.0;  // alpha_T = 1 - alpha_R
};

enum class Branch { transmit_and_reflect, total_reflection };

struct TransmitDecision2D {
  double discriminant = 0.0;
  Branch branch = Branch::total_reflection;
  double transmitted = 0.0;  // signed normal slowness, meaningful if transmitting
};

double hat(double z, double dxi);

InterfaceCoeffs coeffs_1d(double c_minus, double c_plus);
InterfaceCoeffs coeffs_2d(double c_minus, double c_plus, double gamma_minus,
                          double gamma_plus);

/// (c_from / c_to) * xi, so that c_to * out == c_from * xi.
double transmitted_xi_1d(double xi, double c_from, double c_to);

/// Discriminant test with ratio r = c_from / c_to:
/// D = r^2 xi^2 + (r^2 - 1) eta^2, transmitting iff D > 0.
TransmitDecision2D transmit_test_2d(double xi, double eta, double c_from, double c_to);

/// Interpolation weight of node xi_k for row xi_j at an interface with
/// limits (c_minus, c_plus).
double beta_1d(double c_minus, double c_plus, double xi_j, double xi_k, double dxi);

struct Gates {
  double a_t = 0.0;
  double a_r = 0.0;
};
Gates step_gates_2d(double discriminant, const InterfaceCoeffs& c);

/// Up to two (node, weight) pairs interpolating at `target` on the uniform
/// node set `nodes`. Targets outside [nodes.front(), nodes.back()] give no
/// weights; a target on a node (to round-off) gives that node weight 1.
struct Bracket {
  int count = 0;
  int node[2] = {0, 0};
  double weight[2] = {0.0, 0.0};
  bool upper_edge = false;  // target sat on the last node
};
Bracket bracket(double target, const std::vector<double>& nodes, double spacing);

}  // namespace liouville
