#include "liouville/interface_physics.hpp"

#include <cmath>
#include <string>

#include "liouville/error.hpp"

namespace liouville {

double hat(double z, double dxi) {
  const double v = 1.0 - std::abs(z) / dxi;
  return v > 0.0 ? v : 0.0;
}

InterfaceCoeffs coeffs_1d(double c_minus, double c_plus) {
  if (!(c_minus > 0.0) || !(c_plus > 0.0))
    throw DomainError("interface speeds must be positive");
  const double r = (c_plus - c_minus) / (c_plus + c_minus);
  InterfaceCoeffs c;
  c.reflect = r * r;
  c.transmit = 1.0 - c.reflect;
  return c;
}

InterfaceCoeffs coeffs_2d(double c_minus, double c_plus, double gamma_minus,
                          double gamma_plus) {
  if (!(c_minus > 0.0) || !(c_plus > 0.0))
    throw DomainError("interface speeds must be positive");
  if (!(gamma_minus > 0.0 && gamma_minus <= 1.0) || !(gamma_plus > 0.0 && gamma_plus <= 1.0))
    throw DomainError("direction cosines must lie in (0, 1]");
  const double num = c_plus * gamma_minus - c_minus * gamma_plus;
  const double den = c_plus * gamma_minus + c_minus * gamma_plus;
  InterfaceCoeffs c;
  c.reflect = (num / den) * (num / den);
  c.transmit = 1.0 - c.reflect;
  return c;
}

double transmitted_xi_1d(double xi, double c_from, double c_to) {
  if (!(c_from > 0.0) || !(c_to > 0.0)) throw DomainError("speeds must be positive");
  return c_from / c_to * xi;
}

TransmitDecision2D transmit_test_2d(double xi, double eta, double c_from, double c_to) {
  if (!(c_from > 0.0) || !(c_to > 0.0)) throw DomainError("speeds must be positive");
  if (xi == 0.0) throw DomainError("normal slowness must be nonzero");
  const double r = c_from / c_to;
  TransmitDecision2D d;
  d.discriminant = r * r * xi * xi + (r * r - 1.0) * eta * eta;
  if (d.discriminant > 0.0) {
    d.branch = Branch::transmit_and_reflect;
    d.transmitted = std::copysign(std::sqrt(d.discriminant), xi);
  }
  return d;
}

double beta_1d(double c_minus, double c_plus, double xi_j, double xi_k, double dxi) {
  const double ratio = xi_j > 0.0 ? c_plus / c_minus : c_minus / c_plus;
  return hat(ratio * xi_j - xi_k, dxi);
}

Gates step_gates_2d(double discriminant, const InterfaceCoeffs& c) {
  if (discriminant > 0.0) return {c.transmit, c.reflect};
  return {0.0, 1.0};
}

Bracket bracket(double target, const std::vector<double>& nodes, double spacing) {
  Bracket b;
  const int n = int(nodes.size());
  const double s = (target - nodes.front()) / spacing;
  const double r = std::round(s);
  if (std::abs(s - r) <= 1e-10) {
    if (r < 0 || r > n - 1) return b;
    b.count = 1;
    b.node[0] = int(r);
    b.weight[0] = 1.0;
    b.upper_edge = int(r) == n - 1;
    return b;
  }
  if (s < 0.0 || s > n - 1) return b;
  const int k = int(std::floor(s));
  b.count = 2;
  b.node[0] = k;
  b.node[1] = k + 1;
  b.weight[0] = hat(target - nodes[k], spacing);
  b.weight[1] = hat(target - nodes[k + 1], spacing);
  return b;
}

}  // namespace liouville
