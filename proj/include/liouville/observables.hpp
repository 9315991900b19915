#pragma once

#include <functional>
#include <string>
#include <vector>

#include "liouville/phase_grid.hpp"
#include "liouville/sparse.hpp"

namespace liouville {

struct MomentProfile {
  std::vector<double> x;
  std::vector<double> rho;
  std::vector<double> u;      // NaN where masked
  std::vector<bool> mask;     // true where rho is too small for u
};

/// rho_i = sum_j f_ij dxi.
std::vector<double> density_1d(const PhaseMesh1D& mesh, const Vec& f);
/// u_i = sum_j f_ij xi_j dxi / rho_i, masked where rho_i < mask_rel * max rho.
MomentProfile avg_slowness_1d(const PhaseMesh1D& mesh, const Vec& f, double mask_rel = 1e-8);

/// rho_ij = sum_kl f_ijkl dxi deta, indexed [i*ny + j].
std::vector<double> density_2d(const PhaseMesh2D& mesh, const Vec& f);

/// Moments through the discrete delta of the level set psi weighted by phi.
MomentProfile levelset_moments(const PhaseMesh1D& mesh, const Vec& psi, const Vec& phi,
                               double beta, double mask_rel = 1e-8);

struct RhoU {
  double rho = 0.0;
  double u = 0.0;
};

/// Two-material problem with a reflecting interface at x = 0, closed form at t = 1.
double exact_example1_f(double x, double xi, double t = 1.0);
RhoU exact_example1_moments(double x, double t = 1.0);

/// Well-shaped speed with delta initial data, closed form at t = 1.
RhoU exact_example2_moments(double x, double t = 1.0);

/// Two layers c_below (y < y_i) and c_above (y > y_i).
struct TwoLayer {
  double y_interface = 0.0;
  double c_below = 1.0;
  double c_above = 2.0;
};
using Phase4 = std::function<double(double, double, double, double)>;

/// f(t, x, y, xi, eta) by tracing the bicharacteristic backwards and splitting
/// at the interface into transmitted and reflected preimages.
double ray_oracle_2d(double x, double y, double xi, double eta, double t,
                     const TwoLayer& layers, const Phase4& f0);

void write_moments_csv(const std::string& path, const MomentProfile& m);
void write_density_2d_csv(const std::string& path, const PhaseMesh2D& mesh,
                          const std::vector<double>& rho);

}  // namespace liouville
