#include "liouville/observables.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "liouville/error.hpp"
#include "liouville/interface_physics.hpp"

namespace liouville {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sqrt0(double v) { return std::sqrt(std::max(v, 0.0)); }

void check_t1(double t) {
  if (t != 1.0) throw UnsupportedError("closed form only available at t = 1");
}

void apply_mask(MomentProfile& m, const std::vector<double>& flux, double mask_rel) {
  double top = 0.0;
  for (double r : m.rho) top = std::max(top, std::abs(r));
  m.u.assign(m.rho.size(), kNaN);
  m.mask.assign(m.rho.size(), true);
  for (std::size_t i = 0; i < m.rho.size(); ++i)
    if (top > 0.0 && m.rho[i] >= mask_rel * top) {
      m.mask[i] = false;
      m.u[i] = flux[i] / m.rho[i];
    }
}

}  // namespace

std::vector<double> density_1d(const PhaseMesh1D& m, const Vec& f) {
  if (std::size_t(f.size()) != m.size()) throw ShapeError("density: field length mismatch");
  std::vector<double> rho(m.nx, 0.0);
  for (int i = 0; i < m.nx; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.nxi; ++j) s += f[m.index(i, j)];
    rho[i] = s * m.dxi;
  }
  return rho;
}

MomentProfile avg_slowness_1d(const PhaseMesh1D& m, const Vec& f, double mask_rel) {
  MomentProfile out;
  out.x = m.x;
  out.rho = density_1d(m, f);
  std::vector<double> flux(m.nx, 0.0);
  for (int i = 0; i < m.nx; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.nxi; ++j) s += f[m.index(i, j)] * m.xi[j];
    flux[i] = s * m.dxi;
  }
  apply_mask(out, flux, mask_rel);
  return out;
}

std::vector<double> density_2d(const PhaseMesh2D& m, const Vec& f) {
  if (std::size_t(f.size()) != m.size()) throw ShapeError("density: field length mismatch");
  std::vector<double> rho(std::size_t(m.nx) * m.ny, 0.0);
  const std::size_t block = std::size_t(m.nxi) * m.neta;
  for (std::size_t c = 0; c < rho.size(); ++c) {
    double s = 0.0;
    for (std::size_t q = 0; q < block; ++q) s += f[c * block + q];
    rho[c] = s * m.dxi * m.deta;
  }
  return rho;
}

MomentProfile levelset_moments(const PhaseMesh1D& m, const Vec& psi, const Vec& phi,
                               double beta, double mask_rel) {
  if (std::size_t(psi.size()) != m.size() || std::size_t(phi.size()) != m.size())
    throw ShapeError("levelset: field length mismatch");
  MomentProfile out;
  out.x = m.x;
  out.rho.assign(m.nx, 0.0);
  std::vector<double> flux(m.nx, 0.0);
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.nxi; ++j) {
      const auto q = m.index(i, j);
      const double w = phi[q] * discrete_delta(psi[q], beta) * m.dxi;
      out.rho[i] += w;
      flux[i] += w * m.xi[j];
    }
  apply_mask(out, flux, mask_rel);
  return out;
}

double exact_example1_f(double x, double xi, double t) {
  check_t1(t);
  const double aT = 0.75, aR = 0.25;
  if (x > 0 && x < 0.2) {
    const double lo = sqrt0(1 - (0.2 - x) * (0.2 - x));
    if (xi > lo && xi < 1.5 * sqrt0(1 - (3 * x - 0.6) * (3 * x - 0.6))) return aT;
    if (xi > 0 && xi < lo) return 1.0;
  }
  if (x > 0 && x < 0.8 && xi > -sqrt0(1 - (x + 0.2) * (x + 0.2)) && xi < 0) return 1.0;
  if (x > -0.4 && x < 0 && xi > 0 && xi < 0.5 * sqrt0(1 - (x - 0.6) * (x - 0.6))) return 1.0;
  if (x > -0.6 && x < 0) {
    const double third = sqrt0(1 - (x / 3 + 0.2) * (x / 3 + 0.2)) / 3;
    if (xi > -third && xi < 0) return 1.0;
    if (xi > -0.5 * sqrt0(1 - (x + 0.6) * (x + 0.6)) && xi < -third) return aR;
  }
  return 0.0;
}

RhoU exact_example1_moments(double x, double t) {
  check_t1(t);
  const double aT = 0.75, aR = 0.25;
  auto s1 = [](double v) { return sqrt0(1 - v * v); };
  auto q1 = [](double v) { return 1 - v * v; };
  double rho = 0.0, m1 = 0.0;  // m1 = 2 rho u
  if (x > 0.2 && x < 0.8) {
    rho = s1(x + 0.2);
    m1 = -q1(x + 0.2);
  } else if (x > 0 && x <= 0.2) {
    rho = 1.5 * aT * s1(3 * x - 0.6) + aR * s1(0.2 - x) + s1(x + 0.2);
    m1 = 2.25 * aT * q1(3 * x - 0.6) + aR * q1(0.2 - x) - q1(x + 0.2);
  } else if (x > -0.6 && x < -0.4) {
    rho = aT / 3 * s1(x / 3 + 0.2) + aR / 2 * s1(x + 0.6);
    m1 = -aT / 9 * q1(x / 3 + 0.2) - aR / 4 * q1(x + 0.6);
  } else if (x >= -0.4 && x <= 0) {
    rho = aT / 3 * s1(x / 3 + 0.2) + aR / 2 * s1(x + 0.6) + 0.5 * s1(x - 0.6);
    m1 = -aT / 9 * q1(x / 3 + 0.2) - aR / 4 * q1(x + 0.6) + 0.25 * q1(x - 0.6);
  }
  RhoU r;
  r.rho = rho;
  r.u = rho > 0 ? m1 / (2 * rho) : 0.0;
  return r;
}

RhoU exact_example2_moments(double x, double t) {
  check_t1(t);
  const double aT = 15.0 / 16, aR = 1.0 / 16, th = 1.0 / 3;
  auto Y = [](double v) { return 0.5 - 0.4 / (1.6 * 1.6) * v * v; };
  RhoU r;
  // density, half-open [lo, hi) pieces
  if (x >= -1.6 && x < -1.4) r.rho = 1;
  else if (x >= -1.4 && x < -0.4 - th) r.rho = 1 + aR;
  else if (x >= -0.4 - th && x < -0.4) r.rho = 1 + aR + 0.6 * aT;
  else if (x >= -0.4 && x < -0.2) r.rho = 1 + aR + aT / 0.6;
  else if (x >= -0.2 && x < 0.2) r.rho = aT / 0.3;
  else if (x >= 0.2 && x < 0.4) r.rho = 1 + aR + aT / 0.6;
  else if (x >= 0.4 && x < 0.4 + th) r.rho = 1 + aR + 0.6 * aT;
  else if (x >= 0.4 + th && x < 1.4) r.rho = 1 + aR;
  else if (x >= 1.4 && x < 1.6) r.rho = 1;
  else return r;

  double m = 0.0;
  if (x < -1.4) m = 0.5;
  else if (x < -0.4 - th) m = 0.5 - aR * Y(x + 0.2);
  else if (x < -0.6) m = 0.5 - aR * Y(x + 0.2) - 0.36 * aT * Y(0.6 * x - 1.16);
  else if (x < -0.4) m = Y(x + 0.6) - aR * Y(x + 0.2) - 0.36 * aT * Y(0.6 * x - 1.16);
  else if (x < -0.2)
    m = aT / 0.36 * Y(x / 6 + 13.0 / 15) - Y(x - 1) + aR * Y(x + 1.8);
  else if (x < 0.2)
    m = aT / 0.36 * Y(x / 6 + 13.0 / 15) - aT / 0.36 * Y(x / 0.6 - 13.0 / 15);
  else if (x < 0.4)
    m = -aT * Y(x / 0.6 - 13.0 / 15) + Y(x + 1) - aR * Y(x - 1.8);
  else if (x < 0.6) m = -Y(x - 0.6) + aR * Y(x - 0.2) + 0.36 * aT * Y(0.6 * x + 1.16);
  else if (x < 0.4 + th) m = -0.5 + aR * Y(x - 0.2) + 0.36 * aT * Y(0.6 * x + 1.16);
  else if (x < 1.4) m = -0.5 + aR * Y(x - 0.2);
  else m = -0.5;
  r.u = m / r.rho;
  return r;
}

double ray_oracle_2d(double x, double y, double xi, double eta, double t,
                     const TwoLayer& L, const Phase4& f0) {
  const bool above = y >= L.y_interface;
  const double cs = above ? L.c_above : L.c_below;
  const double co = above ? L.c_below : L.c_above;
  const double v = std::sqrt(xi * xi + eta * eta);
  if (v == 0.0) return f0(x, y, xi, eta);
  // backward motion has y velocity -cs*eta/v; it reaches the interface only
  // when heading towards it
  const bool towards = above ? eta > 0.0 : eta < 0.0;
  double tau = INFINITY;
  if (towards) tau = std::abs(y - L.y_interface) * v / (cs * std::abs(eta));
  if (!(tau < t))
    return f0(x - cs * t * xi / v, y - cs * t * eta / v, xi, eta);

  const double xI = x - cs * tau * xi / v;
  const double rest = t - tau;
  const double yI = L.y_interface;
  // reflected preimage: same side, eta flipped
  const double fr = f0(xI - cs * rest * xi / v, yI + cs * rest * eta / v, xi, -eta);
  const auto dec = transmit_test_2d(eta, xi, cs, co);
  if (dec.branch == Branch::total_reflection) return fr;
  const double eta_o = dec.transmitted;
  const double vo = std::sqrt(xi * xi + eta_o * eta_o);
  const double ft = f0(xI - co * rest * xi / vo, yI - co * rest * eta_o / vo, xi, eta_o);
  const double g_s = std::abs(eta) / v, g_o = std::abs(eta_o) / vo;
  const auto co2 = above ? coeffs_2d(L.c_below, L.c_above, g_o, g_s)
                         : coeffs_2d(L.c_below, L.c_above, g_s, g_o);
  return co2.transmit * ft + co2.reflect * fr;
}

void write_moments_csv(const std::string& path, const MomentProfile& m) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path);
  out.precision(17);
  out << "x,rho,u\n";
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    out << m.x[i] << ',' << m.rho[i] << ',';
    if (i < m.u.size() && !std::isnan(m.u[i])) out << m.u[i];
    out << '\n';
  }
}

void write_density_2d_csv(const std::string& path, const PhaseMesh2D& mesh,
                          const std::vector<double>& rho) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path);
  out.precision(17);
  out << "x,y,rho\n";
  for (int i = 0; i < mesh.nx; ++i)
    for (int j = 0; j < mesh.ny; ++j)
      out << mesh.x[i] << ',' << mesh.y[j] << ',' << rho[std::size_t(i) * mesh.ny + j] << '\n';
}

}  // namespace liouville
