#include "liouville/presets.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "liouville/error.hpp"

namespace liouville {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int pick(int n, int fallback) { return n > 0 ? n : fallback; }

void reference_p(Problem& p, bool default_mesh, double L, double R, double p_rec) {
  if (!default_mesh) return;
  p.p_L = L;
  p.p_R = R;
  p.p_override = p_rec;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), v.size()); }

// Ghost slices for data g(x, xi) just outside the 1D mesh.
Inflow1D ghosts_1d(const PhaseMesh1D& m, const std::function<double(double, double)>& g) {
  Inflow1D in;
  const double xl = m.x_range.lo - 0.5 * m.dx, xr = m.x_range.hi + 0.5 * m.dx;
  const double lo = m.xi.front() - m.dxi, hi = m.xi.back() + m.dxi;
  for (int j = 0; j < m.nxi; ++j) {
    in.left.push_back(g(xl, m.xi[j]));
    in.right.push_back(g(xr, m.xi[j]));
  }
  for (int i = 0; i < m.nx; ++i) {
    in.low.push_back(g(m.x[i], lo));
    in.high.push_back(g(m.x[i], hi));
  }
  return in;
}

void fill_1d(Problem& p, const SpeedSpec1D& spec, Interval x, Interval xi, int n) {
  p.space_dim = 1;
  p.mesh1 = build_mesh_1d(x, xi, n, n);
  p.speed1 = sample_speed_1d(spec, p.mesh1);
  p.q_bound = q_bound_1d(p.speed1);
}

Component component_1d(Problem& p, const std::string& name, const Inflow1D& in, Vec f0) {
  const auto sys = assemble_system_1d(p.mesh1, p.speed1, in);
  p.audit_A1 = sys.audit_A1;
  p.audit_A2 = sys.audit_A2;
  return {name, sys.A, sys.b, std::move(f0)};
}

double gauss_avg(double a, double b, double centre, double width) {
  const double s = std::sqrt(std::numbers::pi) * width / 2;
  return s * (std::erf((b - centre) / width) - std::erf((a - centre) / width)) / (b - a);
}

}  // namespace

double snap_to_face(double x, Interval r, int nx) {
  const double dx = (r.hi - r.lo) / nx;
  return r.lo + std::round((x - r.lo) / dx) * dx;
}

double example1_initial(double x, double xi) {
  if (x < 0 && xi > 0 && std::sqrt(x * x + 4 * xi * xi) < 1) return 1.0;
  if (x > 0 && xi < 0 && std::sqrt(x * x + xi * xi) < 1) return 1.0;
  return 0.0;
}

double example2_profile(double x) {
  const double k = 0.4 / (1.6 * 1.6);
  if (x <= -1.6) return 0.5;
  if (x <= 0) return 0.5 - k * (x + 1.6) * (x + 1.6);
  if (x < 1.6) return -0.5 + k * (x - 1.6) * (x - 1.6);
  return -0.5;
}

double example3_profile(double x) {
  const double k = 0.8 / (1.5 * 1.5);
  if (x <= -1.5) return 0.8;
  if (x <= 0) return 0.8 - k * (x + 1.5) * (x + 1.5);
  if (x < 1.5) return -0.8 + k * (x - 1.5) * (x - 1.5);
  return -0.8;
}

SpeedSpec1D example3_speed() {
  const double c0 = 1.0 / (std::numbers::e - 1.0);
  SpeedSpec1D s;
  s.pieces = {{-kInf, -1.0, c0, 0.0},
              {-1.0, 0.0, c0 + 1.0, 1.0},
              {0.0, 1.0, c0 + 0.5, -1.0},
              {1.0, kInf, c0 - 0.5, 0.0}};
  s.model = InterfaceModel::transmit_only;
  return s;
}

double example4_initial(double x, double y, double xi, double eta) {
  const double c1 = 0.03, c2 = 0.025, c3 = 0.05, c4 = 0.025;
  const double a = x / c1, b = (y + 0.1) / c2, c = xi / c3, d = (eta - 0.1) / c4;
  return std::exp(-a * a - b * b - c * c - d * d) / (std::numbers::pi * c3 * c4);
}

Problem make_problem(const std::string& id, int n) {
  Problem p;
  p.id = id;
  if (id == "ex1") {
    SpeedSpec1D spec{{{-kInf, 0.0, 0.6}, {0.0, kInf, 0.2}}, InterfaceModel::partial};
    fill_1d(p, spec, {-1.5, 1.5}, {-1.6, 1.6}, pick(n, 128));
    const auto f0 = cell_average_1d(example1_initial, p.mesh1);
    p.parts.push_back(component_1d(p, "f", {}, to_vec(f0.f)));
    p.T = 1.0;
    p.dt = 0.02;
    p.n_p = 1 << 14;
    reference_p(p, pick(n, 128) == 128, -55.771, 5.7454, 0.7454);
  } else if (id == "ex2") {
    const int nx = pick(n, 128);
    const Interval xr{-1.5, 1.5};
    // the wells at +-0.4 are moved to the nearest cell faces
    const double w = snap_to_face(0.4, xr, nx);
    SpeedSpec1D spec{{{-kInf, -w, 1.0}, {-w, w, 0.6}, {w, kInf, 1.0}}, InterfaceModel::partial};
    fill_1d(p, spec, xr, {-1.0, 1.0}, nx);
    p.beta = p.mesh1.dxi;
    const double beta = p.beta;
    const auto f0 = init_delta_field_1d(example2_profile, beta, p.mesh1);
    const auto in = ghosts_1d(p.mesh1, [beta](double x, double xi) {
      return discrete_delta(xi - example2_profile(x), beta);
    });
    p.parts.push_back(component_1d(p, "f", in, to_vec(f0.f)));
    p.T = 1.0;
    p.dt = 0.02;
    p.n_p = 1 << 14;
    reference_p(p, nx == 128, -84.295, 5.6006, 0.6021);
  } else if (id == "ex3") {
    fill_1d(p, example3_speed(), {-1.5, 1.5}, {-1.0, 1.0}, pick(n, 128));
    p.beta = 6 * p.mesh1.dxi;
    const auto& m = p.mesh1;
    Vec psi(m.size()), phi = Vec::Ones(m.size());
    for (int i = 0; i < m.nx; ++i)
      for (int j = 0; j < m.nxi; ++j) psi[m.index(i, j)] = m.xi[j] - example3_profile(m.x[i]);
    const auto in_psi =
        ghosts_1d(m, [](double x, double xi) { return xi - example3_profile(x); });
    const auto in_phi = ghosts_1d(m, [](double, double) { return 1.0; });
    p.parts.push_back(component_1d(p, "psi", in_psi, psi));
    p.parts.push_back(component_1d(p, "phi", in_phi, phi));
    p.T = 1.0;
    p.dt = 0.02;
    p.n_p = 1 << 14;
    reference_p(p, m.nx == 128, -257.26, 78.796, 14.513);
  } else if (id == "ex4") {
    const int k = pick(n, 8);
    p.space_dim = 2;
    p.mesh2 = build_mesh_2d({-0.12, 0.12}, {-0.2, 0.2}, {-0.2, 0.2}, {-0.2, 0.2}, k, k, k, k);
    SpeedSpec2D spec;
    spec.boxes = {{-kInf, kInf, -kInf, 0.0, 1.0}, {-kInf, kInf, 0.0, kInf, 2.0}};
    p.speed2 = sample_speed_2d(spec, p.mesh2);
    const auto& m = p.mesh2;
    Vec f0(m.size());
    for (int i = 0; i < m.nx; ++i) {
      const double ax = gauss_avg(m.x[i] - m.dx / 2, m.x[i] + m.dx / 2, 0.0, 0.03);
      for (int j = 0; j < m.ny; ++j) {
        const double ay = gauss_avg(m.y[j] - m.dy / 2, m.y[j] + m.dy / 2, -0.1, 0.025);
        for (int a = 0; a < m.nxi; ++a) {
          const double axi = gauss_avg(m.xi[a] - m.dxi / 2, m.xi[a] + m.dxi / 2, 0.0, 0.05);
          for (int l = 0; l < m.neta; ++l) {
            const double aeta =
                gauss_avg(m.eta[l] - m.deta / 2, m.eta[l] + m.deta / 2, 0.1, 0.025);
            f0[m.index(i, j, a, l)] =
                ax * ay * axi * aeta / (std::numbers::pi * 0.05 * 0.025);
          }
        }
      }
    }
    const auto sys = assemble_system_2d(m, p.speed2);
    p.audit_A1 = sys.audit_A1;
    p.audit_A2 = sys.audit_A2;
    p.q_bound = std::max(sys.q1, sys.q2);
    p.parts.push_back({"f", sys.A, sys.b, f0});
    p.T = 0.12;
    p.dt = 0.01;
    p.n_p = 1 << 12;
    reference_p(p, k == 8, -20.615, 5.5872, 0.59121);
  } else if (id == "advection") {
    const int nn = pick(n, 64);
    p.space_dim = 0;
    const double c_minus = 1.0, c_plus = 0.5;
    const auto sys = assemble_advection_interface(nn, 1.0, c_minus, c_plus, c_minus / c_plus);
    Vec u0(2 * nn);
    for (int j = -(nn - 1); j <= nn; ++j) {
      const double x = double(j) / nn;
      p.grid0.push_back(x);
      u0[j + nn - 1] = std::exp(-std::pow((x + 0.5) / 0.1, 2));
    }
    p.audit_A1 = sys.audit_A;
    p.parts.push_back({"u", sys.A, sys.b, u0});
    p.T = 0.5;
    p.dt = 0.01;
    p.n_p = 1 << 10;
  } else {
    throw ConfigError("unknown problem '" + id + "'");
  }
  return p;
}

}  // namespace liouville
