#include "liouville/assembly1d.hpp"

#include <algorithm>
#include <cmath>

#include "liouville/error.hpp"
#include "liouville/interface_physics.hpp"

namespace liouville {

namespace {

double ghost(const std::vector<double>& g, int k) { return g.empty() ? 0.0 : g[k]; }

void check_inflow(const PhaseMesh1D& mesh, const Inflow1D& in) {
  if (in.time_dependent)
    throw UnsupportedError("time-dependent inflow is not supported");
  auto chk = [](const std::vector<double>& v, int n, const char* name) {
    if (!v.empty() && int(v.size()) != n)
      throw ShapeError(std::string("inflow ") + name + " has the wrong length");
  };
  chk(in.left, mesh.nxi, "left");
  chk(in.right, mesh.nxi, "right");
  chk(in.low, mesh.nx, "low");
  chk(in.high, mesh.nx, "high");
}

InterfaceCoeffs face_coeffs(double cm, double cp, InterfaceModel model) {
  if (model == InterfaceModel::transmit_only) return {0.0, 1.0};
  return coeffs_1d(cm, cp);
}

}  // namespace

int q_bound_1d(const WaveSpeed1D& speed) {
  int m = 1;
  for (int h : speed.interfaces) {
    const double a = speed.c_plus[h], b = speed.c_minus[h];
    m = std::max({m, int(std::ceil(a / b)), int(std::ceil(b / a))});
  }
  return 2 * m + 2;
}

TransportPart assemble_transport_1d(const PhaseMesh1D& mesh, const WaveSpeed1D& speed,
                                    const Inflow1D& inflow, Exec exec) {
  check_inflow(mesh, inflow);
  const int nx = mesh.nx, nxi = mesh.nxi;
  std::vector<std::vector<Triplet>> rows(nx);
  Vec b1 = Vec::Zero(mesh.size());
  std::vector<int> hits(nx, 0);

  auto build = [&](int i) {
    auto& t = rows[i];
    const double s = speed.c_cell[i] / mesh.dx;
    for (int j = 0; j < nxi; ++j) {
      const int row = int(mesh.index(i, j));
      const bool right_moving = mesh.xi[j] > 0.0;
      const int h = right_moving ? i : i + 1;
      const int nb = right_moving ? i - 1 : i + 1;
      t.emplace_back(row, row, s);
      if (nb < 0 || nb >= nx) {
        b1[row] -= s * ghost(right_moving ? inflow.left : inflow.right, j);
        continue;
      }
      const double cm = speed.c_minus[h], cp = speed.c_plus[h];
      if (cm == cp) {
        t.emplace_back(row, int(mesh.index(nb, j)), -s);
        continue;
      }
      const auto co = face_coeffs(cm, cp, speed.model);
      const double target = right_moving ? transmitted_xi_1d(mesh.xi[j], cp, cm)
                                         : transmitted_xi_1d(mesh.xi[j], cm, cp);
      const Bracket br = bracket(target, mesh.xi, mesh.dxi);
      hits[i] += br.upper_edge;
      for (int n = 0; n < br.count; ++n)
        t.emplace_back(row, int(mesh.index(nb, br.node[n])), -s * co.transmit * br.weight[n]);
      if (co.reflect != 0.0)
        t.emplace_back(row, int(mesh.index(i, mesh.mirror(j))), -s * co.reflect);
    }
  };

  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < nx; ++i) build(i);
  } else {
    for (int i = 0; i < nx; ++i) build(i);
  }

  std::vector<Triplet> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  TransportPart out;
  out.A1 = from_triplets(int(mesh.size()), int(mesh.size()), all);
  out.b1 = std::move(b1);
  for (int h : hits) out.edge_hits += h;
  return out;
}

SlownessPart assemble_slowness_1d(const PhaseMesh1D& mesh, const WaveSpeed1D& speed,
                                  const Inflow1D& inflow) {
  check_inflow(mesh, inflow);
  std::vector<Triplet> t;
  Vec b2 = Vec::Zero(mesh.size());
  for (int i = 0; i < mesh.nx; ++i) {
    const double dc = -(speed.c_minus[i + 1] - speed.c_plus[i]) / (mesh.dx * mesh.dxi);
    if (dc == 0.0) continue;
    for (int j = 0; j < mesh.nxi; ++j) {
      const int row = int(mesh.index(i, j));
      const double d = dc * std::abs(mesh.xi[j]);
      const double ad = std::abs(d);
      const double lo = -(ad + d) / 2, hi = -(ad - d) / 2;
      t.emplace_back(row, row, ad);
      if (j > 0)
        t.emplace_back(row, row - 1, lo);
      else
        b2[row] += lo * ghost(inflow.low, i);
      if (j < mesh.nxi - 1)
        t.emplace_back(row, row + 1, hi);
      else
        b2[row] += hi * ghost(inflow.high, i);
    }
  }
  return {from_triplets(int(mesh.size()), int(mesh.size()), t), std::move(b2)};
}

SparseSystem assemble_system_1d(const PhaseMesh1D& mesh, const WaveSpeed1D& speed,
                                const Inflow1D& inflow, Exec exec) {
  auto tp = assemble_transport_1d(mesh, speed, inflow, exec);
  auto sp = assemble_slowness_1d(mesh, speed, inflow);
  SparseSystem s;
  s.A1 = std::move(tp.A1);
  s.A2 = std::move(sp.A2);
  s.b1 = std::move(tp.b1);
  s.b2 = std::move(sp.b2);
  s.A = -(s.A1 + s.A2);
  s.A.prune(0.0, 0.0);
  s.A.makeCompressed();
  s.b = -(s.b1 + s.b2);
  s.audit_A1 = audit(s.A1);
  s.audit_A2 = audit(s.A2);
  s.audit_A = audit(s.A);
  s.q_bound = q_bound_1d(speed);
  s.edge_hits = tp.edge_hits;
  return s;
}

FluxPair flux_oracle_1d(double c_minus, double c_plus, InterfaceModel model,
                        const std::vector<double>& f_left,
                        const std::vector<double>& f_right, int j,
                        const PhaseMesh1D& mesh) {
  const auto& xi = mesh.xi;
  const int n = mesh.nxi;
  const double tol = 1e-10 * mesh.dxi;
  double alpha_r = 0.0, alpha_t = 1.0;
  if (model == InterfaceModel::partial) {
    alpha_r = std::pow((c_plus - c_minus) / (c_plus + c_minus), 2);
    alpha_t = 1.0 - alpha_r;
  }
  // linear interpolation of `g` at `s` between the two bracketing centres
  auto interp = [&](const std::vector<double>& g, double s) {
    if (s < xi[0] && s >= xi[0] - tol) s = xi[0];
    for (int k = 0; k + 1 < n; ++k)
      if (xi[k] <= s && s < xi[k + 1])
        return ((xi[k + 1] - s) * g[k] + (s - xi[k]) * g[k + 1]) / mesh.dxi;
    if (std::abs(s - xi[n - 1]) <= tol) return g[n - 1];
    return 0.0;
  };
  const int jr = n - 1 - j;
  FluxPair out;
  if (xi[j] > 0) {
    out.minus = f_left[j];
    const double xi_minus = (c_plus / c_minus) * xi[j];
    out.plus = alpha_t * interp(f_left, xi_minus) + alpha_r * f_right[jr];
  } else {
    out.plus = f_right[j];
    const double xi_plus = (c_minus / c_plus) * xi[j];
    out.minus = alpha_t * interp(f_right, xi_plus) + alpha_r * f_left[jr];
  }
  return out;
}

Vec direct_rhs_1d(const PhaseMesh1D& mesh, const WaveSpeed1D& speed,
                  const Inflow1D& inflow, const Vec& f, bool transport_only) {
  check_inflow(mesh, inflow);
  const int nx = mesh.nx, nxi = mesh.nxi;
  auto slice = [&](int i) {
    if (i < 0) return inflow.left.empty() ? std::vector<double>(nxi, 0.0) : inflow.left;
    if (i >= nx) return inflow.right.empty() ? std::vector<double>(nxi, 0.0) : inflow.right;
    return std::vector<double>(f.data() + mesh.index(i, 0), f.data() + mesh.index(i, 0) + nxi);
  };
  // fluxes at every face
  std::vector<std::vector<FluxPair>> face(nx + 1, std::vector<FluxPair>(nxi));
  for (int h = 0; h <= nx; ++h) {
    const auto fl = slice(h - 1), fr = slice(h);
    for (int j = 0; j < nxi; ++j)
      face[h][j] = flux_oracle_1d(speed.c_minus[h], speed.c_plus[h], speed.model, fl, fr, j, mesh);
  }
  Vec rhs(mesh.size());
  for (int i = 0; i < nx; ++i) {
    const double dc = -(speed.c_minus[i + 1] - speed.c_plus[i]) / (mesh.dx * mesh.dxi);
    for (int j = 0; j < nxi; ++j) {
      const double sgn = mesh.xi[j] > 0 ? 1.0 : -1.0;
      double r = -speed.c_cell[i] * sgn / mesh.dx * (face[i + 1][j].minus - face[i][j].plus);
      if (!transport_only && dc != 0.0) {
        const double d = dc * std::abs(mesh.xi[j]);
        auto val = [&](int jj) {
          if (jj < 0) return ghost(inflow.low, i);
          if (jj >= nxi) return ghost(inflow.high, i);
          return f[mesh.index(i, jj)];
        };
        const double up = d > 0 ? val(j) : val(j + 1);     // f_{j+1/2}
        const double down = d > 0 ? val(j - 1) : val(j);   // f_{j-1/2}
        r -= d * (up - down);
      }
      rhs[mesh.index(i, j)] = r;
    }
  }
  return rhs;
}

SparseSystem assemble_advection_interface(int n, double a, double c_minus, double c_plus,
                                          double rho, double u_left, double u_right) {
  if (n < 2) throw ConfigError("advection mesh needs n >= 2");
  if (c_minus * c_plus <= 0.0)
    throw DomainError("advection speeds must be nonzero with the same sign");
  if (!(rho > 0.0)) throw DomainError("continuity parameter must be positive");
  const double dx = a / n;
  const int dim = 2 * n;
  const double am = std::abs(c_minus), ap = std::abs(c_plus);
  auto id = [n](int j) { return j + n - 1; };  // u_j -> row
  std::vector<Triplet> t;
  for (int j = -(n - 1); j <= n; ++j) {
    const int r = id(j);
    const bool left = j <= 0;
    const double c = left ? c_minus : c_plus, ac = left ? am : ap;
    double w_lo = (ac + c) / 2, w_hi = (ac - c) / 2;
    if (j == 0) w_hi = (c_minus / (rho * c_plus)) * (ap - c_plus) / 2;
    if (j == 1) w_lo = (rho * c_plus / c_minus) * (am + c_minus) / 2;
    t.emplace_back(r, r, -ac / dx);
    if (j > -(n - 1)) t.emplace_back(r, id(j - 1), w_lo / dx);
    if (j < n) t.emplace_back(r, id(j + 1), w_hi / dx);
  }
  SparseSystem s;
  s.A = from_triplets(dim, dim, t);
  s.b = Vec::Zero(dim);
  s.b[0] = (am + c_minus) / 2 * u_left / dx;
  s.b[dim - 1] = (ap - c_plus) / 2 * u_right / dx;
  s.audit_A = audit(s.A);
  return s;
}

}  // namespace liouville
