#include "liouville/assembly2d.hpp"

#include <algorithm>
#include <cmath>

#include "liouville/error.hpp"
#include "liouville/interface_physics.hpp"

namespace liouville {

namespace {

double ghost(const std::vector<double>& g, std::size_t k) { return g.empty() ? 0.0 : g[k]; }

void check_inflow(const PhaseMesh2D& m, const Inflow2D& in) {
  if (in.time_dependent)
    throw UnsupportedError("time-dependent inflow is not supported");
  auto chk = [](const std::vector<double>& v, std::size_t n, const char* name) {
    if (!v.empty() && v.size() != n)
      throw ShapeError(std::string("inflow ") + name + " has the wrong length");
  };
  const std::size_t kl = std::size_t(m.nxi) * m.neta;
  chk(in.x_low, m.ny * kl, "x_low");
  chk(in.x_high, m.ny * kl, "x_high");
  chk(in.y_low, m.nx * kl, "y_low");
  chk(in.y_high, m.nx * kl, "y_high");
  chk(in.xi_low, std::size_t(m.nx) * m.ny * m.neta, "xi_low");
  chk(in.xi_high, std::size_t(m.nx) * m.ny * m.neta, "xi_high");
  chk(in.eta_low, std::size_t(m.nx) * m.ny * m.nxi, "eta_low");
  chk(in.eta_high, std::size_t(m.nx) * m.ny * m.nxi, "eta_high");
}

struct FaceTerm {
  double a_t = 0.0, a_r = 0.0;
  Bracket br;
  bool total_reflection = false;
};

// Gates and interpolation weights at one face for normal slowness nodes[k].
FaceTerm face_term(double cm, double cp, InterfaceModel model, int k, double tangential,
                   const std::vector<double>& nodes, double spacing) {
  FaceTerm ft;
  if (cm == cp) {
    ft.a_t = 1.0;
    ft.br.count = 1;
    ft.br.node[0] = k;
    ft.br.weight[0] = 1.0;
    return ft;
  }
  const double xi = nodes[k];
  const bool pos = xi > 0.0;
  const auto dec = pos ? transmit_test_2d(xi, tangential, cp, cm)
                       : transmit_test_2d(xi, tangential, cm, cp);
  InterfaceCoeffs co{0.0, 1.0};
  if (dec.branch == Branch::transmit_and_reflect && model == InterfaceModel::partial) {
    const double g_known = std::abs(xi) / std::sqrt(xi * xi + tangential * tangential);
    const double s = dec.transmitted;
    const double g_src = std::abs(s) / std::sqrt(s * s + tangential * tangential);
    co = pos ? coeffs_2d(cm, cp, g_src, g_known) : coeffs_2d(cm, cp, g_known, g_src);
  }
  const Gates g = step_gates_2d(dec.discriminant, co);
  ft.a_t = g.a_t;
  ft.a_r = g.a_r;
  if (dec.branch == Branch::total_reflection)
    ft.total_reflection = true;
  else
    ft.br = bracket(dec.transmitted, nodes, spacing);
  return ft;
}

template <class Body>
void for_each_i(int nx, Exec exec, Body&& body) {
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < nx; ++i) body(i);
  } else {
    for (int i = 0; i < nx; ++i) body(i);
  }
}

FluxPart2D finish(const PhaseMesh2D& m, std::vector<std::vector<Triplet>>& rows, Vec b,
                  const std::vector<int>& hits, const std::vector<int>& refl) {
  std::vector<Triplet> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  FluxPart2D out;
  out.A = from_triplets(int(m.size()), int(m.size()), all);
  out.b = std::move(b);
  for (int h : hits) out.edge_hits += h;
  for (int r : refl) out.total_reflection_rows += r;
  return out;
}

int q_bound(const std::vector<double>& cm, const std::vector<double>& cp) {
  int m = 1;
  for (std::size_t n = 0; n < cm.size(); ++n)
    if (cm[n] != cp[n])
      m = std::max({m, int(std::ceil(cp[n] / cm[n])), int(std::ceil(cm[n] / cp[n]))});
  return 2 * m + 2;
}

}  // namespace

int q_bound_x(const WaveSpeed2D& s) { return q_bound(s.cx_minus, s.cx_plus); }
int q_bound_y(const WaveSpeed2D& s) { return q_bound(s.cy_minus, s.cy_plus); }

FluxPart2D assemble_xflux_2d(const PhaseMesh2D& m, const WaveSpeed2D& speed,
                             const Inflow2D& inflow, Exec exec) {
  check_inflow(m, inflow);
  std::vector<std::vector<Triplet>> rows(m.nx);
  std::vector<int> hits(m.nx, 0), refl(m.nx, 0);
  Vec b = Vec::Zero(m.size());
  for_each_i(m.nx, exec, [&](int i) {
    auto& t = rows[i];
    for (int j = 0; j < m.ny; ++j)
      for (int k = 0; k < m.nxi; ++k)
        for (int l = 0; l < m.neta; ++l) {
          const int row = int(m.index(i, j, k, l));
          const double xi = m.xi[k], eta = m.eta[l];
          const double s = speed.cell(i, j) * std::abs(xi) / (m.dx * std::sqrt(xi * xi + eta * eta));
          t.emplace_back(row, row, s);
          const bool pos = xi > 0.0;
          const int h = pos ? i : i + 1, nb = pos ? i - 1 : i + 1;
          if (nb < 0 || nb >= m.nx) {
            b[row] -= s * ghost(pos ? inflow.x_low : inflow.x_high,
                                (std::size_t(j) * m.nxi + k) * m.neta + l);
            continue;
          }
          const auto ft = face_term(speed.cxm(h, j), speed.cxp(h, j), speed.model, k, eta,
                                    m.xi, m.dxi);
          hits[i] += ft.br.upper_edge;
          refl[i] += ft.total_reflection;
          for (int n = 0; n < ft.br.count; ++n)
            t.emplace_back(row, int(m.index(nb, j, ft.br.node[n], l)),
                           -s * ft.a_t * ft.br.weight[n]);
          if (ft.a_r != 0.0)
            t.emplace_back(row, int(m.index(i, j, m.mirror_xi(k), l)), -s * ft.a_r);
        }
  });
  return finish(m, rows, std::move(b), hits, refl);
}

FluxPart2D assemble_yflux_2d(const PhaseMesh2D& m, const WaveSpeed2D& speed,
                             const Inflow2D& inflow, Exec exec) {
  check_inflow(m, inflow);
  std::vector<std::vector<Triplet>> rows(m.nx);
  std::vector<int> hits(m.nx, 0), refl(m.nx, 0);
  Vec b = Vec::Zero(m.size());
  for_each_i(m.nx, exec, [&](int i) {
    auto& t = rows[i];
    for (int j = 0; j < m.ny; ++j)
      for (int k = 0; k < m.nxi; ++k)
        for (int l = 0; l < m.neta; ++l) {
          const int row = int(m.index(i, j, k, l));
          const double xi = m.xi[k], eta = m.eta[l];
          const double s = speed.cell(i, j) * std::abs(eta) / (m.dy * std::sqrt(xi * xi + eta * eta));
          t.emplace_back(row, row, s);
          const bool pos = eta > 0.0;
          const int h = pos ? j : j + 1, nb = pos ? j - 1 : j + 1;
          if (nb < 0 || nb >= m.ny) {
            b[row] -= s * ghost(pos ? inflow.y_low : inflow.y_high,
                                (std::size_t(i) * m.nxi + k) * m.neta + l);
            continue;
          }
          const auto ft = face_term(speed.cym(i, h), speed.cyp(i, h), speed.model, l, xi,
                                    m.eta, m.deta);
          hits[i] += ft.br.upper_edge;
          refl[i] += ft.total_reflection;
          for (int n = 0; n < ft.br.count; ++n)
            t.emplace_back(row, int(m.index(i, nb, k, ft.br.node[n])),
                           -s * ft.a_t * ft.br.weight[n]);
          if (ft.a_r != 0.0)
            t.emplace_back(row, int(m.index(i, j, k, m.mirror_eta(l))), -s * ft.a_r);
        }
  });
  return finish(m, rows, std::move(b), hits, refl);
}

SlownessPart assemble_xi_advection_2d(const PhaseMesh2D& m, const WaveSpeed2D& speed,
                                      const Inflow2D& inflow) {
  check_inflow(m, inflow);
  std::vector<Triplet> t;
  Vec b = Vec::Zero(m.size());
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.ny; ++j) {
      const double dc = -(speed.cxm(i + 1, j) - speed.cxp(i, j)) / (m.dx * m.dxi);
      if (dc == 0.0) continue;
      for (int k = 0; k < m.nxi; ++k)
        for (int l = 0; l < m.neta; ++l) {
          const int row = int(m.index(i, j, k, l));
          const double d = dc * std::sqrt(m.xi[k] * m.xi[k] + m.eta[l] * m.eta[l]);
          const double ad = std::abs(d), lo = -(ad + d) / 2, hi = -(ad - d) / 2;
          const std::size_t g = (std::size_t(i) * m.ny + j) * m.neta + l;
          t.emplace_back(row, row, ad);
          if (k > 0)
            t.emplace_back(row, int(m.index(i, j, k - 1, l)), lo);
          else
            b[row] += lo * ghost(inflow.xi_low, g);
          if (k < m.nxi - 1)
            t.emplace_back(row, int(m.index(i, j, k + 1, l)), hi);
          else
            b[row] += hi * ghost(inflow.xi_high, g);
        }
    }
  return {from_triplets(int(m.size()), int(m.size()), t), std::move(b)};
}

SlownessPart assemble_eta_advection_2d(const PhaseMesh2D& m, const WaveSpeed2D& speed,
                                       const Inflow2D& inflow) {
  check_inflow(m, inflow);
  std::vector<Triplet> t;
  Vec b = Vec::Zero(m.size());
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.ny; ++j) {
      const double dc = -(speed.cym(i, j + 1) - speed.cyp(i, j)) / (m.dy * m.deta);
      if (dc == 0.0) continue;
      for (int k = 0; k < m.nxi; ++k)
        for (int l = 0; l < m.neta; ++l) {
          const int row = int(m.index(i, j, k, l));
          const double d = dc * std::sqrt(m.xi[k] * m.xi[k] + m.eta[l] * m.eta[l]);
          const double ad = std::abs(d), lo = -(ad + d) / 2, hi = -(ad - d) / 2;
          const std::size_t g = (std::size_t(i) * m.ny + j) * m.nxi + k;
          t.emplace_back(row, row, ad);
          if (l > 0)
            t.emplace_back(row, row - 1, lo);
          else
            b[row] += lo * ghost(inflow.eta_low, g);
          if (l < m.neta - 1)
            t.emplace_back(row, row + 1, hi);
          else
            b[row] += hi * ghost(inflow.eta_high, g);
        }
    }
  return {from_triplets(int(m.size()), int(m.size()), t), std::move(b)};
}

SparseSystem2D assemble_system_2d(const PhaseMesh2D& m, const WaveSpeed2D& speed,
                                  const Inflow2D& inflow, Exec exec) {
  auto x = assemble_xflux_2d(m, speed, inflow, exec);
  auto y = assemble_yflux_2d(m, speed, inflow, exec);
  auto a3 = assemble_xi_advection_2d(m, speed, inflow);
  auto a4 = assemble_eta_advection_2d(m, speed, inflow);
  SparseSystem2D s;
  s.A1 = std::move(x.A);
  s.A2 = std::move(y.A);
  s.A3 = std::move(a3.A2);
  s.A4 = std::move(a4.A2);
  s.b1 = std::move(x.b);
  s.b2 = std::move(y.b);
  s.b3 = std::move(a3.b2);
  s.b4 = std::move(a4.b2);
  s.A = -(s.A1 + s.A2 + s.A3 + s.A4);
  s.A.prune(0.0, 0.0);
  s.A.makeCompressed();
  s.b = -(s.b1 + s.b2 + s.b3 + s.b4);
  s.audit_A1 = audit(s.A1);
  s.audit_A2 = audit(s.A2);
  s.audit_A3 = audit(s.A3);
  s.audit_A4 = audit(s.A4);
  s.audit_A = audit(s.A);
  s.q1 = q_bound_x(speed);
  s.q2 = q_bound_y(speed);
  s.edge_hits = x.edge_hits + y.edge_hits;
  s.total_reflection_rows = x.total_reflection_rows + y.total_reflection_rows;
  return s;
}

FluxPair flux_oracle_2d(double c_minus, double c_plus, InterfaceModel model,
                        const std::vector<double>& f_left,
                        const std::vector<double>& f_right, int k, double tangential,
                        const std::vector<double>& nodes, double spacing) {
  const int n = int(nodes.size());
  const double tol = 1e-10 * spacing;
  const double xi = nodes[k], eta = tangential;
  const int k1 = n - 1 - k;
  auto interp = [&](const std::vector<double>& g, double s, bool& found) {
    found = true;
    if (s < nodes[0] && s >= nodes[0] - tol) s = nodes[0];
    for (int q = 0; q + 1 < n; ++q)
      if (nodes[q] <= s && s < nodes[q + 1])
        return (nodes[q + 1] - s) / spacing * g[q] + (s - nodes[q]) / spacing * g[q + 1];
    if (std::abs(s - nodes[n - 1]) <= tol) return g[n - 1];
    found = false;
    return 0.0;
  };
  auto alpha_r = [&](double gamma_minus, double gamma_plus) {
    if (model == InterfaceModel::transmit_only) return 0.0;
    const double num = c_plus * gamma_minus - c_minus * gamma_plus;
    const double den = c_plus * gamma_minus + c_minus * gamma_plus;
    return (num / den) * (num / den);
  };
  FluxPair out;
  if (xi > 0) {
    out.minus = f_left[k];
    const double r = c_plus / c_minus;
    const double disc = r * r * xi * xi + (r * r - 1) * eta * eta;
    if (disc > 0) {
      const double xi_minus = std::sqrt(disc);
      const double gp = xi / std::sqrt(xi * xi + eta * eta);
      const double gm = xi_minus / std::sqrt(xi_minus * xi_minus + eta * eta);
      const double ar = alpha_r(gm, gp), at = 1 - ar;
      bool found;
      const double v = interp(f_left, xi_minus, found);
      out.plus = (found ? at * v : 0.0) + ar * f_right[k1];
    } else {
      out.plus = f_right[k1];
    }
  } else {
    out.plus = f_right[k];
    const double r = c_minus / c_plus;
    const double disc = r * r * xi * xi + (r * r - 1) * eta * eta;
    if (disc > 0) {
      const double xi_plus = -std::sqrt(disc);
      const double gp = std::abs(xi_plus) / std::sqrt(xi_plus * xi_plus + eta * eta);
      const double gm = std::abs(xi) / std::sqrt(xi * xi + eta * eta);
      const double ar = alpha_r(gm, gp), at = 1 - ar;
      bool found;
      const double v = interp(f_right, xi_plus, found);
      out.minus = (found ? at * v : 0.0) + ar * f_left[k1];
    } else {
      out.minus = f_left[k1];
    }
  }
  return out;
}

Vec direct_rhs_2d(const PhaseMesh2D& m, const WaveSpeed2D& speed, const Inflow2D& in,
                  const Vec& f, unsigned parts) {
  check_inflow(m, in);
  if (std::size_t(f.size()) != m.size()) throw ShapeError("field length mismatch");
  Vec rhs = Vec::Zero(m.size());
  const std::size_t kl = std::size_t(m.nxi) * m.neta;

  if (parts & rhs_xflux) {
    auto slice = [&](int i, int j, int l) {
      std::vector<double> s(m.nxi, 0.0);
      for (int k = 0; k < m.nxi; ++k) {
        if (i < 0)
          s[k] = ghost(in.x_low, j * kl + std::size_t(k) * m.neta + l);
        else if (i >= m.nx)
          s[k] = ghost(in.x_high, j * kl + std::size_t(k) * m.neta + l);
        else
          s[k] = f[m.index(i, j, k, l)];
      }
      return s;
    };
    for (int j = 0; j < m.ny; ++j)
      for (int l = 0; l < m.neta; ++l) {
        std::vector<std::vector<FluxPair>> face(m.nx + 1, std::vector<FluxPair>(m.nxi));
        for (int h = 0; h <= m.nx; ++h) {
          const auto fl = slice(h - 1, j, l), fr = slice(h, j, l);
          for (int k = 0; k < m.nxi; ++k)
            face[h][k] = flux_oracle_2d(speed.cxm(h, j), speed.cxp(h, j), speed.model, fl, fr,
                                        k, m.eta[l], m.xi, m.dxi);
        }
        for (int i = 0; i < m.nx; ++i)
          for (int k = 0; k < m.nxi; ++k) {
            const double xi = m.xi[k], eta = m.eta[l];
            const double coef = speed.cell(i, j) * xi / (m.dx * std::sqrt(xi * xi + eta * eta));
            rhs[m.index(i, j, k, l)] -= coef * (face[i + 1][k].minus - face[i][k].plus);
          }
      }
  }

  if (parts & rhs_yflux) {
    auto slice = [&](int i, int j, int k) {
      std::vector<double> s(m.neta, 0.0);
      for (int l = 0; l < m.neta; ++l) {
        if (j < 0)
          s[l] = ghost(in.y_low, i * kl + std::size_t(k) * m.neta + l);
        else if (j >= m.ny)
          s[l] = ghost(in.y_high, i * kl + std::size_t(k) * m.neta + l);
        else
          s[l] = f[m.index(i, j, k, l)];
      }
      return s;
    };
    for (int i = 0; i < m.nx; ++i)
      for (int k = 0; k < m.nxi; ++k) {
        std::vector<std::vector<FluxPair>> face(m.ny + 1, std::vector<FluxPair>(m.neta));
        for (int h = 0; h <= m.ny; ++h) {
          const auto fl = slice(i, h - 1, k), fr = slice(i, h, k);
          for (int l = 0; l < m.neta; ++l)
            face[h][l] = flux_oracle_2d(speed.cym(i, h), speed.cyp(i, h), speed.model, fl, fr,
                                        l, m.xi[k], m.eta, m.deta);
        }
        for (int j = 0; j < m.ny; ++j)
          for (int l = 0; l < m.neta; ++l) {
            const double xi = m.xi[k], eta = m.eta[l];
            const double coef = speed.cell(i, j) * eta / (m.dy * std::sqrt(xi * xi + eta * eta));
            rhs[m.index(i, j, k, l)] -= coef * (face[j + 1][l].minus - face[j][l].plus);
          }
      }
  }

  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.ny; ++j) {
      const double dcx = -(speed.cxm(i + 1, j) - speed.cxp(i, j)) / (m.dx * m.dxi);
      const double dcy = -(speed.cym(i, j + 1) - speed.cyp(i, j)) / (m.dy * m.deta);
      for (int k = 0; k < m.nxi; ++k)
        for (int l = 0; l < m.neta; ++l) {
          const double v = std::sqrt(m.xi[k] * m.xi[k] + m.eta[l] * m.eta[l]);
          double r = 0.0;
          if ((parts & rhs_xi_adv) && dcx != 0.0) {
            const double d = dcx * v;
            const std::size_t g = (std::size_t(i) * m.ny + j) * m.neta + l;
            auto val = [&](int kk) {
              if (kk < 0) return ghost(in.xi_low, g);
              if (kk >= m.nxi) return ghost(in.xi_high, g);
              return f[m.index(i, j, kk, l)];
            };
            r -= d * ((d > 0 ? val(k) : val(k + 1)) - (d > 0 ? val(k - 1) : val(k)));
          }
          if ((parts & rhs_eta_adv) && dcy != 0.0) {
            const double d = dcy * v;
            const std::size_t g = (std::size_t(i) * m.ny + j) * m.nxi + k;
            auto val = [&](int ll) {
              if (ll < 0) return ghost(in.eta_low, g);
              if (ll >= m.neta) return ghost(in.eta_high, g);
              return f[m.index(i, j, k, ll)];
            };
            r -= d * ((d > 0 ? val(l) : val(l + 1)) - (d > 0 ? val(l - 1) : val(l)));
          }
          rhs[m.index(i, j, k, l)] += r;
        }
    }
  return rhs;
}

}  // namespace liouville
