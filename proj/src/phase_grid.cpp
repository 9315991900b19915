#include "liouville/phase_grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "liouville/error.hpp"

namespace liouville {

namespace {

void check_count(int n, const char* name) {
  if (n % 2 != 0)
    throw ParityError(std::string(name) + " must be even, got " + std::to_string(n));
  if (n < 4)
    throw ConfigError(std::string(name) + " must be at least 4, got " + std::to_string(n));
}

void check_bounds(Interval r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi))
    throw ConfigError(std::string(name) + " bounds must be finite with lo < hi");
}

void check_symmetric(Interval r, const char* name) {
  if (std::abs(r.lo + r.hi) > 1e-14 * std::abs(r.hi))
    throw ConfigError(std::string(name) + " bounds must be symmetric about 0");
}

std::vector<double> centres(Interval r, int n) {
  const double d = (r.hi - r.lo) / n;
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = r.lo + (i + 0.5) * d;
  return c;
}

// Symmetric slowness centres: built from half-integers so that the
// mirror identity xi[n-1-j] == -xi[j] holds bit for bit.
std::vector<double> symmetric_centres(Interval r, int n) {
  const double d = (r.hi - r.lo) / n;
  std::vector<double> c(n);
  for (int j = 0; j < n; ++j) c[j] = (j - n / 2 + 0.5) * d;
  return c;
}

bool jumps(double left, double right) {
  return std::abs(left - right) > 1e-12 * std::max(std::abs(left), std::abs(right));
}

}  // namespace

PhaseMesh1D build_mesh_1d(Interval x, Interval xi, int nx, int nxi) {
  check_count(nx, "N_x");
  check_count(nxi, "N_xi");
  check_bounds(x, "x");
  check_bounds(xi, "xi");
  check_symmetric(xi, "xi");
  PhaseMesh1D m;
  m.x_range = x;
  m.xi_range = xi;
  m.nx = nx;
  m.nxi = nxi;
  m.dx = (x.hi - x.lo) / nx;
  m.dxi = (xi.hi - xi.lo) / nxi;
  m.x = centres(x, nx);
  m.xi = symmetric_centres(xi, nxi);
  return m;
}

PhaseMesh2D build_mesh_2d(Interval x, Interval y, Interval xi, Interval eta,
                          int nx, int ny, int nxi, int neta) {
  check_count(nx, "N_x");
  check_count(ny, "N_y");
  check_count(nxi, "N_xi");
  check_count(neta, "N_eta");
  check_bounds(x, "x");
  check_bounds(y, "y");
  check_bounds(xi, "xi");
  check_bounds(eta, "eta");
  check_symmetric(xi, "xi");
  check_symmetric(eta, "eta");
  PhaseMesh2D m;
  m.x_range = x;
  m.y_range = y;
  m.xi_range = xi;
  m.eta_range = eta;
  m.nx = nx;
  m.ny = ny;
  m.nxi = nxi;
  m.neta = neta;
  m.dx = (x.hi - x.lo) / nx;
  m.dy = (y.hi - y.lo) / ny;
  m.dxi = (xi.hi - xi.lo) / nxi;
  m.deta = (eta.hi - eta.lo) / neta;
  m.x = centres(x, nx);
  m.y = centres(y, ny);
  m.xi = symmetric_centres(xi, nxi);
  m.eta = symmetric_centres(eta, neta);
  return m;
}

double SpeedSpec1D::left_limit(double x) const {
  for (const auto& p : pieces)
    if (p.lo < x && x <= p.hi) return p.a + p.b * x;
  throw ConfigError("wave speed undefined left of x = " + std::to_string(x));
}

double SpeedSpec1D::right_limit(double x) const {
  for (const auto& p : pieces)
    if (p.lo <= x && x < p.hi) return p.a + p.b * x;
  throw ConfigError("wave speed undefined right of x = " + std::to_string(x));
}

WaveSpeed1D sample_speed_1d(const SpeedSpec1D& spec, const PhaseMesh1D& mesh) {
  const auto& ps = spec.pieces;
  if (ps.empty()) throw ConfigError("wave speed has no pieces");
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (!(ps[k].lo < ps[k].hi)) throw ConfigError("speed piece with lo >= hi");
    if (k + 1 < ps.size() && ps[k].hi != ps[k + 1].lo)
      throw ConfigError("speed pieces must be sorted and contiguous");
  }
  if (!(ps.front().lo < mesh.x_range.lo) || !(ps.back().hi > mesh.x_range.hi))
    throw ConfigError("speed pieces do not cover the x domain");

  // face index -> index of the piece left of the jump
  std::map<int, std::size_t> jump_faces;
  const double tol = mesh.dx * 1e-12;
  for (std::size_t k = 0; k + 1 < ps.size(); ++k) {
    const double xb = ps[k].hi;
    const double left = ps[k].a + ps[k].b * xb;
    const double right = ps[k + 1].a + ps[k + 1].b * xb;
    if (!jumps(left, right)) continue;
    if (xb < mesh.x_range.lo - tol || xb > mesh.x_range.hi + tol) continue;
    const long h = std::lround((xb - mesh.x_range.lo) / mesh.dx);
    if (std::abs(mesh.x_face(int(h)) - xb) > tol)
      throw AlignmentError("speed jump at x = " + std::to_string(xb) +
                           " is not on a half-grid point");
    if (h == 0 || h == mesh.nx)
      throw ConfigError("speed jump on the domain boundary at x = " + std::to_string(xb));
    jump_faces[int(h)] = k;
  }

  WaveSpeed1D s;
  s.model = spec.model;
  s.c_minus.resize(mesh.nx + 1);
  s.c_plus.resize(mesh.nx + 1);
  for (int h = 0; h <= mesh.nx; ++h) {
    const double xh = mesh.x_face(h);
    auto it = jump_faces.find(h);
    if (it != jump_faces.end()) {
      const auto& l = ps[it->second];
      const auto& r = ps[it->second + 1];
      s.c_minus[h] = l.a + l.b * xh;
      s.c_plus[h] = r.a + r.b * xh;
      s.interfaces.push_back(h);
    } else {
      s.c_minus[h] = s.c_plus[h] = spec.left_limit(xh);
    }
    if (!(s.c_minus[h] > 0.0) || !(s.c_plus[h] > 0.0))
      throw DomainError("wave speed must be positive, violated at x = " + std::to_string(xh));
  }
  s.c_cell.resize(mesh.nx);
  for (int i = 0; i < mesh.nx; ++i) s.c_cell[i] = 0.5 * (s.c_plus[i] + s.c_minus[i + 1]);
  return s;
}

double SpeedSpec2D::value(double x, double y) const {
  for (const auto& b : boxes)
    if (b.x_lo <= x && x < b.x_hi && b.y_lo <= y && y < b.y_hi)
      return b.a + b.bx * x + b.by * y;
  throw ConfigError("wave speed undefined at (" + std::to_string(x) + ", " +
                    std::to_string(y) + ")");
}

double SpeedSpec2D::x_left_limit(double x, double y) const {
  for (const auto& b : boxes)
    if (b.x_lo < x && x <= b.x_hi && b.y_lo <= y && y < b.y_hi)
      return b.a + b.bx * x + b.by * y;
  throw ConfigError("wave speed undefined left of x = " + std::to_string(x));
}

double SpeedSpec2D::x_right_limit(double x, double y) const { return value(x, y); }

double SpeedSpec2D::y_lower_limit(double x, double y) const {
  for (const auto& b : boxes)
    if (b.x_lo <= x && x < b.x_hi && b.y_lo < y && y <= b.y_hi)
      return b.a + b.bx * x + b.by * y;
  throw ConfigError("wave speed undefined below y = " + std::to_string(y));
}

double SpeedSpec2D::y_upper_limit(double x, double y) const { return value(x, y); }

namespace {

// Box edges where the speed actually jumps, snapped to face indices.
// Returns face -> exact edge coordinate, per transverse cell.
std::map<std::pair<int, int>, double> find_jumps(
    const std::vector<double>& edges, Interval range, double d, int n,
    const std::vector<double>& transverse,
    const std::function<double(double, double)>& lower,
    const std::function<double(double, double)>& upper, const char* axis) {
  std::map<std::pair<int, int>, double> out;
  const double tol = d * 1e-12;
  for (double e : edges) {
    if (!std::isfinite(e) || e < range.lo - tol || e > range.hi + tol) continue;
    for (std::size_t t = 0; t < transverse.size(); ++t) {
      const double s = transverse[t];
      if (!jumps(lower(e, s), upper(e, s))) continue;
      const long h = std::lround((e - range.lo) / d);
      if (std::abs(range.lo + h * d - e) > tol)
        throw AlignmentError(std::string("speed jump at ") + axis + " = " +
                             std::to_string(e) + " is not on a grid line");
      if (h == 0 || h == n)
        throw ConfigError(std::string("speed jump on the domain boundary at ") + axis +
                          " = " + std::to_string(e));
      out[{int(h), int(t)}] = e;
    }
  }
  return out;
}

}  // namespace

WaveSpeed2D sample_speed_2d(const SpeedSpec2D& spec, const PhaseMesh2D& mesh) {
  if (spec.boxes.empty()) throw ConfigError("wave speed has no boxes");
  std::vector<double> xe, ye;
  for (const auto& b : spec.boxes) {
    xe.push_back(b.x_lo);
    xe.push_back(b.x_hi);
    ye.push_back(b.y_lo);
    ye.push_back(b.y_hi);
  }
  auto xl = [&](double x, double y) { return spec.x_left_limit(x, y); };
  auto xr = [&](double x, double y) { return spec.x_right_limit(x, y); };
  auto yl = [&](double y, double x) { return spec.y_lower_limit(x, y); };
  auto yu = [&](double y, double x) { return spec.y_upper_limit(x, y); };
  const auto jx = find_jumps(xe, mesh.x_range, mesh.dx, mesh.nx, mesh.y, xl, xr, "x");
  const auto jy = find_jumps(ye, mesh.y_range, mesh.dy, mesh.ny, mesh.x, yl, yu, "y");

  WaveSpeed2D s;
  s.nx = mesh.nx;
  s.ny = mesh.ny;
  s.model = spec.model;
  s.cx_minus.resize(std::size_t(mesh.nx + 1) * mesh.ny);
  s.cx_plus.resize(s.cx_minus.size());
  for (int h = 0; h <= mesh.nx; ++h) {
    for (int j = 0; j < mesh.ny; ++j) {
      const std::size_t id = std::size_t(h) * mesh.ny + j;
      auto it = jx.find({h, j});
      if (it != jx.end()) {
        s.cx_minus[id] = spec.x_left_limit(it->second, mesh.y[j]);
        s.cx_plus[id] = spec.x_right_limit(it->second, mesh.y[j]);
        s.interfaces_x.emplace_back(h, j);
      } else {
        s.cx_minus[id] = s.cx_plus[id] = spec.x_left_limit(mesh.x_face(h), mesh.y[j]);
      }
      if (!(s.cx_minus[id] > 0.0) || !(s.cx_plus[id] > 0.0))
        throw DomainError("wave speed must be positive");
    }
  }
  s.cy_minus.resize(std::size_t(mesh.nx) * (mesh.ny + 1));
  s.cy_plus.resize(s.cy_minus.size());
  for (int i = 0; i < mesh.nx; ++i) {
    for (int h = 0; h <= mesh.ny; ++h) {
      const std::size_t id = std::size_t(i) * (mesh.ny + 1) + h;
      auto it = jy.find({h, i});
      if (it != jy.end()) {
        s.cy_minus[id] = spec.y_lower_limit(mesh.x[i], it->second);
        s.cy_plus[id] = spec.y_upper_limit(mesh.x[i], it->second);
        s.interfaces_y.emplace_back(i, h);
      } else {
        s.cy_minus[id] = s.cy_plus[id] = spec.y_lower_limit(mesh.x[i], mesh.y_face(h));
      }
      if (!(s.cy_minus[id] > 0.0) || !(s.cy_plus[id] > 0.0))
        throw DomainError("wave speed must be positive");
    }
  }
  s.c_cell.resize(std::size_t(mesh.nx) * mesh.ny);
  for (int i = 0; i < mesh.nx; ++i)
    for (int j = 0; j < mesh.ny; ++j)
      s.c_cell[std::size_t(i) * mesh.ny + j] =
          0.25 * (s.cxp(i, j) + s.cxm(i + 1, j) + s.cyp(i, j) + s.cym(i, j + 1));
  return s;
}

std::vector<double> flatten_1d(const std::vector<std::vector<double>>& rows) {
  std::vector<double> f;
  for (const auto& r : rows) f.insert(f.end(), r.begin(), r.end());
  return f;
}

std::vector<std::vector<double>> unflatten_1d(const std::vector<double>& f,
                                              const PhaseMesh1D& mesh) {
  if (f.size() != mesh.size())
    throw ShapeError("field length " + std::to_string(f.size()) + " != " +
                     std::to_string(mesh.size()));
  std::vector<std::vector<double>> rows(mesh.nx);
  for (int i = 0; i < mesh.nx; ++i)
    rows[i].assign(f.begin() + mesh.index(i, 0), f.begin() + mesh.index(i, 0) + mesh.nxi);
  return rows;
}

double discrete_delta(double z, double beta) {
  if (!(beta > 0.0)) throw DomainError("delta width must be positive");
  const double r = std::abs(z / beta);
  return r <= 1.0 ? (1.0 - r) / beta : 0.0;
}

FieldSnapshot1D init_delta_field_1d(const std::function<double(double)>& w,
                                    double beta, const PhaseMesh1D& mesh) {
  FieldSnapshot1D s{mesh, 0.0, std::vector<double>(mesh.size(), 0.0)};
  for (int i = 0; i < mesh.nx; ++i) {
    const double wi = w(mesh.x[i]);
    for (int j = 0; j < mesh.nxi; ++j)
      s.f[mesh.index(i, j)] = discrete_delta(mesh.xi[j] - wi, beta);
  }
  return s;
}

FieldSnapshot1D cell_average_1d(const std::function<double(double, double)>& f,
                                const PhaseMesh1D& mesh, int sub) {
  FieldSnapshot1D s{mesh, 0.0, std::vector<double>(mesh.size(), 0.0)};
  const double w = 1.0 / (double(sub) * sub);
  for (int i = 0; i < mesh.nx; ++i)
    for (int j = 0; j < mesh.nxi; ++j) {
      double acc = 0.0;
      for (int a = 0; a < sub; ++a)
        for (int b = 0; b < sub; ++b)
          acc += f(mesh.x[i] + ((a + 0.5) / sub - 0.5) * mesh.dx,
                   mesh.xi[j] + ((b + 0.5) / sub - 0.5) * mesh.dxi);
      s.f[mesh.index(i, j)] = acc * w;
    }
  return s;
}

void write_field_csv(const std::string& path, const FieldSnapshot1D& snap) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path);
  out.precision(17);
  out << "x,xi,f\n";
  for (int i = 0; i < snap.mesh.nx; ++i)
    for (int j = 0; j < snap.mesh.nxi; ++j)
      out << snap.mesh.x[i] << ',' << snap.mesh.xi[j] << ','
          << snap.f[snap.mesh.index(i, j)] << '\n';
}

void write_field_binary(const std::string& path, const FieldSnapshot2D& snap) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw ConfigError("cannot open " + path);
  std::fwrite(snap.f.data(), sizeof(double), snap.f.size(), fp);
  std::fclose(fp);
  std::ofstream side(path + ".txt");
  const auto& m = snap.mesh;
  side.precision(17);
  side << "dtype float64\norder x,y,xi,eta (row-major, eta fastest)\n"
       << "shape " << m.nx << ' ' << m.ny << ' ' << m.nxi << ' ' << m.neta << '\n'
       << "x " << m.x_range.lo << ' ' << m.x_range.hi << '\n'
       << "y " << m.y_range.lo << ' ' << m.y_range.hi << '\n'
       << "xi " << m.xi_range.lo << ' ' << m.xi_range.hi << '\n'
       << "eta " << m.eta_range.lo << ' ' << m.eta_range.hi << '\n'
       << "t " << snap.t << '\n';
}

}  // namespace liouville
