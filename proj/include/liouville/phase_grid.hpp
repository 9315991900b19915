#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace liouville {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Uniform cell-centred mesh over (x, xi). Face h sits at x_min + h*dx.
struct PhaseMesh1D {
  Interval x_range;
  Interval xi_range;
  int nx = 0;
  int nxi = 0;
  double dx = 0.0;
  double dxi = 0.0;
  std::vector<double> x;   // cell centres, size nx
  std::vector<double> xi;  // cell centres, size nxi, xi[nxi-1-j] == -xi[j]

  std::size_t size() const { return std::size_t(nx) * std::size_t(nxi); }
  std::size_t index(int i, int j) const { return std::size_t(i) * nxi + j; }
  double x_face(int h) const { return x_range.lo + h * dx; }
  int mirror(int j) const { return nxi - 1 - j; }
};

struct PhaseMesh2D {
  Interval x_range, y_range, xi_range, eta_range;
  int nx = 0, ny = 0, nxi = 0, neta = 0;
  double dx = 0.0, dy = 0.0, dxi = 0.0, deta = 0.0;
  std::vector<double> x, y, xi, eta;

  std::size_t size() const {
    return std::size_t(nx) * ny * nxi * neta;
  }
  std::size_t index(int i, int j, int k, int l) const {
    return ((std::size_t(i) * ny + j) * nxi + k) * neta + l;
  }
  double x_face(int h) const { return x_range.lo + h * dx; }
  double y_face(int h) const { return y_range.lo + h * dy; }
  int mirror_xi(int k) const { return nxi - 1 - k; }
  int mirror_eta(int l) const { return neta - 1 - l; }
};

PhaseMesh1D build_mesh_1d(Interval x, Interval xi, int nx, int nxi);
PhaseMesh2D build_mesh_2d(Interval x, Interval y, Interval xi, Interval eta,
                          int nx, int ny, int nxi, int neta);

/// Whether interfaces reflect part of the energy or transmit everything.
enum class InterfaceModel { partial, transmit_only };

/// c(x) = a + b*x on the open interval (lo, hi). Use +-infinity for the ends.
struct SpeedPiece1D {
  double lo, hi;
  double a;
  double b = 0.0;
};

struct SpeedSpec1D {
  std::vector<SpeedPiece1D> pieces;  // sorted and contiguous
  InterfaceModel model = InterfaceModel::partial;

  double left_limit(double x) const;
  double right_limit(double x) const;
};

struct WaveSpeed1D {
  std::vector<double> c_minus;  // left limit at face h, size nx+1
  std::vector<double> c_plus;   // right limit at face h, size nx+1
  std::vector<double> c_cell;   // (c_plus[i] + c_minus[i+1]) / 2
  std::vector<int> interfaces;  // faces with c_minus != c_plus
  InterfaceModel model = InterfaceModel::partial;

  bool is_interface(int h) const { return c_minus[h] != c_plus[h]; }
};

/// c(x, y) = a + bx*x + by*y on the box [x_lo, x_hi) x [y_lo, y_hi).
struct SpeedBox2D {
  double x_lo, x_hi, y_lo, y_hi;
  double a;
  double bx = 0.0;
  double by = 0.0;
};

struct SpeedSpec2D {
  std::vector<SpeedBox2D> boxes;
  InterfaceModel model = InterfaceModel::partial;

  double value(double x, double y) const;
  double x_left_limit(double x, double y) const;
  double x_right_limit(double x, double y) const;
  double y_lower_limit(double x, double y) const;
  double y_upper_limit(double x, double y) const;
};

/// Two-sided limits on the faces of every cell. cx_* are indexed [h*ny + j]
/// for vertical faces h = 0..nx, cy_* are indexed [i*(ny+1) + h].
struct WaveSpeed2D {
  int nx = 0, ny = 0;
  std::vector<double> cx_minus, cx_plus;
  std::vector<double> cy_minus, cy_plus;
  std::vector<double> c_cell;  // [i*ny + j]
  std::vector<std::pair<int, int>> interfaces_x;  // (h, j)
  std::vector<std::pair<int, int>> interfaces_y;  // (i, h)
  InterfaceModel model = InterfaceModel::partial;

  double cxm(int h, int j) const { return cx_minus[std::size_t(h) * ny + j]; }
  double cxp(int h, int j) const { return cx_plus[std::size_t(h) * ny + j]; }
  double cym(int i, int h) const { return cy_minus[std::size_t(i) * (ny + 1) + h]; }
  double cyp(int i, int h) const { return cy_plus[std::size_t(i) * (ny + 1) + h]; }
  double cell(int i, int j) const { return c_cell[std::size_t(i) * ny + j]; }
};

WaveSpeed1D sample_speed_1d(const SpeedSpec1D& spec, const PhaseMesh1D& mesh);
WaveSpeed2D sample_speed_2d(const SpeedSpec2D& spec, const PhaseMesh2D& mesh);

struct FieldSnapshot1D {
  PhaseMesh1D mesh;
  double t = 0.0;
  std::vector<double> f;
};

struct FieldSnapshot2D {
  PhaseMesh2D mesh;
  double t = 0.0;
  std::vector<double> f;
};

std::vector<double> flatten_1d(const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> unflatten_1d(const std::vector<double>& f,
                                              const PhaseMesh1D& mesh);

double discrete_delta(double z, double beta);

/// f0_ij = delta_beta(xi_j - w(x_i)).
FieldSnapshot1D init_delta_field_1d(const std::function<double(double)>& w,
                                    double beta, const PhaseMesh1D& mesh);

/// Cell averages of a bounded function by sub x sub midpoint sampling.
FieldSnapshot1D cell_average_1d(const std::function<double(double, double)>& f,
                                const PhaseMesh1D& mesh, int sub = 8);

void write_field_csv(const std::string& path, const FieldSnapshot1D& snap);
/// Row-major binary doubles plus a "<path>.txt" sidecar with the shape.
void write_field_binary(const std::string& path, const FieldSnapshot2D& snap);

}  // namespace liouville
