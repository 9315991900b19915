#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "liouville/assembly1d.hpp"
#include "liouville/error.hpp"
#include "liouville/presets.hpp"
#include "reference_upwind.hpp"

using namespace liouville;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::vector<double> random_vec(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double max_diff(const SpMat& a, const SpMat& b) {
  SpMat d = a - b;
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

// worst |A f + b - direct RHS| over random fields and inflows
double oracle_gap(const PhaseMesh1D& m, const WaveSpeed1D& s, int trials, bool with_inflow) {
  std::mt19937 rng(11);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Inflow1D in;
    if (with_inflow) {
      in.left = random_vec(rng, m.nxi);
      in.right = random_vec(rng, m.nxi);
      in.low = random_vec(rng, m.nx);
      in.high = random_vec(rng, m.nx);
    }
    const auto sys = assemble_system_1d(m, s, in);
    const auto fv = random_vec(rng, int(m.size()));
    const Vec f = Eigen::Map<const Vec>(fv.data(), fv.size());
    const Vec lhs = sys.A * f + sys.b;
    const Vec rhs = direct_rhs_1d(m, s, in, f);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("continuous speed reduces to plain upwind") {
  const auto m = build_mesh_1d({-1.5, 1.5}, {-1, 1}, 16, 16);
  const auto c = sample_speed_1d({{{-inf, inf, 0.8}}}, m);
  CHECK(max_diff(assemble_system_1d(m, c).A, reference_upwind_1d(m, c)) == 0.0);
  SpeedSpec1D lin{{{-inf, -1, 0.5}, {-1, 0, 1.5, 1.0}, {0, 1, 1.5, -1.0}, {1, inf, 0.5}}};
  const auto l = sample_speed_1d(lin, m);
  CHECK(max_diff(assemble_system_1d(m, l).A, reference_upwind_1d(m, l)) == 0.0);
}

TEST_CASE("matrix reproduces the direct flux algorithm") {
  SUBCASE("Ex.1") {
    const auto m = build_mesh_1d({-1.5, 1.5}, {-1.6, 1.6}, 16, 16);
    const auto s = sample_speed_1d({{{-inf, 0.0, 0.6}, {0.0, inf, 0.2}}}, m);
    CHECK(oracle_gap(m, s, 50, true) <= 1e-12);
  }
  SUBCASE("two jumps, both orientations") {
    const auto m = build_mesh_1d({-1, 1}, {-1, 1}, 16, 16);
    SpeedSpec1D spec{{{-inf, -0.5, 1.0}, {-0.5, 0.25, 0.35}, {0.25, inf, 0.9}}};
    CHECK(oracle_gap(m, sample_speed_1d(spec, m), 50, true) <= 1e-12);
  }
  SUBCASE("transmission only with slopes") {
    const auto m = build_mesh_1d({-1.5, 1.5}, {-1, 1}, 16, 16);
    CHECK(oracle_gap(m, sample_speed_1d(example3_speed(), m), 50, true) <= 1e-12);
  }
}

TEST_CASE("Ex.1 sparsity audit") {
  const auto m = build_mesh_1d({-1.5, 1.5}, {-1.6, 1.6}, 128, 128);
  const auto s = sample_speed_1d({{{-inf, 0.0, 0.6}, {0.0, inf, 0.2}}}, m);
  const auto sys = assemble_system_1d(m, s);
  CHECK(sys.q_bound == 8);
  CHECK(sys.audit_A1.max_row_nnz <= 4);
  CHECK(sys.audit_A1.max_col_nnz <= sys.q_bound);
  CHECK(sys.audit_A2.max_row_nnz == 0);  // grid-aligned constant pieces
  CHECK(sys.b.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("serial and parallel assembly agree") {
  const auto m = build_mesh_1d({-1.5, 1.5}, {-1, 1}, 32, 32);
  const auto s = sample_speed_1d(example3_speed(), m);
  const auto a = assemble_transport_1d(m, s, {}, Exec::serial);
  const auto b = assemble_transport_1d(m, s, {}, Exec::parallel);
  CHECK(max_diff(a.A1, b.A1) == 0.0);
}

TEST_CASE("cell mass is conserved away from interfaces and boundaries") {
  const auto m = build_mesh_1d({-1.5, 1.5}, {-1.6, 1.6}, 32, 32);
  const auto s = sample_speed_1d({{{-inf, 0.0, 0.6}, {0.0, inf, 0.2}}}, m);
  const auto sys = assemble_system_1d(m, s);
  const Vec colsum = Vec::Ones(m.size()).transpose() * sys.A;
  for (int i = 2; i < m.nx - 2; ++i) {
    if (std::abs(m.x[i]) < 2 * m.dx) continue;
    for (int j = 0; j < m.nxi; ++j) CHECK(std::abs(colsum[m.index(i, j)]) <= 1e-12);
  }
}

TEST_CASE("inflow errors") {
  const auto m = build_mesh_1d({-1, 1}, {-1, 1}, 8, 8);
  const auto s = sample_speed_1d({{{-inf, inf, 1.0}}}, m);
  Inflow1D td;
  td.time_dependent = true;
  CHECK_THROWS_AS(assemble_system_1d(m, s, td), UnsupportedError);
  Inflow1D bad;
  bad.left = {1.0, 2.0};
  CHECK_THROWS_AS(assemble_system_1d(m, s, bad), ShapeError);
}

TEST_CASE("advection across an interface") {
  const int n = 6;
  const double a = 1.0, dx = a / n;
  SUBCASE("positive speeds") {
    const double cm = 1.0, cp = 0.5, rho = cm / cp;
    const auto s = assemble_advection_interface(n, a, cm, cp, rho, 2.0, 3.0);
    const Eigen::MatrixXd A(s.A);
    const int z = n - 1;  // row of u_0
    CHECK(A(z, z) == doctest::Approx(-cm / dx));
    CHECK(A(z, z - 1) == doctest::Approx(cm / dx));
    CHECK(A(z, z + 1) == 0.0);
    CHECK(A(z + 1, z + 1) == doctest::Approx(-cp / dx));
    CHECK(A(z + 1, z) == doctest::Approx(cm / dx));  // rho c+ u_0
    CHECK(A(z + 2, z + 1) == doctest::Approx(cp / dx));
    CHECK(s.b[0] == doctest::Approx(cm * 2.0 / dx));
    CHECK(s.b[2 * n - 1] == 0.0);
    // c u is conserved in the interior
    const Eigen::RowVectorXd col = Eigen::RowVectorXd::Ones(2 * n) * A;
    for (int k = 0; k < 2 * n - 1; ++k) CHECK(std::abs(col[k]) <= 1e-12);
  }
  SUBCASE("negative speeds") {
    const double cm = -0.5, cp = -1.0, rho = cm / cp;
    const auto s = assemble_advection_interface(n, a, cm, cp, rho, 2.0, 3.0);
    const Eigen::MatrixXd A(s.A);
    const int z = n - 1;
    CHECK(A(z, z) == doctest::Approx(-0.5 / dx));
    CHECK(A(z, z + 1) == doctest::Approx(1.0 / dx));  // (c-/(rho c+)) |c+|
    CHECK(A(z + 1, z) == 0.0);
    CHECK(s.b[0] == 0.0);
    CHECK(s.b[2 * n - 1] == doctest::Approx(1.0 * 3.0 / dx));
  }
  CHECK_THROWS_AS(assemble_advection_interface(n, a, 1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(assemble_advection_interface(1, a, 1.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(assemble_advection_interface(n, a, 1.0, 1.0, 0.0), DomainError);
}
