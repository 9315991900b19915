#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "liouville/error.hpp"
#include "liouville/interface_physics.hpp"
#include "liouville/observables.hpp"

using namespace liouville;

namespace {

// Exact integrals of xi^0 and xi^1 against a function piecewise constant in
// xi, breakpoints located by bisection between coarse samples.
std::pair<double, double> exact_xi_moments(const std::function<double(double)>& g, double lo,
                                           double hi, int coarse = 20000) {
  std::vector<double> cuts{lo};
  const double h = (hi - lo) / coarse;
  // samples offset from round numbers so no breakpoint sits on one
  auto at = [&](int k) { return lo + (k + 0.37) * h; };
  for (int k = 0; k + 1 < coarse; ++k) {
    double a = at(k), b = at(k + 1);
    const double ga = g(a);
    if (ga == g(b)) continue;
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      (g(m) == ga ? a : b) = m;
    }
    cuts.push_back(0.5 * (a + b));
  }
  cuts.push_back(hi);
  double m0 = 0, m1 = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    const double v = g(0.5 * (a + b));
    m0 += v * (b - a);
    m1 += v * (b * b - a * a) / 2;
  }
  return {m0, m1};
}

double f0_test(double x, double y, double xi, double eta) {
  return std::exp(x) + 2 * y + 3 * xi + 5 * eta * eta;
}

}  // namespace

TEST_CASE("1D moments") {
  const auto m = build_mesh_1d({-1, 1}, {-1, 1}, 4, 10);
  SUBCASE("uniform field") {
    const Vec f = Vec::Ones(m.size());
    const auto r = density_1d(m, f);
    for (double v : r) CHECK(v == doctest::Approx(2.0));
    const auto u = avg_slowness_1d(m, f);
    for (double v : u.u) CHECK(std::abs(v) <= 1e-15);
  }
  SUBCASE("single cell delta") {
    Vec f = Vec::Zero(m.size());
    f[m.index(2, 7)] = 1.0 / m.dxi;
    const auto u = avg_slowness_1d(m, f);
    CHECK(u.rho[2] == doctest::Approx(1.0));
    CHECK(u.u[2] == doctest::Approx(m.xi[7]));
    CHECK(u.mask[0]);
    CHECK(std::isnan(u.u[0]));
    CHECK_FALSE(u.mask[2]);
  }
  SUBCASE("linearity") {
    const Vec f = Vec::Random(m.size()), g = Vec::Random(m.size());
    const auto a = density_1d(m, 2.0 * f - 3.0 * g);
    const auto rf = density_1d(m, f), rg = density_1d(m, g);
    for (int i = 0; i < m.nx; ++i) CHECK(a[i] == doctest::Approx(2 * rf[i] - 3 * rg[i]).epsilon(1e-13));
  }
  CHECK_THROWS_AS(density_1d(m, Vec::Zero(3)), ShapeError);
}

TEST_CASE("level set moments on a linear level set") {
  const auto m = build_mesh_1d({-1, 1}, {-1.6, 1.6}, 4, 128);
  for (int k : {1, 2, 6}) {
    const double beta = k * m.dxi;
    Vec psi(m.size()), phi = Vec::Ones(m.size());
    for (int i = 0; i < m.nx; ++i)
      for (int j = 0; j < m.nxi; ++j) psi[m.index(i, j)] = m.xi[j] - 0.3 - 0.1 * i;
    const auto r = levelset_moments(m, psi, phi, beta);
    for (int i = 0; i < m.nx; ++i) {
      CHECK(std::abs(r.rho[i] - 1.0) <= 1e-8);
      CHECK(std::abs(r.u[i] - (0.3 + 0.1 * i)) <= m.dxi);
    }
  }
}

TEST_CASE("Example 1 closed form") {
  CHECK(exact_example1_f(0.1, 1.2) == 0.75);
  CHECK(exact_example1_f(0.1, 0.9) == 1.0);  // below sqrt(1 - 0.01)
  CHECK(exact_example1_f(1.2, 0.5) == 0.0);
  CHECK(exact_example1_moments(0.5).rho == doctest::Approx(std::sqrt(0.51)));
  CHECK(exact_example1_moments(1.0).rho == 0.0);
  CHECK_THROWS_AS(exact_example1_f(0.1, 0.9, 0.5), UnsupportedError);
  CHECK_THROWS_AS(exact_example1_moments(0.1, 2.0), UnsupportedError);

  // closed-form moments are the xi integrals of the closed-form f
  double worst_rho = 0, worst_m1 = 0;
  for (int k = 0; k < 400; ++k) {
    const double x = -0.8 + (k + 0.5) * 1.6 / 400;
    const auto [m0, m1] = exact_xi_moments([x](double v) { return exact_example1_f(x, v); },
                                           -1.6, 1.6);
    const auto e = exact_example1_moments(x);
    worst_rho = std::max(worst_rho, std::abs(m0 - e.rho));
    worst_m1 = std::max(worst_m1, std::abs(m1 - e.rho * e.u));
  }
  MESSAGE("Fubini gaps " << worst_rho << " " << worst_m1);
  CHECK(worst_rho <= 1e-6);
  CHECK(worst_m1 <= 1e-6);
}

TEST_CASE("Example 2 closed form") {
  CHECK(exact_example2_moments(-1.5).rho == 1.0);
  CHECK(exact_example2_moments(-1.0).rho == doctest::Approx(17.0 / 16));
  CHECK(exact_example2_moments(0.0).rho == doctest::Approx(3.125));
  CHECK(exact_example2_moments(1.7).rho == 0.0);
  CHECK(exact_example2_moments(-1.5).u == doctest::Approx(0.5));
  CHECK(exact_example2_moments(1.5).u == doctest::Approx(-0.5));
  CHECK_THROWS_AS(exact_example2_moments(0.0, 0.5), UnsupportedError);
}

TEST_CASE("2D density of a Gaussian") {
  const auto m = build_mesh_2d({-2, 2}, {-2, 2}, {-2, 2}, {-2, 2}, 16, 16, 16, 16);
  const double s = 0.3;
  Vec f(m.size());
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.ny; ++j)
      for (int k = 0; k < m.nxi; ++k)
        for (int l = 0; l < m.neta; ++l)
          f[m.index(i, j, k, l)] =
              std::exp(-(m.x[i] * m.x[i] + m.y[j] * m.y[j] + m.xi[k] * m.xi[k] +
                         m.eta[l] * m.eta[l]) / (s * s));
  const auto rho = density_2d(m, f);
  double mass = 0;
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.ny; ++j) {
      const double want =
          std::numbers::pi * s * s * std::exp(-(m.x[i] * m.x[i] + m.y[j] * m.y[j]) / (s * s));
      CHECK(std::abs(rho[i * m.ny + j] - want) <= 1e-4);
      mass += rho[i * m.ny + j] * m.dx * m.dy;
    }
  CHECK(mass == doctest::Approx(std::pow(std::numbers::pi * s * s, 2)).epsilon(1e-5));
}

TEST_CASE("two layer ray oracle") {
  SUBCASE("no interface") {
    const TwoLayer same{0.0, 1.0, 1.0};
    CHECK(ray_oracle_2d(0.3, -0.02, 0.6, 0.8, 0.1, same, f0_test) ==
          doctest::Approx(f0_test(0.24, -0.1, 0.6, 0.8)));
    // a crossing ray in a uniform medium is still pure transport
    CHECK(ray_oracle_2d(0.3, 0.02, 0.6, 0.8, 0.1, same, f0_test) ==
          doctest::Approx(f0_test(0.24, -0.06, 0.6, 0.8)));
  }
  SUBCASE("normal incidence") {
    const TwoLayer layers{0.0, 1.0, 2.0};
    const double ar = coeffs_1d(1.0, 2.0).reflect;
    CHECK(ar == doctest::Approx(1.0 / 9));
    const double want =
        (1 - ar) * f0_test(0.3, -0.075, 0.0, 1.0) + ar * f0_test(0.3, 0.15, 0.0, -0.5);
    CHECK(ray_oracle_2d(0.3, 0.05, 0.0, 0.5, 0.1, layers, f0_test) == doctest::Approx(want));
  }
  SUBCASE("total reflection") {
    const TwoLayer layers{0.0, 1.0, 2.0};
    REQUIRE(transmit_test_2d(-1.0, 1.0, 1.0, 2.0).branch == Branch::total_reflection);
    const double tau = 0.02 * std::sqrt(2.0), rest = 0.1 - tau, d = rest / std::sqrt(2.0);
    const double want = f0_test(0.28 - d, -d, 1.0, 1.0);
    CHECK(ray_oracle_2d(0.3, -0.02, 1.0, -1.0, 0.1, layers, f0_test) == doctest::Approx(want));
  }
}

TEST_CASE("moment CSV") {
  const auto dir = std::filesystem::temp_directory_path() / "liouville_obs_test";
  std::filesystem::create_directories(dir);
  MomentProfile p;
  p.x = {0.0, 1.0};
  p.rho = {1.0, 0.0};
  p.u = {0.5, std::nan("")};
  p.mask = {false, true};
  const auto path = (dir / "m.csv").string();
  write_moments_csv(path, p);
  std::ifstream in(path);
  std::string a, b, c;
  std::getline(in, a);
  std::getline(in, b);
  std::getline(in, c);
  CHECK(a == "x,rho,u");
  CHECK(b == "0,1,0.5");
  CHECK(c == "1,0,");
}
