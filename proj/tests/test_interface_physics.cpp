#include <doctest.h>

#include <cmath>
#include <random>

#include "liouville/error.hpp"
#include "liouville/interface_physics.hpp"
#include "liouville/phase_grid.hpp"

using namespace liouville;

TEST_CASE("hat function") {
  CHECK(hat(0.0, 0.1) == 1.0);
  CHECK(hat(0.1, 0.1) == 0.0);
  CHECK(hat(-0.1, 0.1) == 0.0);
  CHECK(hat(0.05, 0.1) == doctest::Approx(0.5));
  CHECK(hat(0.3, 0.1) == 0.0);
}

TEST_CASE("1D coefficients") {
  const auto a = coeffs_1d(0.6, 0.2);
  CHECK(a.reflect == doctest::Approx(0.25));
  CHECK(a.transmit == 0.75);
  const auto b = coeffs_1d(1.0, 0.6);
  CHECK(b.reflect == 0.0625);
  CHECK(b.transmit == 0.9375);
  const auto c = coeffs_1d(0.7, 0.7);
  CHECK(c.reflect == 0.0);
  CHECK(c.transmit == 1.0);
  CHECK_THROWS_AS(coeffs_1d(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(coeffs_1d(1.0, -2.0), DomainError);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int k = 0; k < 100; ++k) {
    const double p = u(rng), q = u(rng);
    const auto x = coeffs_1d(p, q), y = coeffs_1d(q, p);
    CHECK(x.reflect == y.reflect);
    CHECK(x.reflect + x.transmit == 1.0);
    CHECK(x.reflect >= 0.0);
    CHECK(x.reflect <= 1.0);
  }
}

TEST_CASE("2D coefficients") {
  const auto n = coeffs_2d(0.6, 0.2, 1.0, 1.0);
  CHECK(n.reflect == doctest::Approx(coeffs_1d(0.6, 0.2).reflect).epsilon(1e-15));
  CHECK(coeffs_2d(1.3, 1.3, 0.4, 0.4).reflect == 0.0);
  CHECK_THROWS_AS(coeffs_2d(1, 2, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(coeffs_2d(1, 2, 0.5, 1.5), DomainError);

  // slowness (1, 0.5) entering a faster medium, c from 1 to 1.2
  const double xi = 1.0, eta = 0.5;
  const auto d = transmit_test_2d(xi, eta, 1.0, 1.2);
  REQUIRE(d.branch == Branch::transmit_and_reflect);
  const double gm = xi / std::hypot(xi, eta);
  const double gp = d.transmitted / std::hypot(d.transmitted, eta);
  const auto c = coeffs_2d(1.0, 1.2, gm, gp);
  const double num = 1.2 * gm - 1.0 * gp, den = 1.2 * gm + 1.0 * gp;
  CHECK(c.reflect == doctest::Approx(num * num / (den * den)).epsilon(1e-15));
  CHECK(c.reflect + c.transmit == 1.0);
}

TEST_CASE("1D transmitted slowness preserves the Hamiltonian") {
  CHECK(transmitted_xi_1d(1.0, 0.6, 0.2) == doctest::Approx(3.0));
  CHECK(transmitted_xi_1d(0.37, 1.1, 1.1) == 0.37);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.1, 3.0), s(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng), b = u(rng), xi = s(rng);
    CHECK(std::abs(b * transmitted_xi_1d(xi, a, b) - a * xi) <= 1e-14 * std::max(1.0, a * std::abs(xi)));
  }
}

TEST_CASE("2D transmission test") {
  const auto a = transmit_test_2d(1.0, 0.0, 1.0, 2.0);
  CHECK(a.discriminant == 0.25);
  CHECK(a.branch == Branch::transmit_and_reflect);
  CHECK(a.transmitted == 0.5);
  const auto b = transmit_test_2d(1.0, 1.0, 1.0, 2.0);
  CHECK(b.discriminant == -0.5);
  CHECK(b.branch == Branch::total_reflection);
  const auto c = transmit_test_2d(-0.3, 0.7, 1.4, 1.4);
  CHECK(c.transmitted == doctest::Approx(-0.3).epsilon(1e-15));
  const auto neg = transmit_test_2d(-1.0, 0.0, 1.0, 2.0);
  CHECK(neg.transmitted == -0.5);
  CHECK_THROWS_AS(transmit_test_2d(0.0, 1.0, 1.0, 2.0), DomainError);
  // D == 0 goes to total reflection: r = 1/2, eta^2 = xi^2 / 3
  const double eta0 = std::sqrt(0.25 / 0.75);
  const auto edge = transmit_test_2d(1.0, eta0, 1.0, 2.0);
  CHECK(edge.discriminant <= 1e-15);
  for (double eta : {0.0, 0.3, 5.0}) {
    CHECK(transmit_test_2d(0.4, eta, 2.0, 1.0).branch == Branch::transmit_and_reflect);
    CHECK(transmit_test_2d(0.4, 0.0, 1.0, 2.0).branch == Branch::transmit_and_reflect);
  }
  CHECK(transmit_test_2d(0.4, 5.0, 1.0, 2.0).branch == Branch::total_reflection);
}

TEST_CASE("beta weights") {
  const auto m = build_mesh_1d({-1.5, 1.5}, {-1.6, 1.6}, 16, 16);
  // no interface: upwind identity
  for (int j = 0; j < m.nxi; ++j)
    for (int k = 0; k < m.nxi; ++k)
      CHECK(std::abs(beta_1d(0.5, 0.5, m.xi[j], m.xi[k], m.dxi) - (j == k ? 1.0 : 0.0)) <=
            1e-14);
  // Ex.1 interface: right movers read xi/3 from the left, left movers 3 xi from the right
  for (int j = 0; j < m.nxi; ++j) {
    const double target = m.xi[j] > 0 ? m.xi[j] / 3.0 : 3.0 * m.xi[j];
    int nz = 0;
    double s = 0.0;
    for (int k = 0; k < m.nxi; ++k) {
      const double b = beta_1d(0.6, 0.2, m.xi[j], m.xi[k], m.dxi);
      CHECK(b >= 0.0);
      CHECK(b <= 1.0);
      if (b > 1e-14) {
        ++nz;
        CHECK(std::abs(m.xi[k] - target) < m.dxi);
      }
      s += b;
    }
    CHECK(nz <= 2);
    if (target > m.xi.front()) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("step gates") {
  const auto c = coeffs_1d(0.6, 0.2);
  const auto t = step_gates_2d(0.3, c);
  CHECK(t.a_t == doctest::Approx(0.75));
  CHECK(t.a_r == doctest::Approx(0.25));
  const auto r = step_gates_2d(-0.3, c);
  CHECK(r.a_t == 0.0);
  CHECK(r.a_r == 1.0);
  CHECK(step_gates_2d(0.0, c).a_r == 1.0);
  for (double d : {-1.0, 0.0, 1e-300, 2.0}) {
    const auto g = step_gates_2d(d, c);
    CHECK(g.a_t + g.a_r == 1.0);
  }
}

TEST_CASE("bracketing") {
  const std::vector<double> nodes{-0.75, -0.25, 0.25, 0.75};
  auto b = bracket(0.0, nodes, 0.5);
  CHECK(b.count == 2);
  CHECK(b.weight[0] == 0.5);
  CHECK(b.weight[1] == 0.5);
  b = bracket(0.25, nodes, 0.5);
  CHECK(b.count == 1);
  CHECK(b.node[0] == 2);
  CHECK(b.weight[0] == 1.0);
  b = bracket(0.75, nodes, 0.5);
  CHECK(b.count == 1);
  CHECK(b.upper_edge);
  CHECK(bracket(0.8, nodes, 0.5).count == 0);
  CHECK(bracket(-0.8, nodes, 0.5).count == 0);
}
