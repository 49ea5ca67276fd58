#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "molt/bc1d.hpp"
#include "molt/errors.hpp"

using namespace molt;

namespace {

struct Solve2 {
  double A;
  double B;
};

Solve2 solve(double a11, double a12, double a21, double a22, double r1, double r2) {
  const double det = a11 * a22 - a12 * a21;
  return {(r1 * a22 - a12 * r2) / det, (a11 * r2 - a21 * r1) / det};
}

ThreeLevel steady(double u) { return {u, u, u}; }

}  // namespace

TEST_CASE("Dirichlet constant state gives A = B = U/2") {
  const SchemeParams p = make_params(1.0, 0.1, 2.0, 0.0, Variant::dispersive);
  const double mu = 0.3;
  const double U = 1.7;
  const double I = U * (1.0 - mu) / 2.0;
  const Coefficients c = dirichlet_coeffs(I, I, {steady(U), steady(U)}, p, mu);
  CHECK(c.A == doctest::Approx(U / 2.0).epsilon(1e-14));
  CHECK(c.B == doctest::Approx(U / 2.0).epsilon(1e-14));
  const Coefficients z = dirichlet_coeffs(0.0, 0.0, {steady(0.0), steady(0.0)}, p, mu);
  CHECK(z.A == 0.0);
  CHECK(z.B == 0.0);
}

TEST_CASE("Dirichlet coefficients solve the end system") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SchemeParams p = make_params(1.0, 0.1, 2.0, 0.0, Variant::dispersive);
  for (int k = 0; k < 50; ++k) {
    const double Ia = u(rng);
    const double Ib = u(rng);
    const double mu = 0.5 * (u(rng) + 1.0) * 0.99;
    const Coefficients c = dirichlet_coeffs(Ia, Ib, {steady(0.0), steady(0.0)}, p, mu);
    CHECK(c.A == doctest::Approx(-(Ia - mu * Ib) / (1.0 - mu * mu)).epsilon(1e-13));
    const Solve2 s = solve(1.0, mu, mu, 1.0, -Ia, -Ib);
    CHECK(std::abs(c.A - s.A) <= 1e-13);
    CHECK(std::abs(c.B - s.B) <= 1e-13);
  }
}

TEST_CASE("Neumann constant state and random inputs") {
  const SchemeParams p = make_params(1.0, 0.1, 2.0, 0.0, Variant::dispersive);
  const double mu = 0.4;
  const double U = -0.6;
  const double I = U * (1.0 - mu) / 2.0;
  const Coefficients c = neumann_coeffs(I, I, {steady(0.0), steady(0.0)}, p, mu);
  CHECK(c.A == doctest::Approx(U / 2.0).epsilon(1e-14));
  CHECK(c.B == doctest::Approx(U / 2.0).epsilon(1e-14));
  const Coefficients z = neumann_coeffs(0.0, 0.0, {steady(0.0), steady(0.0)}, p, mu);
  CHECK(z.A == 0.0);
  CHECK(z.B == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double Ia = u(rng);
    const double Ib = u(rng);
    const double m = 0.5 * (u(rng) + 1.0) * 0.99;
    const BoundaryData data{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
    const double va = end_target(data.left, p);
    const double vb = end_target(data.right, p);
    const Coefficients c2 = neumann_coeffs(Ia, Ib, data, p, m);
    const Solve2 s = solve(-1.0, m, -m, 1.0, va / p.alpha - Ia, vb / p.alpha + Ib);
    CHECK(std::abs(c2.A - s.A) <= 1e-13 * std::max(1.0, std::abs(s.A)));
    CHECK(std::abs(c2.B - s.B) <= 1e-13 * std::max(1.0, std::abs(s.B)));
  }
}

TEST_CASE("periodic constant state") {
  const double mu = 0.25;
  const double U = 3.0;
  const double I = U * (1.0 - mu) / 2.0;
  const Coefficients c = periodic_coeffs(I, I, mu);
  CHECK(c.A == doctest::Approx(U / 2.0).epsilon(1e-14));
  CHECK(c.B == doctest::Approx(U / 2.0).epsilon(1e-14));
  const Coefficients z = periodic_coeffs(0.0, 0.0, mu);
  CHECK(z.A == 0.0);
  CHECK(z.B == 0.0);
}

TEST_CASE("degenerate decay factor is rejected") {
  const SchemeParams p = make_params(1.0, 0.1, 2.0, 0.0, Variant::dispersive);
  CHECK_THROWS_AS(dirichlet_coeffs(0.0, 0.0, {}, p, 1.0), Error);
  CHECK_THROWS_AS(periodic_coeffs(0.0, 0.0, 1.0), Error);
}

TEST_CASE("end target for centered and diffusive variants") {
  const ThreeLevel d{1.0, 2.0, 4.0};
  const SchemeParams c = make_params(1.0, 0.1, 2.0, 0.0, Variant::dispersive);
  CHECK(end_target(d, c) == doctest::Approx(2.0 + (4.0 - 4.0 + 1.0) / 4.0));
  const SchemeParams f = make_params(1.0, 0.1, 2.0, 0.0, Variant::diffusive);
  CHECK(end_target(d, f) == 4.0);
}

TEST_CASE("outflow weights at beta = 2") {
  const OutflowGammas g = outflow_gammas(2.0);
  CHECK(g.g0 == doctest::Approx(-0.03383382080915317).epsilon(1e-13));
  CHECK(g.g1 == doctest::Approx(0.3515014624274595).epsilon(1e-13));
  CHECK(g.g2 == doctest::Approx(0.1146647167633873).epsilon(1e-13));
  CHECK(g.G0 == doctest::Approx(-0.1353352832366127).epsilon(1e-13));
  CHECK(g.G1 == doctest::Approx(g.g1 - g.g0 * 2.0).epsilon(1e-15));
  CHECK(g.G2 == doctest::Approx(g.g2 - g.g0).epsilon(1e-15));
}

TEST_CASE("outflow weights sum to the kernel mass") {
  for (double beta = 1e-3; beta <= 2.0; beta *= 1.5) {
    const OutflowGammas g = outflow_gammas(beta);
    CHECK(std::abs(g.g0 + g.g1 + g.g2 - 0.5 * (1.0 - std::exp(-beta))) <= 1e-13);
    CHECK(g.G0 == doctest::Approx(beta * beta * g.g0).epsilon(1e-14));
  }
}

TEST_CASE("outflow weight gamma0 behaves like -beta/24 for small beta") {
  CHECK(outflow_gammas(1e-3).g0 == doctest::Approx(-4.16458e-5).epsilon(1e-5));
  CHECK(outflow_gammas(1e-2).g0 == doctest::Approx(-4.14590e-4).epsilon(1e-5));
  CHECK(outflow_gammas(1e-4).g0 * 24.0 / 1e-4 == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("outflow with zero history and field gives zero coefficients") {
  const SchemeParams p = make_params(1.0, 0.1, 2.0, 0.0, Variant::dispersive);
  const OutflowState s = make_outflow_state(2.0);
  const OutflowResult r = outflow_coeffs(s, 0.0, 0.0, EndpointHistory{}, 0.2, p);
  CHECK(r.coeffs.A == 0.0);
  CHECK(r.coeffs.B == 0.0);
}

TEST_CASE("end rows reproduce the closed forms") {
  const double Ia = 0.3, Ib = -0.2, mu = 0.1;
  const Coefficients c = solve_rows(value_row_a(Ia, mu, 1.0), value_row_b(Ib, mu, 2.0));
  CHECK(Ia + c.A + mu * c.B == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Ib + mu * c.A + c.B == doctest::Approx(2.0).epsilon(1e-15));
  const double alpha = 5.0;
  const Coefficients s = solve_rows(slope_row_a(Ia, mu, alpha, 0.5), slope_row_b(Ib, mu, alpha, -0.5));
  CHECK(alpha * (Ia - s.A + mu * s.B) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(alpha * (-Ib - mu * s.A + s.B) == doctest::Approx(-0.5).epsilon(1e-14));
}
