#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "molt/errors.hpp"
#include "molt/stepper1d.hpp"

using namespace molt;

namespace {

constexpr double pi = std::numbers::pi;

double sine_error(std::size_t n, Variant v, double T) {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, n);
  LineClosure closure = LineClosure::both(BcKind::dirichlet);
  const SchemeParams p = make_params(1.0, 2.0 * line.h, 2.0, 0.0, v);
  const auto f = [](double x) { return std::sin(pi * x); };
  FieldHistory h = start_history(line, closure, p, f, {}, [](double x) { return -pi * pi * std::sin(pi * x); });
  LineStepper st(line, closure, p);
  while (h.t_n + 0.5 * p.dt < T) st.step(h);
  double e = 0.0;
  for (std::size_t k = 0; k < line.nodes.size(); ++k) {
    const double d = h.u_n[k] - f(line.nodes[k]) * std::cos(pi * h.t_n);
    e += d * d * line.h;
  }
  return std::sqrt(e);
}

FieldHistory constant_history(std::size_t n, double U) {
  FieldHistory h;
  h.u_n.assign(n, U);
  h.u_nm1.assign(n, U);
  h.u_nm2.assign(n, U);
  return h;
}

double max_abs(const std::vector<double>& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("constant states are preserved by every closure and variant") {
  const double U = 0.75;
  for (Variant v : {Variant::dispersive, Variant::diffusive, Variant::dissipative}) {
    const double eps = v == Variant::dissipative ? 0.1 : 0.0;
    const SchemeParams p = make_params(1.0, 0.05, 1.9, eps, v);
    for (BcKind kind : {BcKind::dirichlet, BcKind::neumann, BcKind::periodic}) {
      const SweepLine line = SweepLine::uniform(0.0, 1.0, 40, kind == BcKind::periodic);
      LineClosure closure = LineClosure::both(kind);
      if (kind == BcKind::dirichlet) {
        closure.left.data = [U](double) { return U; };
        closure.right.data = [U](double) { return U; };
      }
      LineStepper st(line, closure, p);
      FieldHistory h = constant_history(line.nodes.size(), U);
      for (int s = 0; s < 5; ++s) {
        st.step(h);
        for (double x : h.u_n) CHECK(std::abs(x - U) <= 1e-12);
      }
    }
  }
}

TEST_CASE("standing mode converges at second order") {
  std::vector<double> e;
  for (std::size_t n : {50u, 100u, 200u, 400u}) e.push_back(sine_error(n, Variant::dispersive, 0.48));
  for (std::size_t k = 0; k + 1 < e.size(); ++k) CHECK(std::log2(e[k] / e[k + 1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("diffusive standing mode converges at second order") {
  const double e1 = sine_error(100, Variant::diffusive, 0.48);
  const double e2 = sine_error(200, Variant::diffusive, 0.48);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("large steps stay bounded") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 50);
  LineClosure closure = LineClosure::both(BcKind::dirichlet);
  const SchemeParams p = make_params(1.0, 10.0 * line.h, 2.0, 0.0, Variant::dispersive);
  const auto f = [](double x) { return std::sin(pi * x); };
  FieldHistory h = start_history(line, closure, p, f, {});
  LineStepper st(line, closure, p);
  for (int s = 0; s < 10000; ++s) st.step(h);
  CHECK(max_abs(h.u_n) < 10.0);
}

TEST_CASE("diffusive scheme damps a checkerboard") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 64);
  LineClosure closure = LineClosure::both(BcKind::dirichlet);
  const SchemeParams p = make_params(1.0, 2.0 * line.h, 2.0, 0.0, Variant::diffusive);
  FieldHistory h;
  h.u_n.resize(line.nodes.size());
  for (std::size_t k = 0; k < h.u_n.size(); ++k) h.u_n[k] = (k % 2 == 0 ? 1.0 : -1.0);
  h.u_n.front() = 0.0;
  h.u_n.back() = 0.0;
  h.u_nm1 = h.u_n;
  h.u_nm2 = h.u_n;
  LineStepper st(line, closure, p);
  for (int s = 0; s < 30; ++s) {
    st.step(h);
    CHECK(max_abs(h.u_n) <= 1.0);
  }
  CHECK(max_abs(h.u_n) < 1e-2);
}

TEST_CASE("zero dissipation reproduces the dispersive step") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 30);
  LineClosure closure = LineClosure::both(BcKind::dirichlet);
  const SchemeParams pd = make_params(1.0, 0.04, 1.8, 0.0, Variant::dispersive);
  const SchemeParams pe = make_params(1.0, 0.04, 1.8, 0.0, Variant::dissipative);
  FieldHistory a;
  a.u_n.resize(line.nodes.size());
  for (std::size_t k = 0; k < a.u_n.size(); ++k) a.u_n[k] = std::sin(3.0 * line.nodes[k]) * line.nodes[k] * (1 - line.nodes[k]);
  a.u_nm1 = a.u_n;
  a.u_nm2 = a.u_n;
  FieldHistory b = a;
  LineStepper sd(line, closure, pd);
  LineStepper se(line, closure, pe);
  for (int s = 0; s < 10; ++s) {
    sd.step(a);
    se.step(b);
  }
  for (std::size_t k = 0; k < a.u_n.size(); ++k) CHECK(std::abs(a.u_n[k] - b.u_n[k]) <= 1e-14);
}

TEST_CASE("periodic shift commutes with the step") {
  const std::size_t n = 32;
  const SweepLine line = SweepLine::uniform(0.0, 1.0, n, true);
  LineClosure closure = LineClosure::both(BcKind::periodic);
  const SchemeParams p = make_params(1.0, 0.1, 2.0, 0.0, Variant::dispersive);
  FieldHistory a;
  a.u_n.resize(n + 1);
  a.u_nm1.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double x = line.nodes[k];
    a.u_n[k] = std::exp(std::sin(2 * pi * x));
    a.u_nm1[k] = std::exp(std::cos(2 * pi * x));
  }
  const std::size_t shift = 5;
  FieldHistory b = a;
  for (std::size_t k = 0; k <= n; ++k) {
    b.u_n[k] = a.u_n[(k + shift) % n];
    b.u_nm1[k] = a.u_nm1[(k + shift) % n];
  }
  LineStepper sa(line, closure, p);
  LineStepper sb(line, closure, p);
  sa.step(a);
  sb.step(b);
  for (std::size_t k = 0; k <= n; ++k) CHECK(std::abs(b.u_n[k] - a.u_n[(k + shift) % n]) <= 1e-13);
}

TEST_CASE("source field of a unit point source") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 20);
  const SchemeParams p = make_params(1.0, 0.05, 2.0, 0.0, Variant::dispersive);
  SourceSpec s;
  s.x_s = 0.5;
  s.waveform = [](double) { return 1.0; };
  const std::vector<double> f = source_field({s}, line, p, 0.0);
  CHECK(f[10] == doctest::Approx(p.c * p.dt / 4.0).epsilon(1e-14));

  SourceSpec mid = s;
  mid.x_s = 0.525;
  const std::vector<double> g = source_field({mid}, line, p, 0.0);
  for (std::size_t k = 0; k < 10; ++k) CHECK(g[10 - k] == doctest::Approx(g[11 + k]).epsilon(1e-14));

  SourceSpec soft = s;
  soft.kind = SourceKind::soft;
  soft.waveform = [](double) { return 2.0; };
  soft.derivative = [](double) { return 0.0; };
  for (double v : source_field({soft}, line, p, 0.3)) CHECK(v == 0.0);

  SourceSpec outside = s;
  outside.x_s = 1.5;
  CHECK_THROWS_AS(source_field({outside}, line, p, 0.0), Error);
}

TEST_CASE("outflow lets a pulse leave") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 200);
  LineClosure closure = LineClosure::both(BcKind::outflow);
  const SchemeParams p = make_params(1.0, 2.0 * line.h, 2.0, 0.0, Variant::dispersive);
  const auto f = [](double x) { return std::exp(-std::pow((x - 0.5) / 0.05, 2)); };
  FieldHistory h = start_history(line, closure, p, f, {});
  LineStepper st(line, closure, p);
  while (h.t_n < 1.0) st.step(h);
  CHECK(max_abs(h.u_n) < 5e-3);
}

TEST_CASE("outflow is rejected for the diffusive variant") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 20);
  const SchemeParams p = make_params(1.0, 0.1, 2.0, 0.0, Variant::diffusive);
  FieldHistory h = constant_history(line.nodes.size(), 0.0);
  LineStepper st(line, LineClosure::both(BcKind::outflow), p);
  CHECK_THROWS_AS(st.step(h), Error);
}

TEST_CASE("Taylor start is exact for a quadratic profile") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 10);
  LineClosure closure = LineClosure::both(BcKind::dirichlet);
  closure.left.data = [](double t) { return 0.5 * t * t; };
  closure.right.data = [](double t) { return 0.5 + 0.5 * t * t; };
  const SchemeParams p = make_params(1.0, 0.05, 2.0, 0.0, Variant::dispersive);
  const std::vector<double> u1 = taylor_start(line, closure, p, [](double x) { return 0.5 * x * x; }, {});
  for (std::size_t k = 0; k < u1.size(); ++k) {
    const double x = line.nodes[k];
    CHECK(u1[k] == doctest::Approx(0.5 * x * x + 0.5 * p.dt * p.dt).epsilon(1e-13));
  }
}
