#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "molt/errors.hpp"
#include "molt/fastconv.hpp"

using namespace molt;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

// Simpson integration of nu * int_0^1 s^k e^{-nu s} ds.
double moment_quadrature(double nu, int k) {
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * std::pow(s, k) * std::exp(-nu * s);
  }
  return nu * sum / (3.0 * n);
}

}  // namespace

TEST_CASE("local weights at nu = 1") {
  const LocalWeights w = local_weights(1.0);
  CHECK(w.P == doctest::Approx(0.367879441171442).epsilon(1e-13));
  CHECK(w.Q == doctest::Approx(0.264241117657115).epsilon(1e-13));
  CHECK(w.R == doctest::Approx(-0.0518191617571635).epsilon(1e-12));
}

TEST_CASE("local weights against numerical moments") {
  for (double nu : {0.01, 0.3, 0.7, 2.0, 9.0}) {
    const LocalWeights w = local_weights(nu);
    const double m0 = moment_quadrature(nu, 0);
    const double m1 = moment_quadrature(nu, 1);
    const double m2 = moment_quadrature(nu, 2);
    CHECK(w.P == doctest::Approx(m0 - m1).epsilon(1e-10));
    CHECK(w.Q == doctest::Approx(m1).epsilon(1e-10));
    CHECK(w.R == doctest::Approx(0.5 * (m2 - m1)).epsilon(1e-9));
  }
}

TEST_CASE("weight identities across nu") {
  for (double nu = 1e-3; nu <= 50.0; nu *= 1.37) {
    const LocalWeights w = local_weights(nu);
    const double d = std::exp(-nu);
    CHECK(std::abs(w.P + w.Q - (1.0 - d)) <= 1e-13);
    CHECK(std::abs(w.Q - (1.0 - d * (1.0 + nu)) / nu) <= 1e-13);
  }
}

TEST_CASE("non-positive nu is rejected") {
  CHECK_THROWS_AS(local_weights(0.0), Error);
  CHECK_THROWS_AS(local_weights(-1.0), Error);
}

TEST_CASE("constant field local integral") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 20);
  const double alpha = 7.0;
  std::vector<double> f(line.nodes.size(), 1.0);
  const LocalIntegrals j = local_integrals(f, line, alpha);
  const double nu = alpha * line.h;
  CHECK(j.J_L[0] == 0.0);
  CHECK(j.J_R.back() == 0.0);
  for (std::size_t k = 1; k < f.size(); ++k) {
    CHECK(j.J_L[k] == doctest::Approx((1.0 - std::exp(-nu)) / 2.0).epsilon(1e-14));
  }
  std::vector<double> z(f.size(), 0.0);
  const LocalIntegrals j0 = local_integrals(z, line, alpha);
  for (double v : j0.J_L) CHECK(v == 0.0);
}

TEST_CASE("quadratic fields integrate exactly on uniform cells") {
  const SweepLine line = SweepLine::uniform(-0.3, 0.9, 12);
  const double alpha = 5.0;
  const auto f = [](double x) { return 0.7 - 1.3 * x + 2.1 * x * x; };
  std::vector<double> fv(line.nodes.size());
  for (std::size_t k = 0; k < fv.size(); ++k) fv[k] = f(line.nodes[k]);
  const LocalIntegrals j = local_integrals(fv, line, alpha);
  for (std::size_t c = 1; c < fv.size(); ++c) {
    const double a = line.nodes[c - 1];
    const double b = line.nodes[c];
    // (alpha/2) int_a^b f(y) e^{-alpha (b - y)} dy by fine Simpson
    const int n = 4000;
    double s = 0.0;
    double sr = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double y = a + (b - a) * i / n;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      s += w * f(y) * std::exp(-alpha * (b - y));
      sr += w * f(y) * std::exp(-alpha * (y - a));
    }
    s *= 0.5 * alpha * (b - a) / (3.0 * n);
    sr *= 0.5 * alpha * (b - a) / (3.0 * n);
    CHECK(std::abs(j.J_L[c] - s) <= 1e-12);
    CHECK(std::abs(j.J_R[c - 1] - sr) <= 1e-12);
  }
}

TEST_CASE("constant field convolution matches the analytic form") {
  const SweepLine line = SweepLine::uniform(0.0, 2.0, 64);
  const double alpha = 11.0;
  std::vector<double> f(line.nodes.size(), 1.0);
  const ConvResult r = fast_convolve(f, line, alpha);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double x = line.nodes[k];
    const double exact = 1.0 - 0.5 * std::exp(-alpha * x) - 0.5 * std::exp(-alpha * (2.0 - x));
    CHECK(std::abs(r.I[k] - exact) <= 1e-14);
    CHECK(r.I[k] == doctest::Approx(r.I_L[k] + r.I_R[k]).epsilon(1e-15));
  }
  CHECK(r.I_L[0] == 0.0);
  CHECK(r.I_R.back() == 0.0);
  CHECK(r.mu == doctest::Approx(std::exp(-alpha * 2.0)).epsilon(1e-15));
}

TEST_CASE("fast and direct convolution agree on random fields") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {2u, 3u, 16u, 257u, 512u}) {
    const SweepLine line = SweepLine::uniform(0.0, 1.0, n);
    std::vector<double> f(line.nodes.size());
    for (double& v : f) v = u(rng);
    const double alpha = 3.0 * static_cast<double>(n);
    const ConvResult a = fast_convolve(f, line, alpha);
    const ConvResult b = direct_convolve(f, line, alpha);
    CHECK(max_diff(a.I, b.I) <= 1e-12);
  }
}

TEST_CASE("embedded end cells agree with the direct sum") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SweepLine line;
  line.h = 0.1;
  line.nodes.push_back(-0.0137);
  for (int k = 0; k <= 10; ++k) line.nodes.push_back(0.1 * k);
  line.nodes.push_back(1.0 + 0.0621);
  std::vector<double> f(line.nodes.size());
  for (double& v : f) v = u(rng);
  const ConvResult a = fast_convolve(f, line, 13.0);
  const ConvResult b = direct_convolve(f, line, 13.0);
  CHECK(max_diff(a.I, b.I) <= 1e-13);
}

TEST_CASE("two-cell line matches hand expansion") {
  const SweepLine line = SweepLine::uniform(0.0, 0.5, 1);
  const std::vector<double> f{2.0, -1.0};
  const double alpha = 3.0;
  const ConvResult r = fast_convolve(f, line, alpha);
  const double nu = alpha * 0.5;
  const auto m = kernel_moments(nu);
  const double jl = 0.5 * ((m[0] - m[1]) * f[1] + m[1] * f[0]);
  const double jr = 0.5 * ((m[0] - m[1]) * f[0] + m[1] * f[1]);
  CHECK(r.I[0] == doctest::Approx(jr).epsilon(1e-14));
  CHECK(r.I[1] == doctest::Approx(jl).epsilon(1e-14));
}

TEST_CASE("zero field gives zero") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 30);
  const std::vector<double> f(line.nodes.size(), 0.0);
  for (double v : fast_convolve(f, line, 4.0).I) CHECK(v == 0.0);
  for (double v : direct_convolve(f, line, 4.0).I) CHECK(v == 0.0);
}

TEST_CASE("a spike decays exponentially away from its node") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 40);
  std::vector<double> f(line.nodes.size(), 0.0);
  f[20] = 1.0;
  const double alpha = 9.0;
  const ConvResult r = fast_convolve(f, line, alpha);
  const double d = std::exp(-alpha * line.h);
  for (std::size_t k = 23; k + 1 < f.size(); ++k) CHECK(r.I[k + 1] == doctest::Approx(r.I[k] * d).epsilon(1e-12));
  for (std::size_t k = 2; k < 17; ++k) CHECK(r.I[k - 1] == doctest::Approx(r.I[k] * d).epsilon(1e-12));
}

TEST_CASE("periodic line preserves constants") {
  const SweepLine line = SweepLine::uniform(0.0, 1.0, 32, true);
  std::vector<double> f(line.nodes.size(), 1.0);
  const ConvResult r = fast_convolve(f, line, 20.0);
  const double mu = r.mu;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double x = line.nodes[k];
    CHECK(r.I[k] == doctest::Approx(1.0 - 0.5 * std::exp(-20.0 * x) - 0.5 * std::exp(-20.0 * (1.0 - x))).epsilon(1e-13));
  }
  CHECK(mu > 0.0);
}

TEST_CASE("degenerate lines are rejected") {
  SweepLine bad;
  bad.h = 0.1;
  bad.nodes = {0.0, 0.1, 0.1};
  CHECK_THROWS_AS(validate_line(bad), Error);
  SweepLine single;
  single.h = 0.1;
  single.nodes = {0.0};
  CHECK_THROWS_AS(validate_line(single), Error);
}
