#include "molt/bc1d.hpp"

#include <algorithm>
#include <cmath>

#include "molt/errors.hpp"
#include "molt/fastconv.hpp"

namespace molt {

const char* to_string(BcKind kind) noexcept {
  switch (kind) {
    case BcKind::dirichlet: return "dirichlet";
    case BcKind::neumann: return "neumann";
    case BcKind::periodic: return "periodic";
    case BcKind::outflow: return "outflow";
  }
  return "unknown";
}

double end_target(const ThreeLevel& data, const SchemeParams& params) {
  if (params.variant == Variant::diffusive) return data.np1;
  return data.n + (data.np1 - 2.0 * data.n + data.nm1) / (params.beta * params.beta);
}

namespace {

void check_mu(double mu, double power) {
  if (!(mu >= 0.0) || 1.0 - std::pow(mu, power) < 1e-14) {
    throw Error(ErrorCode::DegenerateLine, "1 - mu underflows; line too short");
  }
}

}  // namespace

Coefficients dirichlet_coeffs(double I_a, double I_b, const BoundaryData& data, const SchemeParams& params,
                              double mu) {
  check_mu(mu, 2.0);
  const double wa = I_a - end_target(data.left, params);
  const double wb = I_b - end_target(data.right, params);
  const double den = 1.0 - mu * mu;
  return {-(wa - mu * wb) / den, -(wb - mu * wa) / den};
}

Coefficients neumann_coeffs(double I_a, double I_b, const BoundaryData& data, const SchemeParams& params,
                            double mu) {
  check_mu(mu, 2.0);
  const double wa = I_a - end_target(data.left, params) / params.alpha;
  const double wb = I_b + end_target(data.right, params) / params.alpha;
  const double den = 1.0 - mu * mu;
  return {(wa + mu * wb) / den, (wb + mu * wa) / den};
}

Coefficients periodic_coeffs(double I_a, double I_b, double mu) {
  check_mu(mu, 1.0);
  return {I_b / (1.0 - mu), I_a / (1.0 - mu)};
}

OutflowGammas outflow_gammas(double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::BetaOutOfRange, "outflow needs beta > 0");
  const auto m = kernel_moments(beta);
  OutflowGammas g;
  g.g0 = 0.25 * (m[2] - m[1]);
  g.g1 = 0.5 * (m[0] - m[2]);
  g.g2 = 0.25 * (m[1] + m[2]);
  g.G0 = beta * beta * g.g0;
  g.G1 = g.g1 - g.g0 * (beta * beta - 2.0);
  g.G2 = g.g2 - g.g0;
  return g;
}

OutflowState make_outflow_state(double beta) {
  OutflowState s;
  s.gammas = outflow_gammas(beta);
  return s;
}

OutflowResult outflow_coeffs(const OutflowState& state, double I_a, double I_b, const EndpointHistory& hist,
                             double mu, const SchemeParams& params) {
  const OutflowGammas& g = state.gammas;
  const double eb = std::exp(-params.beta);
  const double wa = eb * state.A_prev + g.G0 * I_a + g.G1 * hist.a_n + g.G2 * hist.a_nm1;
  const double wb = eb * state.B_prev + g.G0 * I_b + g.G1 * hist.b_n + g.G2 * hist.b_nm1;
  const double p = 1.0 - g.G0;
  const double q = mu * g.G0;
  const double den = p * p - q * q;
  if (std::abs(den) < 1e-14 * std::max(1.0, p * p)) {
    throw Error(ErrorCode::SingularOutflowSystem, "outflow system is singular");
  }
  OutflowResult res;
  res.coeffs.A = (p * wa + q * wb) / den;
  res.coeffs.B = (p * wb + q * wa) / den;
  const double b2 = params.beta * params.beta;
  const double ua = 2.0 * hist.a_n - hist.a_nm1 + b2 * (-hist.a_n + I_a + res.coeffs.A + mu * res.coeffs.B);
  const double ub = 2.0 * hist.b_n - hist.b_nm1 + b2 * (-hist.b_n + I_b + mu * res.coeffs.A + res.coeffs.B);
  res.state = state;
  res.state.A_prev = res.coeffs.A;
  res.state.B_prev = res.coeffs.B;
  res.state.hist = {ua, hist.a_n, ub, hist.b_n};
  return res;
}

EndRow value_row_a(double I_a, double mu, double target) { return {1.0, mu, target - I_a}; }
EndRow value_row_b(double I_b, double mu, double target) { return {mu, 1.0, target - I_b}; }
EndRow slope_row_a(double I_a, double mu, double alpha, double slope) { return {-1.0, mu, slope / alpha - I_a}; }
EndRow slope_row_b(double I_b, double mu, double alpha, double slope) { return {-mu, 1.0, slope / alpha + I_b}; }

EndRow outflow_row_a(double I_a, double mu, double beta, const OutflowGammas& g, const OutflowRowInput& in) {
  const double ks = in.kappa * in.scale * g.g0;
  return {1.0 - ks, -ks * mu,
          std::exp(-beta) * in.prev +
              in.kappa * (g.g0 * in.known + in.scale * g.g0 * I_a + g.g1 * in.u_n + g.g2 * in.u_nm1)};
}

EndRow outflow_row_b(double I_b, double mu, double beta, const OutflowGammas& g, const OutflowRowInput& in) {
  const double ks = in.kappa * in.scale * g.g0;
  return {-ks * mu, 1.0 - ks,
          std::exp(-beta) * in.prev +
              in.kappa * (g.g0 * in.known + in.scale * g.g0 * I_b + g.g1 * in.u_n + g.g2 * in.u_nm1)};
}

Coefficients solve_rows(const EndRow& ra, const EndRow& rb, bool outflow) {
  const double det = ra.ca * rb.cb - ra.cb * rb.ca;
  const double scale = std::max({std::abs(ra.ca * rb.cb), std::abs(ra.cb * rb.ca), 1e-300});
  if (!(std::abs(det) > 1e-14 * scale)) {
    throw Error(outflow ? ErrorCode::SingularOutflowSystem : ErrorCode::DegenerateLine,
                "end conditions are singular");
  }
  return {(ra.rhs * rb.cb - ra.cb * rb.rhs) / det, (ra.ca * rb.rhs - ra.rhs * rb.ca) / det};
}

}  // namespace molt
