#pragma once

#include "molt/core.hpp"

namespace molt {

enum class BcKind { dirichlet, neumann, periodic, outflow };

const char* to_string(BcKind kind) noexcept;

struct Coefficients {
  double A = 0.0;
  double B = 0.0;
};

/// Boundary data at t^{n-1}, t^n and t^{n+1}.
struct ThreeLevel {
  double nm1 = 0.0;
  double n = 0.0;
  double np1 = 0.0;
};

struct BoundaryData {
  ThreeLevel left;
  ThreeLevel right;
};

/// Value the line inverse must reach at an end for the update to hit the data.
/// Centered variants use U^n + (U^{n+1} - 2U^n + U^{n-1}) / beta^2, the diffusive one U^{n+1}.
double end_target(const ThreeLevel& data, const SchemeParams& params);

Coefficients dirichlet_coeffs(double I_a, double I_b, const BoundaryData& data, const SchemeParams& params,
                              double mu);
Coefficients neumann_coeffs(double I_a, double I_b, const BoundaryData& data, const SchemeParams& params,
                            double mu);
Coefficients periodic_coeffs(double I_a, double I_b, double mu);

struct OutflowGammas {
  double g0 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double G0 = 0.0;
  double G1 = 0.0;
  double G2 = 0.0;
};

OutflowGammas outflow_gammas(double beta);

/// Endpoint values of u at levels n and n-1.
struct EndpointHistory {
  double a_n = 0.0;
  double a_nm1 = 0.0;
  double b_n = 0.0;
  double b_nm1 = 0.0;
};

struct OutflowState {
  double A_prev = 0.0;
  double B_prev = 0.0;
  EndpointHistory hist;
  OutflowGammas gammas;
};

OutflowState make_outflow_state(double beta);

struct OutflowResult {
  Coefficients coeffs;
  OutflowState state;
};

/// Both ends outflow, one-dimensional centered update. The returned state
/// holds the new coefficients and the endpoint history shifted by one level.
OutflowResult outflow_coeffs(const OutflowState& state, double I_a, double I_b, const EndpointHistory& hist,
                             double mu, const SchemeParams& params);

/// One linear condition ca*A + cb*B = rhs on the homogeneous coefficients.
struct EndRow {
  double ca = 0.0;
  double cb = 0.0;
  double rhs = 0.0;
};

EndRow value_row_a(double I_a, double mu, double target);
EndRow value_row_b(double I_b, double mu, double target);
EndRow slope_row_a(double I_a, double mu, double alpha, double slope);
EndRow slope_row_b(double I_b, double mu, double alpha, double slope);

/// Inputs of an outflow row. The end value after the step is
/// known + scale * (line inverse at the end), and the line coefficient equals
/// kappa times the exterior history integral of u.
struct OutflowRowInput {
  double prev = 0.0;
  double known = 0.0;
  double scale = 1.0;
  double kappa = 1.0;
  double u_n = 0.0;
  double u_nm1 = 0.0;
};

EndRow outflow_row_a(double I_a, double mu, double beta, const OutflowGammas& g, const OutflowRowInput& in);
EndRow outflow_row_b(double I_b, double mu, double beta, const OutflowGammas& g, const OutflowRowInput& in);

/// Solve the two end rows. Throws DegenerateLine (or SingularOutflowSystem when
/// an outflow row is involved) if the system is singular to round-off.
Coefficients solve_rows(const EndRow& ra, const EndRow& rb, bool outflow = false);

}  // namespace molt
