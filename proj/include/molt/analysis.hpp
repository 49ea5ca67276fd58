#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "molt/core.hpp"
#include "molt/geometry.hpp"
#include "molt/stepper2d.hpp"

namespace molt {

enum class Norm { L2, Linf };

/// Error over interior nodes; L2 is weighted by dx dy.
double grid_error(const Field& numeric, const Field& reference, const EmbeddedMesh& mesh, Norm norm);
double grid_error(const Field& numeric, const Field2Fn& reference, const EmbeddedMesh& mesh, Norm norm);
/// One-dimensional variant with cell width h; every entry counts.
double grid_error_1d(const std::vector<double>& numeric, const std::vector<double>& reference, double h, Norm norm);

/// Values of a fine field at the nodes of a nested coarse mesh (integer refinement factor).
Field restrict_to(const Field& fine, const EmbeddedMesh& fine_mesh, const EmbeddedMesh& coarse_mesh);

/// order_i = log(e_i / e_{i+1}) / log(ratio).
std::vector<double> convergence_order(const std::vector<double>& errors, double ratio = 2.0);

double bessel_j0(double x);
double bessel_j1(double x);
/// k-th positive zero of J0 (k >= 1).
double bessel_j0_zero(int k);
/// k-th positive zero of J0' = -J1 (k >= 1).
double bessel_j0_prime_zero(int k);

struct ReferenceParams {
  double radius = 1.5707963267948966;
  double c = 1.0;
  double k = 3.141592653589793;
};

/// Closed forms: bessel_dirichlet, bessel_neumann, plane_wave, sine_1d.
double reference_solution(const std::string& name, Point p, double t, const ReferenceParams& rp = {});

/// |rho|^2 from the projections of a single mode onto cos and sin, by a least
/// squares fit of a_{n+1} = p a_n - q a_{n-1}.
double damping_from_projections(const std::vector<double>& proj_cos, const std::vector<double>& proj_sin);

struct DampingRun {
  std::size_t cells = 64;
  std::size_t mode = 1;  ///< wavenumber k = 2 pi mode / length
  double length = 1.0;
  SchemeParams params;
  std::size_t steps = 40;
};

/// Runs a periodic line seeded with cos(kx) and returns the per-step energy factor.
double measure_damping(const DampingRun& run);
/// 1 - (k^2 / (k^2 + alpha^2))^2 epsilon.
double predicted_damping(double k, double alpha, double epsilon);

struct RefinementLevel {
  double dx = 0.0;
  double dy = 0.0;
  double dt = 0.0;
};

struct RefinementReport {
  std::vector<RefinementLevel> levels;
  std::vector<double> l2;
  std::vector<double> linf;
  std::vector<double> l2_orders;
  std::vector<double> linf_orders;

  std::string to_text() const;
  std::string to_csv() const;
};

RefinementReport make_report(std::vector<RefinementLevel> levels, std::vector<double> l2, std::vector<double> linf);

}  // namespace molt
