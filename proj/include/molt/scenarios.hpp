#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "molt/analysis.hpp"
#include "molt/config.hpp"
#include "molt/stepper1d.hpp"
#include "molt/stepper2d.hpp"

namespace molt {

using ExactFn = std::function<double(double, double, double)>;

struct Problem2D {
  std::string name;
  DomainSpec domain;
  std::size_t nx = 0;
  std::size_t ny = 0;
  double c = 1.0;
  Stepper2DOptions options;
  Field2Fn initial;
  Field2Fn velocity;
  Field2Fn laplacian;
  ExactFn exact;  ///< empty when no closed form exists
};

Problem2D double_circle_problem(std::size_t n, double radius = 0.3, double gamma = 0.2);
Problem2D bessel_problem(std::size_t n, bool neumann, double radius = 1.5707963267948966);
/// Second quadrant with Neumann axes; n cells per direction.
Problem2D quarter_circle_problem(std::size_t n, double radius = 1.5707963267948966);
/// Full Dirichlet drum on [-R, R]^2 with 2n cells, node-aligned with the quarter problem.
Problem2D full_circle_problem(std::size_t n, double radius = 1.5707963267948966);
Problem2D slit_grating_problem(std::size_t n, double aperture = 0.1, double period = 1.0, double ly = 1.0,
                               double c = 1.0);
Problem2D point_sources_problem(std::size_t n, double c = 1.0);
Problem2D rectangle_problem(std::size_t nx, std::size_t ny, std::array<EdgeBc, 4> edges);

struct SchemeChoice {
  double cfl = 2.0;
  double beta = 2.0;
  double epsilon = 0.0;
  Variant variant = Variant::dispersive;
  double tol = 1e-15;
  std::size_t max_iter = 200;
  bool averaging = false;
  bool correction = true;
};

SchemeChoice scheme_from_config(const RunConfig& cfg);
/// Time step from the CFL number against the finer spacing.
SchemeParams scheme_params(const SchemeChoice& s, double c, double h);

/// Blow-up guard: throws BlowUp if any value is non-finite or exceeds 1e10 in magnitude.
void check_bounded(const std::vector<double>& u);

class Run2D {
 public:
  Run2D(Problem2D problem, const SchemeChoice& scheme);

  const Problem2D& problem() const { return problem_; }
  const EmbeddedMesh& mesh() const { return *mesh_; }
  Stepper2D& stepper() { return *stepper_; }
  const FieldHistory& history() const { return hist_; }
  const Field& initial_field() const { return u0_; }
  double t() const { return hist_.t_n; }
  double dt() const { return params_.dt; }
  std::size_t steps() const { return steps_; }
  std::size_t max_iterations() const { return max_iter_; }
  double max_ratio() const { return max_ratio_; }

  void step();
  /// Steps while the next level is not past t (within half a step).
  void advance_to(double t);
  /// Field at the current level, or the initial field for t = 0.
  const Field& field_near(double t) const;
  double error(Norm norm) const;

 private:
  Problem2D problem_;
  std::unique_ptr<EmbeddedMesh> mesh_;
  SchemeParams params_;
  std::unique_ptr<Stepper2D> stepper_;
  FieldHistory hist_;
  Field u0_;
  std::size_t steps_ = 1;
  std::size_t max_iter_ = 0;
  double max_ratio_ = 0.0;
};

struct Problem1D {
  std::string name;
  SweepLine line;
  LineClosure closure;
  double c = 1.0;
  SpaceFn initial;
  SpaceFn velocity;
  SpaceFn second_derivative;
  std::function<double(double, double)> exact;
  std::vector<SourceSpec> sources;
};

Problem1D sine_problem(std::size_t n, double c = 1.0);
/// Gaussian pulse of width 0.05 centred at 0.5 on [a, b] with the given closure.
Problem1D pulse_problem(double a, double b, std::size_t n, BcKind kind, double c = 1.0);

class Run1D {
 public:
  Run1D(Problem1D problem, const SchemeChoice& scheme);

  const Problem1D& problem() const { return problem_; }
  const FieldHistory& history() const { return hist_; }
  double t() const { return hist_.t_n; }
  double dt() const { return params_.dt; }
  std::size_t steps() const { return steps_; }
  void step();
  void advance_to(double t);
  double error(Norm norm) const;

 private:
  Problem1D problem_;
  SchemeParams params_;
  std::unique_ptr<LineStepper> stepper_;
  FieldHistory hist_;
  std::size_t steps_ = 1;
};

struct RunReport {
  std::size_t steps = 0;
  double t = 0.0;
  double wall_seconds = 0.0;
  std::size_t max_iterations = 0;
  double max_abs = 0.0;
  double l2_norm = 0.0;
  double error_l2 = -1.0;
  double error_linf = -1.0;
  std::vector<std::string> files;

  std::string summary() const;
};

/// Executes the configured scenario and writes snapshots to cfg.output_dir.
RunReport run_scenario(const RunConfig& cfg, std::ostream* log = nullptr);

/// Nested refinement study over `levels` grids (each twice as fine as the last).
/// Scenarios with a closed form are measured against it; the others against a
/// self-computed reference one level finer than the finest grid.
RefinementReport run_convergence(const RunConfig& cfg, std::size_t levels, std::ostream* log = nullptr);

/// Error window of the double-circle study: the maximum over levels with t in [t0, t1].
struct ErrorWindow {
  double t0 = 0.0;
  double t1 = 0.0;
};

/// Self-convergence of a 2D problem family against a reference one level finer.
RefinementReport self_convergence_2d(const std::function<Problem2D(std::size_t)>& make, std::size_t n0,
                                     std::size_t levels, const SchemeChoice& scheme, ErrorWindow window,
                                     std::ostream* log = nullptr);

}  // namespace molt
