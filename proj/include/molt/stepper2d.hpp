#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "molt/bc1d.hpp"
#include "molt/core.hpp"
#include "molt/fastconv.hpp"
#include "molt/geometry.hpp"
#include "molt/stepper1d.hpp"

namespace molt {

using Field = std::vector<double>;
using SpaceTimeFn = std::function<double(double, double, double)>;
using PointFn = std::function<double(Point)>;

struct PointSource2D {
  Point at;
  SourceSpec signal;  ///< x_s is unused
};

/// Source uniform in x concentrated on the row y = const.
struct LineSource2D {
  double y = 0.0;
  SourceSpec signal;
};

enum class InitialGuess { quadratic, linear, previous };

struct Stepper2DOptions {
  bool correction = true;
  bool averaging = false;
  double tol = 1e-15;
  std::size_t max_iter = 200;
  double ds_I = 0.0;  ///< ghost interpolation spacing, <= 0 for sqrt(2) dx
  InitialGuess guess = InitialGuess::quadratic;
  SpaceTimeFn dirichlet;  ///< boundary data g(x, y, t); empty means zero
  std::vector<PointSource2D> point_sources;
  std::vector<LineSource2D> line_sources;
};

/// Ghost iteration record of the last step.
struct IterationStats {
  std::size_t x_iterations = 0;
  std::size_t y_iterations = 0;
  double max_ratio = 0.0;  ///< largest ratio of successive max-norm changes
  std::vector<double> x_changes;
  std::vector<double> y_changes;
};

/// Intermediate fields of the last centered step.
struct SweepState {
  Field w1;
  Field w2;
};

/// Per-line outflow coefficients carried between steps.
struct LineOutflow {
  double A_prev = 0.0;
  double B_prev = 0.0;
};

/// Dimensionally split stepper on an embedded mesh.
///
/// Fields are full-grid arrays indexed like the mesh nodes. Interior nodes are
/// unknowns, boundary (Dirichlet data) nodes carry the data, ghost nodes carry
/// interpolated values when the curved boundary is Neumann.
class Stepper2D {
 public:
  Stepper2D(const EmbeddedMesh& mesh, SchemeParams params, Stepper2DOptions options = {});

  const EmbeddedMesh& mesh() const { return *mesh_; }
  const SchemeParams& params() const { return params_; }
  const Stepper2DOptions& options() const { return options_; }
  const std::vector<GhostStencil>& stencils() const { return stencils_; }
  const IterationStats& last_stats() const { return stats_; }
  const SweepState& last_sweeps() const { return sweeps_; }
  /// Axis swept first (0 = x); the other axis carries outflow ends.
  int first_axis() const { return first_axis_; }

  /// Dispatches on the mesh and the scheme variant.
  void step(FieldHistory& hist);
  void step_centered(FieldHistory& hist);
  void step_diffusive(FieldHistory& hist);
  void step_neumann_embedded(FieldHistory& hist);

  double boundary_value(Point p, double t) const;
  /// g^{n+1} - 2 g^n + g^{n-1} + beta^2 g^n at a boundary point.
  double boundary_bracket(Point p, double t_n) const;

  /// Line inverse along one axis with closures that reproduce the input:
  /// value ends keep the input's end value, Neumann and outflow ends get zero slope.
  /// Embedded end values come from end_values (zero when empty).
  Field inverse_self(int axis, const Field& f, const PointFn& end_values = {}) const;
  Field apply_d(int axis, const Field& f, const PointFn& end_values = {}) const;
  /// u - L_x^{-1} L_y^{-1} u.
  Field d_xy(const Field& f, const PointFn& end_values = {}) const;
  /// L_x^{-1} D_y + L_y^{-1} D_x.
  Field operator_C(const Field& f, const PointFn& end_values = {}) const;

  /// Inverse of L_x L_y with zero normal derivative on the embedded boundary.
  Field neumann_inverse(const Field& f, const Field& guess, IterationStats* stats = nullptr) const;
  /// Write stencil values into the ghost entries of f.
  void fill_ghosts(Field& f) const;

  /// Sweep of rhs along one axis with value ends hitting targets(p).
  Field sweep_target(int axis, const Field& rhs, const PointFn& rhs_end, const PointFn& targets) const;

 private:
  struct Outflow {
    const Field* known = nullptr;
    const Field* u_n = nullptr;
    const Field* u_nm1 = nullptr;
    std::vector<LineOutflow>* states = nullptr;
  };
  using LineAdd = std::function<void(const MeshLine&, std::vector<double>&)>;

  void sweep(int axis, const Field& f, const PointFn& rhs_end, const PointFn* targets, Field& out,
             const LineAdd& add_I = {}, const Outflow* outflow = nullptr) const;
  Field centered_update(const FieldHistory& hist, int first, std::vector<LineOutflow>* states, bool record);
  void add_sources(int axis, double t, double scale, const MeshLine& line, std::vector<double>& I) const;
  void set_data_nodes(Field& f, double t) const;
  void zero_data_nodes(Field& f) const;

  const EmbeddedMesh* mesh_;
  SchemeParams params_;
  Stepper2DOptions options_;
  std::vector<ConvolutionPlan> x_plans_;
  std::vector<ConvolutionPlan> y_plans_;
  std::vector<GhostStencil> stencils_;
  std::vector<std::size_t> stencil_nodes_;
  std::vector<LineOutflow> outflow_;
  OutflowGammas gammas_;
  int first_axis_ = 0;
  IterationStats stats_;
  SweepState sweeps_;
};

Field sweep_x(const Stepper2D& stepper, const Field& rhs, const PointFn& rhs_end, const PointFn& targets);
Field sweep_y(const Stepper2D& stepper, const Field& rhs, const PointFn& rhs_end, const PointFn& targets);
void step_dirichlet_2d(Stepper2D& stepper, FieldHistory& hist);
Field operator_C(const Stepper2D& stepper, const Field& u);
void step_dissipative_2d(Stepper2D& stepper, FieldHistory& hist);
void step_neumann_embedded(Stepper2D& stepper, FieldHistory& hist);

/// Second-order Laplacian at interior nodes along the mesh lines, using
/// boundary values, ghost values or edge closures at line ends.
Field line_laplacian(const Stepper2D& stepper, const Field& u, double t);

using Field2Fn = std::function<double(double, double)>;

/// u^1 = u^0 + dt g + (c dt)^2/2 lap(u^0), then one dispersive beta = sqrt(2)
/// step for the diffusive variant. Returns history at t = dt (or 2 dt).
FieldHistory start_history_2d(const Stepper2D& stepper, const Field2Fn& f, const Field2Fn& g,
                              const Field2Fn& lap_f = {});

/// Evaluate fn at interior, boundary and ghost nodes; exterior nodes get zero.
Field sample(const EmbeddedMesh& mesh, const Field2Fn& fn);

/// One-dimensional ghost geometry: ghost at x_0 = 0, nodes x_j = j dx, boundary at xi_G.
struct GhostStencil1D {
  double dx = 0.0;
  double xi_G = 0.0;
  double xi_I = 0.0;
  double xi_II = 0.0;
  double gamma_I = 0.0;
  double gamma_II = 0.0;
  std::size_t m = 0;
  std::size_t n = 0;
  double sigma_I = 0.0;
  double sigma_II = 0.0;
};

/// Requires 0 <= xi_G < dx < ds_I < 1.5 dx.
GhostStencil1D ghost_stencil_1d(double dx, double xi_G, double ds_I);
/// Contraction constant K of the ghost map.
double ghost_contraction(const GhostStencil1D& s, double alpha);
/// Upper bound (4 d^m - d^{n+1}) / 3 with d = e^{-alpha dx}.
double ghost_contraction_bound(const GhostStencil1D& s, double alpha);
/// Closed-form ghost value; conv holds I at x_0 (= I_G), x_1, ..., x_{n+1}.
double ghost_solve_1d(const std::vector<double>& conv, const GhostStencil1D& s, double alpha);
/// Apply the five-equation map once to a ghost guess.
double ghost_map_1d(double u_G, const std::vector<double>& conv, const GhostStencil1D& s, double alpha);

}  // namespace molt
