#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "molt/bc1d.hpp"
#include "molt/core.hpp"
#include "molt/fastconv.hpp"

namespace molt {

using TimeFn = std::function<double(double)>;
using SpaceFn = std::function<double(double)>;

enum class SourceKind { soft, point };

/// A point source at x_s. For soft sources the waveform is the field value
/// imposed at x_s; for point sources it is the strength sigma~(t).
struct SourceSpec {
  double x_s = 0.0;
  TimeFn waveform;
  TimeFn derivative;  ///< optional analytic sigma'(t) for soft sources
  SourceKind kind = SourceKind::point;
};

/// sigma~(t) of the equivalent point source (2/c sigma'(t) for soft sources).
double source_strength(const SourceSpec& source, const SchemeParams& params, double t);

/// I[S / alpha^2] at every line node: sum_i sigma~_i(t) e^{-alpha |x - x_i|} / (2 alpha).
std::vector<double> source_field(const std::vector<SourceSpec>& sources, const SweepLine& line,
                                 const SchemeParams& params, double t);

/// Boundary condition of one line end; an empty data function means zero data.
struct EndClosure {
  BcKind kind = BcKind::dirichlet;
  TimeFn data;

  double at(double t) const { return data ? data(t) : 0.0; }
};

struct LineClosure {
  EndClosure left;
  EndClosure right;
  OutflowState outflow;

  static LineClosure both(BcKind kind);
};

/// End condition for one line inverse v = I[f] + A e^{-alpha(x-a)} + B e^{-alpha(b-x)}.
struct EndSpec {
  enum class Kind { value, slope, periodic, outflow };
  Kind kind = Kind::value;
  double target = 0.0;
  OutflowRowInput outflow;
};

/// Complete a line inverse in place: v holds I[f] on entry and the solution on exit.
Coefficients finish_line(const ConvolutionPlan& plan, double* v, const EndSpec& left, const EndSpec& right,
                         double beta, const OutflowGammas* gammas = nullptr);

/// Add A e^{-alpha(x-a)} + B e^{-alpha(b-x)} to v.
void add_homogeneous(const ConvolutionPlan& plan, double* v, const Coefficients& coeffs);

/// Advances one line. Holds the convolution plan so repeated steps cost O(M).
class LineStepper {
 public:
  LineStepper(SweepLine line, LineClosure closure, SchemeParams params, std::vector<SourceSpec> sources = {});

  const SweepLine& line() const { return line_; }
  const SchemeParams& params() const { return params_; }
  LineClosure& closure() { return closure_; }

  /// Dispatches on the scheme variant.
  void step(FieldHistory& hist);

  void step_dispersive(FieldHistory& hist);
  void step_diffusive(FieldHistory& hist);
  void step_dissipative(FieldHistory& hist);

  /// D[f] = f - L^{-1}[f] with closures that depend only on f.
  std::vector<double> apply_d(const std::vector<double>& f) const;

 private:
  void centered(FieldHistory& hist, bool with_dissipation);
  EndSpec self_end(const EndClosure& end, double value) const;

  SweepLine line_;
  LineClosure closure_;
  SchemeParams params_;
  std::vector<SourceSpec> sources_;
  ConvolutionPlan plan_;
};

FieldHistory step_dispersive(const FieldHistory& hist, LineClosure& closure, const std::vector<SourceSpec>& sources,
                             const SchemeParams& params, const SweepLine& line);
FieldHistory step_diffusive(const FieldHistory& hist, LineClosure& closure, const std::vector<SourceSpec>& sources,
                            const SchemeParams& params, const SweepLine& line);
FieldHistory step_dissipative(const FieldHistory& hist, LineClosure& closure, const SchemeParams& params,
                              const SweepLine& line, double epsilon);

/// Second level from u(0) = f, u_t(0) = g: u^1 = f + dt g + (c dt)^2 / 2 f''.
/// Without an analytic f'' a three-point difference is used.
std::vector<double> taylor_start(const SweepLine& line, const LineClosure& closure, const SchemeParams& params,
                                 const SpaceFn& f, const SpaceFn& g, const SpaceFn& f_xx = {});

/// History at t = dt (two levels), or t = 2 dt for the diffusive variant, whose
/// third level comes from one centered step with beta = sqrt(2).
FieldHistory start_history(const SweepLine& line, LineClosure& closure, const SchemeParams& params,
                           const SpaceFn& f, const SpaceFn& g, const SpaceFn& f_xx = {},
                           const std::vector<SourceSpec>& sources = {});

}  // namespace molt
