#include "molt/stepper1d.hpp"

#include <cmath>
#include <utility>

#include "molt/errors.hpp"

namespace molt {

double source_strength(const SourceSpec& source, const SchemeParams& params, double t) {
  if (source.kind == SourceKind::point) return source.waveform ? source.waveform(t) : 0.0;
  double deriv = 0.0;
  if (source.derivative) {
    deriv = source.derivative(t);
  } else if (source.waveform) {
    deriv = (source.waveform(t + params.dt) - source.waveform(t - params.dt)) / (2.0 * params.dt);
  }
  return 2.0 / params.c * deriv;
}

std::vector<double> source_field(const std::vector<SourceSpec>& sources, const SweepLine& line,
                                 const SchemeParams& params, double t) {
  std::vector<double> out(line.nodes.size(), 0.0);
  for (const auto& s : sources) {
    if (s.x_s < line.a() || s.x_s > line.b()) {
      throw Error(ErrorCode::SourceOutsideLine, "source lies outside the line");
    }
    const double amp = source_strength(s, params, t) / (2.0 * params.alpha);
    if (amp == 0.0) continue;
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] += amp * std::exp(-params.alpha * std::abs(line.nodes[j] - s.x_s));
    }
  }
  return out;
}

LineClosure LineClosure::both(BcKind kind) {
  LineClosure c;
  c.left.kind = kind;
  c.right.kind = kind;
  return c;
}

void add_homogeneous(const ConvolutionPlan& plan, double* v, const Coefficients& coeffs) {
  plan.add_homogeneous(coeffs.A, coeffs.B, v);
}

Coefficients finish_line(const ConvolutionPlan& plan, double* v, const EndSpec& left, const EndSpec& right,
                         double beta, const OutflowGammas* gammas) {
  const std::size_t n = plan.size();
  const double Ia = v[0];
  const double Ib = v[n - 1];
  const double mu = plan.mu();
  Coefficients co;
  const bool lp = left.kind == EndSpec::Kind::periodic;
  const bool rp = right.kind == EndSpec::Kind::periodic;
  if (lp || rp) {
    if (!(lp && rp)) throw Error(ErrorCode::UnsupportedClosure, "periodic closure needs both ends periodic");
    co = periodic_coeffs(Ia, Ib, mu);
  } else {
    const bool outflow = left.kind == EndSpec::Kind::outflow || right.kind == EndSpec::Kind::outflow;
    if (outflow && gammas == nullptr) throw Error(ErrorCode::UnsupportedClosure, "outflow end without gammas");
    EndRow ra;
    switch (left.kind) {
      case EndSpec::Kind::value: ra = value_row_a(Ia, mu, left.target); break;
      case EndSpec::Kind::slope: ra = slope_row_a(Ia, mu, plan.alpha(), left.target); break;
      case EndSpec::Kind::outflow: ra = outflow_row_a(Ia, mu, beta, *gammas, left.outflow); break;
      case EndSpec::Kind::periodic: break;
    }
    EndRow rb;
    switch (right.kind) {
      case EndSpec::Kind::value: rb = value_row_b(Ib, mu, right.target); break;
      case EndSpec::Kind::slope: rb = slope_row_b(Ib, mu, plan.alpha(), right.target); break;
      case EndSpec::Kind::outflow: rb = outflow_row_b(Ib, mu, beta, *gammas, right.outflow); break;
      case EndSpec::Kind::periodic: break;
    }
    co = solve_rows(ra, rb, outflow);
  }
  plan.add_homogeneous(co.A, co.B, v);
  return co;
}

LineStepper::LineStepper(SweepLine line, LineClosure closure, SchemeParams params, std::vector<SourceSpec> sources)
    : line_(std::move(line)),
      closure_(std::move(closure)),
      params_(params),
      sources_(std::move(sources)),
      plan_(line_, params_.alpha) {
  const bool lp = closure_.left.kind == BcKind::periodic;
  const bool rp = closure_.right.kind == BcKind::periodic;
  if (lp != rp) throw Error(ErrorCode::UnsupportedClosure, "periodic closure needs both ends periodic");
  if (lp && !line_.periodic) {
    line_.periodic = true;
    plan_ = ConvolutionPlan(line_, params_.alpha);
  }
  if (closure_.left.kind == BcKind::outflow || closure_.right.kind == BcKind::outflow) {
    closure_.outflow.gammas = outflow_gammas(params_.beta);
  }
}

void LineStepper::step(FieldHistory& hist) {
  switch (params_.variant) {
    case Variant::dispersive: step_dispersive(hist); break;
    case Variant::diffusive: step_diffusive(hist); break;
    case Variant::dissipative: step_dissipative(hist); break;
  }
}

EndSpec LineStepper::self_end(const EndClosure& end, double value) const {
  EndSpec s;
  switch (end.kind) {
    case BcKind::dirichlet: s.kind = EndSpec::Kind::value; s.target = value; break;
    case BcKind::neumann:
    case BcKind::outflow: s.kind = EndSpec::Kind::slope; s.target = 0.0; break;
    case BcKind::periodic: s.kind = EndSpec::Kind::periodic; break;
  }
  return s;
}

std::vector<double> LineStepper::apply_d(const std::vector<double>& f) const {
  std::vector<double> v(f.size());
  plan_.apply(f.data(), v.data());
  finish_line(plan_, v.data(), self_end(closure_.left, f.front()), self_end(closure_.right, f.back()),
              params_.beta);
  for (std::size_t j = 0; j < f.size(); ++j) v[j] = f[j] - v[j];
  return v;
}

void LineStepper::step_dispersive(FieldHistory& hist) { centered(hist, false); }
void LineStepper::step_dissipative(FieldHistory& hist) { centered(hist, true); }

void LineStepper::centered(FieldHistory& hist, bool with_dissipation) {
  const std::size_t n = line_.nodes.size();
  if (hist.u_n.size() != n || hist.u_nm1.size() != n) {
    throw Error(ErrorCode::DegenerateLine, "history does not match line");
  }
  const double t = hist.t_n;
  const double dt = params_.dt;
  const double b2 = params_.beta * params_.beta;
  const auto& un = hist.u_n;
  const auto& um = hist.u_nm1;

  std::vector<double> known(n);
  for (std::size_t j = 0; j < n; ++j) known[j] = 2.0 * un[j] - um[j] - b2 * un[j];
  if (with_dissipation && params_.epsilon > 0.0) {
    const auto e = apply_d(apply_d(um));
    for (std::size_t j = 0; j < n; ++j) known[j] += params_.epsilon * e[j];
  }

  std::vector<double> v(n);
  plan_.apply(un.data(), v.data());
  if (!sources_.empty()) {
    const auto s = source_field(sources_, line_, params_, t);
    for (std::size_t j = 0; j < n; ++j) v[j] += s[j];
  }

  auto end_spec = [&](const EndClosure& end, std::size_t j, double prev) {
    EndSpec s;
    switch (end.kind) {
      case BcKind::dirichlet:
        s.kind = EndSpec::Kind::value;
        s.target = end_target({end.at(t - dt), end.at(t), end.at(t + dt)}, params_);
        break;
      case BcKind::neumann:
        s.kind = EndSpec::Kind::slope;
        s.target = end_target({end.at(t - dt), end.at(t), end.at(t + dt)}, params_);
        break;
      case BcKind::periodic: s.kind = EndSpec::Kind::periodic; break;
      case BcKind::outflow:
        s.kind = EndSpec::Kind::outflow;
        s.outflow = {prev, known[j], b2, 1.0, un[j], um[j]};
        break;
    }
    return s;
  };
  const EndSpec left = end_spec(closure_.left, 0, closure_.outflow.A_prev);
  const EndSpec right = end_spec(closure_.right, n - 1, closure_.outflow.B_prev);
  const Coefficients co = finish_line(plan_, v.data(), left, right, params_.beta, &closure_.outflow.gammas);
  if (closure_.left.kind == BcKind::outflow) closure_.outflow.A_prev = co.A;
  if (closure_.right.kind == BcKind::outflow) closure_.outflow.B_prev = co.B;

  std::vector<double> next(n);
  for (std::size_t j = 0; j < n; ++j) next[j] = known[j] + b2 * v[j];
  if (closure_.left.kind == BcKind::dirichlet) next.front() = closure_.left.at(t + dt);
  if (closure_.right.kind == BcKind::dirichlet) next.back() = closure_.right.at(t + dt);
  if (closure_.left.kind == BcKind::periodic) {
    const double avg = 0.5 * (next.front() + next.back());
    next.front() = avg;
    next.back() = avg;
  }
  if (closure_.left.kind == BcKind::outflow || closure_.right.kind == BcKind::outflow) {
    closure_.outflow.hist = {next.front(), un.front(), next.back(), un.back()};
  }
  hist.advance(std::move(next), dt);
}

void LineStepper::step_diffusive(FieldHistory& hist) {
  const std::size_t n = line_.nodes.size();
  if (hist.u_n.size() != n || hist.u_nm1.size() != n || hist.u_nm2.size() != n) {
    throw Error(ErrorCode::DegenerateLine, "diffusive step needs three history levels");
  }
  if (closure_.left.kind == BcKind::outflow || closure_.right.kind == BcKind::outflow) {
    throw Error(ErrorCode::UnsupportedClosure, "outflow closure is only available for centered variants");
  }
  const double t1 = hist.t_n + params_.dt;
  std::vector<double> rhs(n);
  for (std::size_t j = 0; j < n; ++j) rhs[j] = 0.5 * (5.0 * hist.u_n[j] - 4.0 * hist.u_nm1[j] + hist.u_nm2[j]);
  std::vector<double> v(n);
  plan_.apply(rhs.data(), v.data());
  if (!sources_.empty()) {
    const auto s = source_field(sources_, line_, params_, t1);
    for (std::size_t j = 0; j < n; ++j) v[j] += s[j];
  }
  auto end_spec = [&](const EndClosure& end) {
    EndSpec s;
    switch (end.kind) {
      case BcKind::dirichlet: s.kind = EndSpec::Kind::value; s.target = end.at(t1); break;
      case BcKind::neumann: s.kind = EndSpec::Kind::slope; s.target = end.at(t1); break;
      case BcKind::periodic: s.kind = EndSpec::Kind::periodic; break;
      case BcKind::outflow: break;
    }
    return s;
  };
  finish_line(plan_, v.data(), end_spec(closure_.left), end_spec(closure_.right), params_.beta);
  if (closure_.left.kind == BcKind::dirichlet) v.front() = closure_.left.at(t1);
  if (closure_.right.kind == BcKind::dirichlet) v.back() = closure_.right.at(t1);
  if (closure_.left.kind == BcKind::periodic) {
    const double avg = 0.5 * (v.front() + v.back());
    v.front() = avg;
    v.back() = avg;
  }
  hist.advance(std::move(v), params_.dt);
}

FieldHistory step_dispersive(const FieldHistory& hist, LineClosure& closure, const std::vector<SourceSpec>& sources,
                             const SchemeParams& params, const SweepLine& line) {
  LineStepper s(line, closure, params, sources);
  FieldHistory h = hist;
  s.step_dispersive(h);
  closure = s.closure();
  return h;
}

FieldHistory step_diffusive(const FieldHistory& hist, LineClosure& closure, const std::vector<SourceSpec>& sources,
                            const SchemeParams& params, const SweepLine& line) {
  LineStepper s(line, closure, params, sources);
  FieldHistory h = hist;
  s.step_diffusive(h);
  closure = s.closure();
  return h;
}

FieldHistory step_dissipative(const FieldHistory& hist, LineClosure& closure, const SchemeParams& params,
                              const SweepLine& line, double epsilon) {
  SchemeParams p = params;
  p.epsilon = epsilon;
  LineStepper s(line, closure, p, {});
  FieldHistory h = hist;
  s.step_dissipative(h);
  closure = s.closure();
  return h;
}

std::vector<double> taylor_start(const SweepLine& line, const LineClosure& closure, const SchemeParams& params,
                                 const SpaceFn& f, const SpaceFn& g, const SpaceFn& f_xx) {
  const auto& x = line.nodes;
  const std::size_t n = x.size();
  std::vector<double> u0(n), lap(n, 0.0), u1(n);
  for (std::size_t j = 0; j < n; ++j) u0[j] = f(x[j]);
  if (f_xx) {
    for (std::size_t j = 0; j < n; ++j) lap[j] = f_xx(x[j]);
  } else {
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double hl = x[j] - x[j - 1];
      const double hr = x[j + 1] - x[j];
      lap[j] = 2.0 * ((u0[j + 1] - u0[j]) / hr - (u0[j] - u0[j - 1]) / hl) / (hl + hr);
    }
    const double hl = line.h_left();
    const double hr = line.h_right();
    switch (closure.left.kind) {
      case BcKind::periodic: {
        const double hw = x[n - 1] - x[n - 2];
        lap[0] = 2.0 * ((u0[1] - u0[0]) / hl - (u0[0] - u0[n - 2]) / hw) / (hl + hw);
        lap[n - 1] = lap[0];
        break;
      }
      case BcKind::neumann: lap[0] = 2.0 * (u0[1] - u0[0] - hl * closure.left.at(0.0)) / (hl * hl); break;
      default: lap[0] = n > 2 ? lap[1] : 0.0; break;
    }
    switch (closure.right.kind) {
      case BcKind::periodic: break;
      case BcKind::neumann:
        lap[n - 1] = 2.0 * (u0[n - 2] - u0[n - 1] + hr * closure.right.at(0.0)) / (hr * hr);
        break;
      default: lap[n - 1] = n > 2 ? lap[n - 2] : 0.0; break;
    }
  }
  const double cdt = params.c * params.dt;
  for (std::size_t j = 0; j < n; ++j) {
    u1[j] = u0[j] + params.dt * (g ? g(x[j]) : 0.0) + 0.5 * cdt * cdt * lap[j];
  }
  if (closure.left.kind == BcKind::dirichlet) u1.front() = closure.left.at(params.dt);
  if (closure.right.kind == BcKind::dirichlet) u1.back() = closure.right.at(params.dt);
  return u1;
}

FieldHistory start_history(const SweepLine& line, LineClosure& closure, const SchemeParams& params,
                           const SpaceFn& f, const SpaceFn& g, const SpaceFn& f_xx,
                           const std::vector<SourceSpec>& sources) {
  FieldHistory h;
  const std::size_t n = line.nodes.size();
  h.u_nm1.resize(n);
  for (std::size_t j = 0; j < n; ++j) h.u_nm1[j] = f(line.nodes[j]);
  if (closure.left.kind == BcKind::dirichlet) h.u_nm1.front() = closure.left.at(0.0);
  if (closure.right.kind == BcKind::dirichlet) h.u_nm1.back() = closure.right.at(0.0);
  h.u_n = taylor_start(line, closure, params, f, g, f_xx);
  h.t_n = params.dt;
  if (params.variant == Variant::diffusive) {
    const SchemeParams centered = make_params(params.c, params.dt, std::sqrt(2.0), 0.0, Variant::dispersive);
    LineStepper s(line, closure, centered, sources);
    s.step_dispersive(h);
    closure = s.closure();
  }
  return h;
}

}  // namespace molt
