#include "molt/stepper2d.hpp"

#include <algorithm>
#include <cmath>

#include "molt/errors.hpp"

namespace molt {

namespace {

bool has_edge(const DomainSpec& d, EdgeBc bc, Edge a, Edge b) { return d.edges[a] == bc || d.edges[b] == bc; }

double guess_value(InitialGuess g, double un, double unm1, double unm2) {
  switch (g) {
    case InitialGuess::quadratic: return 3.0 * un - 3.0 * unm1 + unm2;
    case InitialGuess::linear: return 2.0 * un - unm1;
    case InitialGuess::previous: return un;
  }
  return un;
}

}  // namespace

Stepper2D::Stepper2D(const EmbeddedMesh& mesh, SchemeParams params, Stepper2DOptions options)
    : mesh_(&mesh), params_(params), options_(std::move(options)), gammas_(outflow_gammas(params.beta)) {
  const DomainSpec& d = mesh.domain;
  const bool x_outflow = has_edge(d, EdgeBc::outflow, edge_left, edge_right);
  const bool y_outflow = has_edge(d, EdgeBc::outflow, edge_bottom, edge_top);
  if (x_outflow && y_outflow) {
    throw Error(ErrorCode::UnsupportedClosure, "outflow is supported along one axis only");
  }
  first_axis_ = x_outflow ? 1 : 0;
  const bool outflow = x_outflow || y_outflow;
  if (outflow && params_.variant == Variant::diffusive) {
    throw Error(ErrorCode::UnsupportedClosure, "outflow closure needs a centered variant");
  }
  if (outflow && options_.averaging) {
    throw Error(ErrorCode::UnsupportedClosure, "averaged sweep orders cannot carry outflow history");
  }
  if (!options_.line_sources.empty() && first_axis_ != 0) {
    throw Error(ErrorCode::UnsupportedClosure, "line sources need y as the final sweep");
  }
  if (d.curved_neumann && (!options_.point_sources.empty() || !options_.line_sources.empty())) {
    throw Error(ErrorCode::UnsupportedClosure, "sources are not supported with an embedded Neumann boundary");
  }
  x_plans_.reserve(mesh.x_lines.size());
  for (const MeshLine& l : mesh.x_lines) x_plans_.emplace_back(l.geom, params_.alpha);
  y_plans_.reserve(mesh.y_lines.size());
  for (const MeshLine& l : mesh.y_lines) y_plans_.emplace_back(l.geom, params_.alpha);
  if (outflow) outflow_.assign(mesh.lines(1 - first_axis_).size(), LineOutflow{});
  if (d.curved_neumann) {
    stencils_ = build_ghost_stencils(mesh, options_.ds_I);
    std::vector<char> mark(mesh.node_count(), 0);
    for (const GhostStencil& s : stencils_) {
      for (std::size_t n : s.interp_I.nodes) mark[n] = 1;
      for (std::size_t n : s.interp_II.nodes) mark[n] = 1;
    }
    for (std::size_t id = 0; id < mark.size(); ++id) {
      if (mark[id]) stencil_nodes_.push_back(id);
    }
  }
}

double Stepper2D::boundary_value(Point p, double t) const {
  return options_.dirichlet ? options_.dirichlet(p.x, p.y, t) : 0.0;
}

double Stepper2D::boundary_bracket(Point p, double t_n) const {
  if (!options_.dirichlet) return 0.0;
  const double dt = params_.dt;
  const double gn = boundary_value(p, t_n);
  return boundary_value(p, t_n + dt) - 2.0 * gn + boundary_value(p, t_n - dt) + params_.beta * params_.beta * gn;
}

void Stepper2D::set_data_nodes(Field& f, double t) const {
  const EmbeddedMesh& m = *mesh_;
  for (std::size_t id = 0; id < m.node_count(); ++id) {
    if (m.kind[id] == NodeKind::boundary) f[id] = boundary_value(m.node_point(id), t);
  }
}

void Stepper2D::zero_data_nodes(Field& f) const {
  const EmbeddedMesh& m = *mesh_;
  for (std::size_t id = 0; id < m.node_count(); ++id) {
    if (m.kind[id] == NodeKind::boundary) f[id] = 0.0;
  }
}

void Stepper2D::fill_ghosts(Field& f) const {
  for (const GhostStencil& s : stencils_) f[s.ghost] = s.apply(f);
}

void Stepper2D::sweep(int axis, const Field& f, const PointFn& rhs_end, const PointFn* targets, Field& out,
                      const LineAdd& add_I, const Outflow* outflow) const {
  const auto& lines = mesh_->lines(axis);
  const auto& plans = axis == 0 ? x_plans_ : y_plans_;
  const double b2 = params_.beta * params_.beta;
  std::vector<double> buf;
  std::vector<double> v;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const MeshLine& line = lines[l];
    const ConvolutionPlan& plan = plans[l];
    const std::size_t n = line.ids.size();
    buf.resize(n);
    v.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t id = line.ids[k];
      buf[k] = id != no_node ? f[id] : (rhs_end ? rhs_end(line.point(k)) : 0.0);
    }
    plan.apply(buf.data(), v.data());
    if (add_I) add_I(line, v);
    const auto spec = [&](const LineEnd& end, std::size_t k, bool hi) {
      EndSpec s;
      if (end.type != EndType::edge) {
        s.kind = EndSpec::Kind::value;
        s.target = targets ? (*targets)(line.point(k)) : buf[k];
        return s;
      }
      switch (end.bc) {
        case EdgeBc::periodic: s.kind = EndSpec::Kind::periodic; break;
        case EdgeBc::outflow:
          if (outflow != nullptr) {
            const std::size_t id = line.ids[k];
            s.kind = EndSpec::Kind::outflow;
            const LineOutflow& st = (*outflow->states)[l];
            s.outflow = OutflowRowInput{hi ? st.B_prev : st.A_prev, (*outflow->known)[id], 1.0, b2,
                                        (*outflow->u_n)[id], (*outflow->u_nm1)[id]};
          } else {
            s.kind = EndSpec::Kind::slope;
          }
          break;
        default: s.kind = EndSpec::Kind::slope; break;
      }
      return s;
    };
    const Coefficients co = finish_line(plan, v.data(), spec(line.lo, 0, false), spec(line.hi, n - 1, true),
                                        params_.beta, &gammas_);
    if (outflow != nullptr) (*outflow->states)[l] = LineOutflow{co.A, co.B};
    if (line.geom.periodic) {
      const double avg = 0.5 * (v.front() + v.back());
      v.front() = avg;
      v.back() = avg;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t id = line.ids[k];
      if (id != no_node && mesh_->kind[id] == NodeKind::interior) out[id] = v[k];
    }
  }
}

Field Stepper2D::sweep_target(int axis, const Field& rhs, const PointFn& rhs_end, const PointFn& targets) const {
  Field out(mesh_->node_count(), 0.0);
  sweep(axis, rhs, rhs_end, &targets, out);
  return out;
}

Field Stepper2D::inverse_self(int axis, const Field& f, const PointFn& end_values) const {
  Field out(mesh_->node_count(), 0.0);
  for (std::size_t id = 0; id < out.size(); ++id) {
    if (mesh_->kind[id] == NodeKind::boundary) out[id] = f[id];
  }
  sweep(axis, f, end_values, nullptr, out);
  return out;
}

Field Stepper2D::apply_d(int axis, const Field& f, const PointFn& end_values) const {
  Field out = inverse_self(axis, f, end_values);
  for (std::size_t id = 0; id < out.size(); ++id) {
    out[id] = mesh_->kind[id] == NodeKind::interior ? f[id] - out[id] : 0.0;
  }
  return out;
}

Field Stepper2D::d_xy(const Field& f, const PointFn& end_values) const {
  const Field ly = inverse_self(1, f, end_values);
  Field out = inverse_self(0, ly, end_values);
  for (std::size_t id = 0; id < out.size(); ++id) {
    out[id] = mesh_->kind[id] == NodeKind::interior ? f[id] - out[id] : 0.0;
  }
  return out;
}

Field Stepper2D::operator_C(const Field& f, const PointFn& end_values) const {
  const Field dy = apply_d(1, f, end_values);
  const Field dx = apply_d(0, f, end_values);
  Field out = inverse_self(0, dy);
  const Field b = inverse_self(1, dx);
  for (std::size_t id = 0; id < out.size(); ++id) {
    out[id] = mesh_->kind[id] == NodeKind::interior ? out[id] + b[id] : 0.0;
  }
  return out;
}

void Stepper2D::add_sources(int axis, double t, double scale, const MeshLine& line, std::vector<double>& I) const {
  const double alpha = params_.alpha;
  for (const PointSource2D& s : options_.point_sources) {
    const double sig = scale * source_strength(s.signal, params_, t) / 4.0;
    if (sig == 0.0) continue;
    for (std::size_t k = 0; k < I.size(); ++k) {
      const Point p = line.point(k);
      I[k] += sig * std::exp(-alpha * (std::abs(p.x - s.at.x) + std::abs(p.y - s.at.y)));
    }
  }
  if (axis != 1) return;
  for (const LineSource2D& s : options_.line_sources) {
    if (s.y < line.geom.a() || s.y > line.geom.b()) continue;
    const double sig = scale * source_strength(s.signal, params_, t) / (2.0 * alpha);
    if (sig == 0.0) continue;
    for (std::size_t k = 0; k < I.size(); ++k) I[k] += sig * std::exp(-alpha * std::abs(line.geom.nodes[k] - s.y));
  }
}

Field Stepper2D::centered_update(const FieldHistory& hist, int first, std::vector<LineOutflow>* states,
                                 bool record) {
  const EmbeddedMesh& m = *mesh_;
  const std::size_t nn = m.node_count();
  const int second = 1 - first;
  const double t = hist.t_n;
  const double b2 = params_.beta * params_.beta;
  const Field& un = hist.u_n;
  const Field& unm1 = hist.u_nm1;

  Field known(nn, 0.0);
  for (std::size_t id = 0; id < nn; ++id) {
    if (m.kind[id] == NodeKind::interior) known[id] = 2.0 * un[id] - unm1[id] - b2 * un[id];
  }
  const PointFn g_n = [this, t](Point p) { return boundary_value(p, t); };
  if (options_.correction) {
    const Field d1 = apply_d(second, un, g_n);
    const Field d2 = apply_d(first, d1);
    for (std::size_t id = 0; id < nn; ++id) known[id] += b2 * d2[id];
  }
  if (params_.epsilon > 0.0) {
    const double tm = t - params_.dt;
    const PointFn g_nm1 = [this, tm](Point p) { return boundary_value(p, tm); };
    const Field c1 = operator_C(unm1, g_nm1);
    const Field c2 = operator_C(c1);
    for (std::size_t id = 0; id < nn; ++id) known[id] += params_.epsilon * c2[id];
  }

  const PointFn bracket = [this, t](Point p) { return boundary_bracket(p, t); };
  Field rhs(nn, 0.0);
  for (std::size_t id = 0; id < nn; ++id) rhs[id] = b2 * un[id];
  const PointFn rhs_end = [this, t, b2](Point p) { return b2 * boundary_value(p, t); };
  Field w1(nn, 0.0);
  sweep(first, rhs, rhs_end, &bracket, w1);
  for (std::size_t id = 0; id < nn; ++id) {
    if (m.kind[id] == NodeKind::boundary) w1[id] = bracket(m.node_point(id));
  }

  Field w2(nn, 0.0);
  const bool sources = !options_.point_sources.empty() || !options_.line_sources.empty();
  LineAdd add;
  if (sources) {
    add = [this, second, t, b2](const MeshLine& line, std::vector<double>& I) { add_sources(second, t, b2, line, I); };
  }
  Outflow ctx{&known, &un, &unm1, states};
  sweep(second, w1, bracket, &bracket, w2, add, states != nullptr && !states->empty() ? &ctx : nullptr);

  Field next(nn, 0.0);
  for (std::size_t id = 0; id < nn; ++id) {
    if (m.kind[id] == NodeKind::interior) next[id] = known[id] + w2[id];
  }
  set_data_nodes(next, t + params_.dt);
  if (record) sweeps_ = SweepState{std::move(w1), std::move(w2)};
  return next;
}

void Stepper2D::step_centered(FieldHistory& hist) {
  if (mesh_->domain.curved_neumann) {
    step_neumann_embedded(hist);
    return;
  }
  Field next;
  if (options_.averaging) {
    Field a = centered_update(hist, 0, nullptr, true);
    const Field b = centered_update(hist, 1, nullptr, false);
    for (std::size_t id = 0; id < a.size(); ++id) a[id] = 0.5 * (a[id] + b[id]);
    next = std::move(a);
  } else {
    next = centered_update(hist, first_axis_, &outflow_, true);
  }
  hist.advance(std::move(next), params_.dt);
}

void Stepper2D::step_diffusive(FieldHistory& hist) {
  if (mesh_->domain.curved_neumann) {
    step_neumann_embedded(hist);
    return;
  }
  const EmbeddedMesh& m = *mesh_;
  const std::size_t nn = m.node_count();
  const double t = hist.t_n;
  const double dt = params_.dt;
  Field rhs(nn, 0.0);
  for (std::size_t id = 0; id < nn; ++id) {
    rhs[id] = 0.5 * (5.0 * hist.u_n[id] - 4.0 * hist.u_nm1[id] + hist.u_nm2[id]);
  }
  const PointFn rhs_end = [this, t, dt](Point p) {
    return 0.5 * (5.0 * boundary_value(p, t) - 4.0 * boundary_value(p, t - dt) + boundary_value(p, t - 2.0 * dt));
  };
  const PointFn target = [this, t, dt](Point p) { return boundary_value(p, t + dt); };
  const int first = first_axis_;
  const int second = 1 - first;
  Field w(nn, 0.0);
  sweep(first, rhs, rhs_end, &target, w);
  set_data_nodes(w, t + dt);
  Field next(nn, 0.0);
  LineAdd add;
  if (!options_.point_sources.empty() || !options_.line_sources.empty()) {
    add = [this, second, t, dt](const MeshLine& line, std::vector<double>& I) {
      add_sources(second, t + dt, 1.0, line, I);
    };
  }
  sweep(second, w, target, &target, next, add);
  set_data_nodes(next, t + dt);
  sweeps_ = SweepState{std::move(w), next};
  hist.advance(std::move(next), dt);
}

Field Stepper2D::neumann_inverse(const Field& f, const Field& guess, IterationStats* stats) const {
  const EmbeddedMesh& m = *mesh_;
  const std::size_t nn = m.node_count();
  const double alpha = params_.alpha;
  std::vector<char> on_stencil(nn, 0);
  for (std::size_t id : stencil_nodes_) on_stencil[id] = 1;

  const auto phase = [&](int axis, const Field& input, std::vector<double>& changes) {
    const auto& lines = m.lines(axis);
    const auto& plans = axis == 0 ? x_plans_ : y_plans_;
    std::vector<std::vector<double>> I(lines.size());
    std::vector<double> buf;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      const MeshLine& line = lines[l];
      buf.resize(line.ids.size());
      for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = line.ids[k] != no_node ? input[line.ids[k]] : 0.0;
      I[l].resize(buf.size());
      plans[l].apply(buf.data(), I[l].data());
    }
    const auto end_spec = [&](const MeshLine& line, const LineEnd& end, std::size_t k, const Field& w) {
      EndSpec s;
      if (end.type == EndType::edge) {
        s.kind = end.bc == EdgeBc::periodic ? EndSpec::Kind::periodic : EndSpec::Kind::slope;
      } else {
        s.kind = EndSpec::Kind::value;
        const std::size_t id = line.ids[k];
        s.target = id == no_node ? 0.0 : (end.type == EndType::ghost ? w[id] : input[id]);
      }
      return s;
    };
    const auto coeffs = [&](std::size_t l, const Field& w) {
      const MeshLine& line = lines[l];
      const std::size_t n = line.ids.size();
      const EndSpec lo = end_spec(line, line.lo, 0, w);
      const EndSpec hi = end_spec(line, line.hi, n - 1, w);
      const double mu = plans[l].mu();
      const double Ia = I[l][0];
      const double Ib = I[l][n - 1];
      if (lo.kind == EndSpec::Kind::periodic) return periodic_coeffs(Ia, Ib, mu);
      const EndRow ra = lo.kind == EndSpec::Kind::value ? value_row_a(Ia, mu, lo.target)
                                                        : slope_row_a(Ia, mu, alpha, lo.target);
      const EndRow rb = hi.kind == EndSpec::Kind::value ? value_row_b(Ib, mu, hi.target)
                                                        : slope_row_b(Ib, mu, alpha, hi.target);
      return solve_rows(ra, rb);
    };

    struct Touch {
      std::size_t line;
      std::size_t k;
      double ea;
      double eb;
    };
    std::vector<Touch> touches;
    std::vector<std::size_t> ghost_lines;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      const MeshLine& line = lines[l];
      if (line.lo.type != EndType::ghost && line.hi.type != EndType::ghost) continue;
      ghost_lines.push_back(l);
      for (std::size_t k = 0; k < line.ids.size(); ++k) {
        const std::size_t id = line.ids[k];
        if (id == no_node || !on_stencil[id] || m.kind[id] != NodeKind::interior) continue;
        const double x = line.geom.nodes[k];
        touches.push_back({l, k, std::exp(-alpha * (x - line.geom.a())), std::exp(-alpha * (line.geom.b() - x))});
      }
    }

    Field w(nn, 0.0);
    for (std::size_t id : stencil_nodes_) w[id] = guess[id];
    std::vector<Coefficients> co(lines.size());
    bool converged = ghost_lines.empty();
    for (std::size_t it = 0; it < options_.max_iter && !converged; ++it) {
      fill_ghosts(w);
      for (std::size_t l : ghost_lines) co[l] = coeffs(l, w);
      double change = 0.0;
      for (const Touch& t : touches) {
        const std::size_t id = lines[t.line].ids[t.k];
        const double next = I[t.line][t.k] + co[t.line].A * t.ea + co[t.line].B * t.eb;
        change = std::max(change, std::abs(next - w[id]));
        w[id] = next;
      }
      changes.push_back(change);
      converged = change < options_.tol;
    }
    if (!converged) {
      throw Error(ErrorCode::MaxIterExceeded, "ghost iteration did not reach the tolerance");
    }
    fill_ghosts(w);
    Field out(nn, 0.0);
    std::vector<double> v;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      const MeshLine& line = lines[l];
      v = I[l];
      add_homogeneous(plans[l], v.data(), coeffs(l, w));
      if (line.geom.periodic) {
        const double avg = 0.5 * (v.front() + v.back());
        v.front() = avg;
        v.back() = avg;
      }
      for (std::size_t k = 0; k < v.size(); ++k) {
        const std::size_t id = line.ids[k];
        if (id != no_node && m.kind[id] == NodeKind::interior) out[id] = v[k];
      }
    }
    for (std::size_t id = 0; id < nn; ++id) {
      if (m.kind[id] == NodeKind::boundary) out[id] = input[id];
    }
    fill_ghosts(out);
    return out;
  };

  IterationStats local;
  Field in = f;
  fill_ghosts(in);
  const Field w = phase(0, in, local.x_changes);
  Field out = phase(1, w, local.y_changes);
  local.x_iterations = local.x_changes.size();
  local.y_iterations = local.y_changes.size();
  for (const auto* ch : {&local.x_changes, &local.y_changes}) {
    for (std::size_t k = 1; k < ch->size(); ++k) {
      if ((*ch)[k - 1] > 1e-12) local.max_ratio = std::max(local.max_ratio, (*ch)[k] / (*ch)[k - 1]);
    }
  }
  if (stats != nullptr) *stats = std::move(local);
  return out;
}

void Stepper2D::step_neumann_embedded(FieldHistory& hist) {
  const std::size_t nn = mesh_->node_count();
  const Field& un = hist.u_n;
  const Field& unm1 = hist.u_nm1;
  const Field& unm2 = hist.u_nm2.empty() ? hist.u_nm1 : hist.u_nm2;
  IterationStats total;
  const auto merge = [&total](const IterationStats& s) {
    total.x_iterations = std::max(total.x_iterations, s.x_iterations);
    total.y_iterations = std::max(total.y_iterations, s.y_iterations);
    total.max_ratio = std::max(total.max_ratio, s.max_ratio);
    total.x_changes = s.x_changes;
    total.y_changes = s.y_changes;
  };
  Field next(nn, 0.0);
  if (params_.variant == Variant::diffusive) {
    Field rhs(nn, 0.0);
    Field guess(nn, 0.0);
    for (std::size_t id = 0; id < nn; ++id) {
      rhs[id] = 0.5 * (5.0 * un[id] - 4.0 * unm1[id] + unm2[id]);
      guess[id] = guess_value(options_.guess, un[id], unm1[id], unm2[id]);
    }
    IterationStats s;
    next = neumann_inverse(rhs, guess, &s);
    merge(s);
  } else {
    const double b2 = params_.beta * params_.beta;
    IterationStats s;
    const Field v = neumann_inverse(un, un, &s);
    merge(s);
    for (std::size_t id = 0; id < nn; ++id) next[id] = 2.0 * un[id] - unm1[id] - b2 * (un[id] - v[id]);
    if (params_.epsilon > 0.0) {
      const Field n1 = neumann_inverse(unm1, unm1, &s);
      merge(s);
      Field d1(nn, 0.0);
      for (std::size_t id = 0; id < nn; ++id) d1[id] = unm1[id] - n1[id];
      const Field n2 = neumann_inverse(d1, d1, &s);
      merge(s);
      for (std::size_t id = 0; id < nn; ++id) next[id] += params_.epsilon * (d1[id] - n2[id]);
    }
    for (std::size_t id = 0; id < nn; ++id) {
      if (mesh_->kind[id] != NodeKind::interior && mesh_->kind[id] != NodeKind::boundary) next[id] = 0.0;
    }
    fill_ghosts(next);
  }
  stats_ = std::move(total);
  hist.advance(std::move(next), params_.dt);
}

void Stepper2D::step(FieldHistory& hist) {
  if (mesh_->domain.curved_neumann) {
    step_neumann_embedded(hist);
  } else if (params_.variant == Variant::diffusive) {
    step_diffusive(hist);
  } else {
    step_centered(hist);
  }
}

Field sweep_x(const Stepper2D& stepper, const Field& rhs, const PointFn& rhs_end, const PointFn& targets) {
  return stepper.sweep_target(0, rhs, rhs_end, targets);
}

Field sweep_y(const Stepper2D& stepper, const Field& rhs, const PointFn& rhs_end, const PointFn& targets) {
  return stepper.sweep_target(1, rhs, rhs_end, targets);
}

void step_dirichlet_2d(Stepper2D& stepper, FieldHistory& hist) { stepper.step_centered(hist); }

Field operator_C(const Stepper2D& stepper, const Field& u) { return stepper.operator_C(u); }

void step_dissipative_2d(Stepper2D& stepper, FieldHistory& hist) { stepper.step_centered(hist); }

void step_neumann_embedded(Stepper2D& stepper, FieldHistory& hist) { stepper.step_neumann_embedded(hist); }

Field sample(const EmbeddedMesh& mesh, const Field2Fn& fn) {
  Field out(mesh.node_count(), 0.0);
  for (std::size_t id = 0; id < out.size(); ++id) {
    if (mesh.kind[id] == NodeKind::exterior) continue;
    const Point p = mesh.node_point(id);
    out[id] = fn(p.x, p.y);
  }
  return out;
}

Field line_laplacian(const Stepper2D& stepper, const Field& u_in, double t) {
  const EmbeddedMesh& m = stepper.mesh();
  Field u = u_in;
  stepper.fill_ghosts(u);
  Field lap(m.node_count(), 0.0);
  std::vector<double> buf;
  for (int axis = 0; axis < 2; ++axis) {
    for (const MeshLine& line : m.lines(axis)) {
      const std::size_t n = line.ids.size();
      const auto& x = line.geom.nodes;
      buf.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t id = line.ids[k];
        buf[k] = id != no_node ? u[id] : stepper.boundary_value(line.point(k), t);
      }
      std::vector<double> d2(n, 0.0);
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const double hl = x[k] - x[k - 1];
        const double hr = x[k + 1] - x[k];
        d2[k] = 2.0 * ((buf[k + 1] - buf[k]) / hr - (buf[k] - buf[k - 1]) / hl) / (hl + hr);
      }
      const auto end_value = [&](const LineEnd& end, std::size_t k, std::size_t inner, std::size_t wrap) {
        if (end.type != EndType::edge || n < 2) return;
        const double h = line.geom.h;
        switch (end.bc) {
          case EdgeBc::neumann: d2[k] = 2.0 * (buf[inner] - buf[k]) / (h * h); break;
          case EdgeBc::periodic: d2[k] = (buf[inner] - 2.0 * buf[k] + buf[wrap]) / (h * h); break;
          default: d2[k] = n > 2 ? d2[inner] : 0.0; break;
        }
      };
      end_value(line.lo, 0, 1, n >= 2 ? n - 2 : 0);
      end_value(line.hi, n - 1, n >= 2 ? n - 2 : 0, 1);
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t id = line.ids[k];
        if (id != no_node && m.kind[id] == NodeKind::interior) lap[id] += d2[k];
      }
    }
  }
  return lap;
}

FieldHistory start_history_2d(const Stepper2D& stepper, const Field2Fn& f, const Field2Fn& g, const Field2Fn& lap_f) {
  const EmbeddedMesh& m = stepper.mesh();
  const SchemeParams& p = stepper.params();
  const std::size_t nn = m.node_count();
  Field u0 = sample(m, f);
  for (std::size_t id = 0; id < nn; ++id) {
    if (m.kind[id] == NodeKind::boundary) u0[id] = stepper.boundary_value(m.node_point(id), 0.0);
    if (m.kind[id] == NodeKind::ghost) u0[id] = 0.0;
  }
  const Field lap = lap_f ? sample(m, lap_f) : line_laplacian(stepper, u0, 0.0);
  const Field v0 = g ? sample(m, g) : Field(nn, 0.0);
  const double cdt = p.c * p.dt;
  Field u1(nn, 0.0);
  for (std::size_t id = 0; id < nn; ++id) {
    if (m.kind[id] == NodeKind::interior) u1[id] = u0[id] + p.dt * v0[id] + 0.5 * cdt * cdt * lap[id];
    if (m.kind[id] == NodeKind::boundary) u1[id] = stepper.boundary_value(m.node_point(id), p.dt);
  }
  stepper.fill_ghosts(u0);
  stepper.fill_ghosts(u1);
  FieldHistory hist;
  hist.u_nm2 = u0;
  hist.u_nm1 = std::move(u0);
  hist.u_n = std::move(u1);
  hist.t_n = p.dt;
  if (p.variant == Variant::diffusive) {
    SchemeParams boot = p;
    boot.variant = Variant::dispersive;
    boot.epsilon = 0.0;
    Stepper2DOptions opts = stepper.options();
    Stepper2D b(m, boot, opts);
    if (m.domain.curved_neumann) {
      b.step_neumann_embedded(hist);
    } else {
      b.step_centered(hist);
    }
  }
  return hist;
}

GhostStencil1D ghost_stencil_1d(double dx, double xi_G, double ds_I) {
  if (!(dx > 0.0) || !(xi_G >= 0.0) || !(xi_G < dx) || !(ds_I > dx) || !(ds_I < 1.5 * dx)) {
    throw Error(ErrorCode::InvalidValue, "ghost geometry needs 0 <= xi_G < dx < ds_I < 1.5 dx");
  }
  GhostStencil1D s;
  s.dx = dx;
  s.xi_G = xi_G;
  s.xi_I = ds_I;
  s.xi_II = 2.0 * ds_I;
  const double den = s.xi_II * s.xi_II - s.xi_I * s.xi_I;
  s.gamma_I = (s.xi_II * s.xi_II - xi_G * xi_G) / den;
  s.gamma_II = (xi_G * xi_G - s.xi_I * s.xi_I) / den;
  const double x_I = xi_G + s.xi_I;
  const double x_II = xi_G + s.xi_II;
  s.m = static_cast<std::size_t>(std::floor(x_I / dx));
  s.n = static_cast<std::size_t>(std::floor(x_II / dx));
  s.sigma_I = (static_cast<double>(s.m + 1) * dx - x_I) / dx;
  s.sigma_II = (static_cast<double>(s.n + 1) * dx - x_II) / dx;
  return s;
}

namespace {

double decay(const GhostStencil1D& s, double alpha, std::size_t j) {
  return std::exp(-alpha * static_cast<double>(j) * s.dx);
}

}  // namespace

double ghost_contraction(const GhostStencil1D& s, double alpha) {
  return s.gamma_I * (s.sigma_I * decay(s, alpha, s.m) + (1.0 - s.sigma_I) * decay(s, alpha, s.m + 1)) +
         s.gamma_II * (s.sigma_II * decay(s, alpha, s.n) + (1.0 - s.sigma_II) * decay(s, alpha, s.n + 1));
}

double ghost_contraction_bound(const GhostStencil1D& s, double alpha) {
  const double d = std::exp(-alpha * s.dx);
  return (4.0 * std::pow(d, static_cast<double>(s.m)) - std::pow(d, static_cast<double>(s.n + 1))) / 3.0;
}

double ghost_solve_1d(const std::vector<double>& conv, const GhostStencil1D& s, double alpha) {
  if (conv.size() < s.n + 2) throw Error(ErrorCode::InvalidValue, "convolution data too short for the stencil");
  const double K = ghost_contraction(s, alpha);
  if (1.0 - K < 1e-10) throw Error(ErrorCode::IllConditioned, "ghost system is ill-conditioned");
  const double IG = conv[0];
  const auto term = [&](std::size_t j) { return conv[j] - IG * decay(s, alpha, j); };
  const double num = s.gamma_I * (s.sigma_I * term(s.m) + (1.0 - s.sigma_I) * term(s.m + 1)) +
                     s.gamma_II * (s.sigma_II * term(s.n) + (1.0 - s.sigma_II) * term(s.n + 1));
  return num / (1.0 - K);
}

double ghost_map_1d(double u_G, const std::vector<double>& conv, const GhostStencil1D& s, double alpha) {
  if (conv.size() < s.n + 2) throw Error(ErrorCode::InvalidValue, "convolution data too short for the stencil");
  const auto u = [&](std::size_t j) { return conv[j] + (u_G - conv[0]) * decay(s, alpha, j); };
  return s.gamma_I * (s.sigma_I * u(s.m) + (1.0 - s.sigma_I) * u(s.m + 1)) +
         s.gamma_II * (s.sigma_II * u(s.n) + (1.0 - s.sigma_II) * u(s.n + 1));
}

}  // namespace molt
