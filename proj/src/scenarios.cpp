#include "molt/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>

#include "molt/errors.hpp"
#include "molt/snapshot.hpp"

namespace molt {

namespace {

constexpr double pi = std::numbers::pi;

double cos6_bump(double r, double w) {
  if (r >= w) return 0.0;
  const double s = r / w;
  return std::pow(std::cos(0.5 * pi * s * s), 6);
}

double smooth_ramp(double t, double width) {
  if (t <= 0.0) return 0.0;
  if (t >= width) return 1.0;
  const double s = std::sin(0.5 * pi * t / width);
  return s * s;
}

double smooth_ramp_rate(double t, double width) {
  if (t <= 0.0 || t >= width) return 0.0;
  return 0.5 * pi / width * std::sin(pi * t / width);
}

}  // namespace

Problem2D double_circle_problem(std::size_t n, double radius, double gamma) {
  Problem2D p;
  p.name = "double_circle";
  const Box bbox{-(radius + gamma + 0.025), radius + gamma + 0.025, -(radius + 0.025), radius + 0.025};
  p.domain = double_circle_domain(radius, gamma, bbox);
  p.nx = n;
  p.ny = n;
  const double w = 0.8 * gamma;
  p.initial = [gamma, w](double x, double y) {
    const double r1 = std::hypot(x + gamma, y);
    const double r2 = std::hypot(x - gamma, y);
    if (r1 < w) return -cos6_bump(r1, w);
    return cos6_bump(r2, w);
  };
  return p;
}

Problem2D bessel_problem(std::size_t n, bool neumann, double radius) {
  Problem2D p;
  p.name = neumann ? "bessel_neumann" : "bessel_dirichlet";
  const double half = std::max(2.0, std::ceil(radius * 1.25 * 4.0) / 4.0);
  p.domain = circle_domain(radius, Box{-half, half, -half, half}, neumann);
  p.nx = n;
  p.ny = n;
  const ReferenceParams rp{radius, 1.0, pi};
  const std::string ref = p.name;
  p.exact = [ref, rp](double x, double y, double t) { return reference_solution(ref, {x, y}, t, rp); };
  p.initial = [ref, rp](double x, double y) { return reference_solution(ref, {x, y}, 0.0, rp); };
  return p;
}

Problem2D quarter_circle_problem(std::size_t n, double radius) {
  Problem2D p;
  p.name = "quarter_circle";
  p.domain = quarter_circle_domain(radius);
  p.nx = n;
  p.ny = n;
  const ReferenceParams rp{radius, 1.0, pi};
  p.exact = [rp](double x, double y, double t) { return reference_solution("bessel_dirichlet", {x, y}, t, rp); };
  p.initial = [rp](double x, double y) { return reference_solution("bessel_dirichlet", {x, y}, 0.0, rp); };
  return p;
}

Problem2D full_circle_problem(std::size_t n, double radius) {
  Problem2D p = quarter_circle_problem(n, radius);
  p.name = "full_circle";
  p.domain = circle_domain(radius, Box{-radius, radius, -radius, radius});
  p.nx = 2 * n;
  p.ny = 2 * n;
  return p;
}

Problem2D slit_grating_problem(std::size_t n, double aperture, double period, double ly, double c) {
  Problem2D p;
  p.name = "slit_grating";
  p.domain = slit_grating_domain(aperture, period, ly);
  p.nx = n;
  p.ny = n % 2 == 0 ? n + 1 : n;
  p.c = c;
  const double k = 2.0 * pi / aperture;
  const double omega = k * c;
  const double ys = -0.25 * ly;
  const double ramp = 2.0 * 2.0 * pi / omega;
  LineSource2D src;
  src.y = ys;
  src.signal.kind = SourceKind::soft;
  src.signal.waveform = [=](double t) { return smooth_ramp(t, ramp) * std::cos(omega * t + k * ys); };
  src.signal.derivative = [=](double t) {
    return smooth_ramp_rate(t, ramp) * std::cos(omega * t + k * ys) -
           smooth_ramp(t, ramp) * omega * std::sin(omega * t + k * ys);
  };
  p.options.line_sources.push_back(src);
  p.initial = [](double, double) { return 0.0; };
  return p;
}

Problem2D point_sources_problem(std::size_t n, double c) {
  Problem2D p;
  p.name = "point_sources";
  p.domain = rectangle_domain(Box{0.0, 1.0, 0.0, 1.0},
                              {EdgeBc::dirichlet, EdgeBc::outflow, EdgeBc::periodic, EdgeBc::periodic});
  p.nx = n;
  p.ny = n;
  p.c = c;
  const double omega = 2.0 * pi * 4.0 * c;
  const double ramp = 2.0 * 2.0 * pi / omega;
  for (Point at : {Point{0.3141592653589793, 0.4142135623730951}, Point{0.6180339887498949, 0.7071067811865476}}) {
    PointSource2D s;
    s.at = at;
    s.signal.kind = SourceKind::point;
    s.signal.waveform = [=](double t) { return smooth_ramp(t, ramp) * std::sin(omega * t); };
    p.options.point_sources.push_back(s);
  }
  p.initial = [](double, double) { return 0.0; };
  return p;
}

Problem2D rectangle_problem(std::size_t nx, std::size_t ny, std::array<EdgeBc, 4> edges) {
  Problem2D p;
  p.name = "rectangle";
  p.domain = rectangle_domain(Box{0.0, 1.0, 0.0, 1.0}, edges);
  p.nx = nx;
  p.ny = ny;
  p.initial = [](double x, double y) {
    const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
    return std::exp(-r2 / 0.01);
  };
  return p;
}

SchemeChoice scheme_from_config(const RunConfig& cfg) {
  SchemeChoice s;
  s.cfl = cfg.cfl;
  s.beta = cfg.beta;
  s.epsilon = cfg.epsilon;
  s.variant = cfg.variant;
  s.tol = cfg.tol;
  s.max_iter = cfg.max_iter;
  s.averaging = cfg.averaging;
  s.correction = cfg.correction;
  return s;
}

SchemeParams scheme_params(const SchemeChoice& s, double c, double h) {
  Variant v = s.variant;
  if (v == Variant::dispersive && s.epsilon > 0.0) v = Variant::dissipative;
  return make_params(c, s.cfl * h / c, s.beta, s.epsilon, v);
}

void check_bounded(const std::vector<double>& u) {
  for (double v : u) {
    if (!std::isfinite(v) || std::abs(v) > 1e10) throw Error(ErrorCode::BlowUp, "solution exceeded 1e10");
  }
}

Run2D::Run2D(Problem2D problem, const SchemeChoice& scheme) : problem_(std::move(problem)) {
  mesh_ = std::make_unique<EmbeddedMesh>(build_mesh(problem_.domain, problem_.nx, problem_.ny));
  params_ = scheme_params(scheme, problem_.c, std::min(mesh_->dx, mesh_->dy));
  Stepper2DOptions opts = problem_.options;
  opts.tol = scheme.tol;
  opts.max_iter = scheme.max_iter;
  opts.averaging = scheme.averaging;
  opts.correction = scheme.correction;
  stepper_ = std::make_unique<Stepper2D>(*mesh_, params_, opts);
  hist_ = start_history_2d(*stepper_, problem_.initial, problem_.velocity, problem_.laplacian);
  u0_ = sample(*mesh_, problem_.initial);
  steps_ = params_.variant == Variant::diffusive ? 2 : 1;
}

void Run2D::step() {
  stepper_->step(hist_);
  ++steps_;
  const IterationStats& s = stepper_->last_stats();
  max_iter_ = std::max({max_iter_, s.x_iterations, s.y_iterations});
  max_ratio_ = std::max(max_ratio_, s.max_ratio);
  check_bounded(hist_.u_n);
}

void Run2D::advance_to(double t) {
  while (hist_.t_n + 0.5 * params_.dt <= t) step();
}

const Field& Run2D::field_near(double t) const {
  return std::abs(t) < 0.5 * params_.dt && std::abs(hist_.t_n - t) > 0.5 * params_.dt ? u0_ : hist_.u_n;
}

double Run2D::error(Norm norm) const {
  if (!problem_.exact) throw Error(ErrorCode::UnknownReference, "problem has no closed form");
  const double t = hist_.t_n;
  const ExactFn ex = problem_.exact;
  return grid_error(hist_.u_n, [&](double x, double y) { return ex(x, y, t); }, *mesh_, norm);
}

Problem1D sine_problem(std::size_t n, double c) {
  Problem1D p;
  p.name = "sine_1d";
  p.line = SweepLine::uniform(0.0, 1.0, n);
  p.closure = LineClosure::both(BcKind::dirichlet);
  p.c = c;
  p.initial = [](double x) { return std::sin(pi * x); };
  p.second_derivative = [](double x) { return -pi * pi * std::sin(pi * x); };
  p.exact = [c](double x, double t) { return std::sin(pi * x) * std::cos(pi * c * t); };
  return p;
}

Problem1D pulse_problem(double a, double b, std::size_t n, BcKind kind, double c) {
  Problem1D p;
  p.name = "outflow_1d";
  p.line = SweepLine::uniform(a, b, n, kind == BcKind::periodic);
  p.closure = LineClosure::both(kind);
  p.c = c;
  const auto f = [](double x) { return std::exp(-std::pow((x - 0.5) / 0.05, 2)); };
  p.initial = f;
  p.second_derivative = [](double x) {
    const double s = (x - 0.5) / 0.05;
    return std::exp(-s * s) * (4.0 * s * s - 2.0) / (0.05 * 0.05);
  };
  p.exact = [f, c](double x, double t) { return 0.5 * (f(x - c * t) + f(x + c * t)); };
  return p;
}

Run1D::Run1D(Problem1D problem, const SchemeChoice& scheme) : problem_(std::move(problem)) {
  params_ = scheme_params(scheme, problem_.c, problem_.line.h);
  stepper_ = std::make_unique<LineStepper>(problem_.line, problem_.closure, params_, problem_.sources);
  hist_ = start_history(problem_.line, stepper_->closure(), params_, problem_.initial, problem_.velocity,
                        problem_.second_derivative, problem_.sources);
  steps_ = params_.variant == Variant::diffusive ? 2 : 1;
}

void Run1D::step() {
  stepper_->step(hist_);
  ++steps_;
  check_bounded(hist_.u_n);
}

void Run1D::advance_to(double t) {
  while (hist_.t_n + 0.5 * params_.dt <= t) step();
}

double Run1D::error(Norm norm) const {
  if (!problem_.exact) throw Error(ErrorCode::UnknownReference, "problem has no closed form");
  std::vector<double> ref(problem_.line.nodes.size());
  for (std::size_t k = 0; k < ref.size(); ++k) ref[k] = problem_.exact(problem_.line.nodes[k], hist_.t_n);
  return grid_error_1d(hist_.u_n, ref, problem_.line.h, norm);
}

std::string RunReport::summary() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "steps %zu\nt %.17g\nmax_iterations %zu\nmax_abs %.17g\nl2_norm %.17g\n", steps, t,
                max_iterations, max_abs, l2_norm);
  std::string s = buf;
  if (error_l2 >= 0.0) {
    std::snprintf(buf, sizeof buf, "error_l2 %.17g\nerror_linf %.17g\n", error_l2, error_linf);
    s += buf;
  }
  return s;
}

namespace {

std::size_t default_n(const RunConfig& cfg) {
  if (cfg.nx != 0) return cfg.nx;
  static const std::map<std::string, std::size_t> d{
      {"sine_1d", 100},       {"outflow_1d", 200},    {"double_circle", 150}, {"bessel_dirichlet", 100},
      {"quarter_circle", 50}, {"bessel_neumann", 100}, {"slit_grating", 200},  {"point_sources", 128},
      {"rectangle", 64}};
  return d.at(cfg.scenario);
}

double default_t_final(const RunConfig& cfg) {
  if (cfg.t_final > 0.0) return cfg.t_final;
  if (cfg.scenario == "double_circle") return 0.29;
  if (cfg.scenario == "point_sources") return 1.5;
  return 1.0;
}

double default_radius(const RunConfig& cfg) {
  if (cfg.radius > 0.0) return cfg.radius;
  return cfg.scenario == "double_circle" ? 0.3 : pi / 2.0;
}

Problem2D make_problem_2d(const RunConfig& cfg, std::size_t n) {
  const std::string& s = cfg.scenario;
  if (s == "double_circle") return double_circle_problem(n, default_radius(cfg), cfg.gamma);
  if (s == "bessel_dirichlet") return bessel_problem(n, false, default_radius(cfg));
  if (s == "bessel_neumann") return bessel_problem(n, true, default_radius(cfg));
  if (s == "quarter_circle") return quarter_circle_problem(n, default_radius(cfg));
  if (s == "slit_grating") return slit_grating_problem(n, cfg.aperture, cfg.period, cfg.ly, cfg.c);
  if (s == "point_sources") return point_sources_problem(n, cfg.c);
  if (s == "rectangle") {
    const std::size_t ny = cfg.ny != 0 && cfg.nx != 0 ? cfg.ny * n / cfg.nx : n;
    return rectangle_problem(n, ny, cfg.edges);
  }
  throw Error(ErrorCode::InvalidValue, "scenario '" + s + "' is not two-dimensional");
}

Problem1D make_problem_1d(const RunConfig& cfg, std::size_t n) {
  if (cfg.scenario == "sine_1d") return sine_problem(n, cfg.c);
  return pulse_problem(0.0, 1.0, n, BcKind::outflow, cfg.c);
}

std::string time_tag(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

std::vector<double> snapshot_times(const RunConfig& cfg, double t_final) {
  std::vector<double> ts = cfg.snapshot_times;
  if (ts.empty()) {
    if (cfg.scenario == "quarter_circle") {
      ts = {0.25, 0.5, 0.75, 1.0};
    } else {
      ts = {t_final};
    }
  }
  std::sort(ts.begin(), ts.end());
  return ts;
}

double max_abs(const std::vector<double>& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

RunReport run_scenario(const RunConfig& cfg, std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory '" + cfg.output_dir + "'");
  const auto path = [&](const std::string& file) { return (std::filesystem::path(cfg.output_dir) / file).string(); };
  const SchemeChoice scheme = scheme_from_config(cfg);
  const double t_final = default_t_final(cfg);
  const std::vector<double> times = snapshot_times(cfg, t_final);
  const std::size_t n = default_n(cfg);
  RunReport rep;

  if (cfg.is_1d()) {
    Run1D run(make_problem_1d(cfg, n), scheme);
    for (double ts : times) {
      run.advance_to(ts);
      const std::string f = path(cfg.scenario + "_t" + time_tag(ts) + ".csv");
      write_snapshot_1d(run.history().u_n, run.problem().line, f);
      rep.files.push_back(f);
    }
    run.advance_to(t_final);
    rep.steps = run.steps();
    rep.t = run.t();
    rep.max_abs = max_abs(run.history().u_n);
    rep.l2_norm = grid_error_1d(run.history().u_n, std::vector<double>(run.history().u_n.size(), 0.0),
                                run.problem().line.h, Norm::L2);
    rep.error_l2 = run.error(Norm::L2);
    rep.error_linf = run.error(Norm::Linf);
  } else if (cfg.scenario == "quarter_circle") {
    const double R = default_radius(cfg);
    Run2D quarter(quarter_circle_problem(n, R), scheme);
    Run2D full(full_circle_problem(n, R), scheme);
    const EmbeddedMesh& qm = quarter.mesh();
    const EmbeddedMesh& fm = full.mesh();
    for (double ts : times) {
      quarter.advance_to(ts);
      full.advance_to(ts);
      Field on_quarter(qm.node_count(), 0.0);
      Field diff(qm.node_count(), 0.0);
      const Field& fu = full.field_near(ts);
      const Field& qu = quarter.field_near(ts);
      for (std::size_t j = 0; j <= qm.ny; ++j) {
        for (std::size_t i = 0; i <= qm.nx; ++i) {
          const std::size_t q = qm.id(i, j);
          on_quarter[q] = fu[fm.id(i, j + n)];
          diff[q] = qu[q] - on_quarter[q];
        }
      }
      for (const auto& [tag, field] : {std::pair<std::string, const Field*>{"quarter", &qu},
                                       {"full", &on_quarter}, {"difference", &diff}}) {
        const std::string f = path("quarter_circle_" + tag + "_t" + time_tag(ts) + ".csv");
        write_snapshot(*field, qm, f);
        rep.files.push_back(f);
      }
      if (log != nullptr) {
        *log << "t=" << time_tag(quarter.t()) << " quarter_error_linf=" << quarter.error(Norm::Linf)
             << " full_error_linf=" << full.error(Norm::Linf)
             << " difference_linf=" << grid_error(diff, Field(diff.size(), 0.0), qm, Norm::Linf) << "\n";
      }
    }
    quarter.advance_to(t_final);
    rep.steps = quarter.steps();
    rep.t = quarter.t();
    rep.max_abs = max_abs(quarter.history().u_n);
    rep.l2_norm = grid_error(quarter.history().u_n, Field(qm.node_count(), 0.0), qm, Norm::L2);
    rep.error_l2 = quarter.error(Norm::L2);
    rep.error_linf = quarter.error(Norm::Linf);
  } else {
    Run2D run(make_problem_2d(cfg, n), scheme);
    for (double ts : times) {
      run.advance_to(ts);
      const std::string f = path(cfg.scenario + "_t" + time_tag(ts) + ".csv");
      write_snapshot(run.field_near(ts), run.mesh(), f);
      rep.files.push_back(f);
    }
    run.advance_to(t_final);
    rep.steps = run.steps();
    rep.t = run.t();
    rep.max_iterations = run.max_iterations();
    rep.max_abs = max_abs(run.history().u_n);
    rep.l2_norm = grid_error(run.history().u_n, Field(run.mesh().node_count(), 0.0), run.mesh(), Norm::L2);
    if (run.problem().exact) {
      rep.error_l2 = run.error(Norm::L2);
      rep.error_linf = run.error(Norm::Linf);
    }
  }
  const std::string summary = path(cfg.scenario + "_summary.txt");
  std::FILE* f = std::fopen(summary.c_str(), "w");
  if (f == nullptr) throw Error(ErrorCode::IoError, "cannot write '" + summary + "'");
  std::fputs(("scenario " + cfg.scenario + "\n" + rep.summary()).c_str(), f);
  std::fclose(f);
  rep.files.push_back(summary);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

RefinementReport self_convergence_2d(const std::function<Problem2D(std::size_t)>& make, std::size_t n0,
                                     std::size_t levels, const SchemeChoice& scheme, ErrorWindow window,
                                     std::ostream* log) {
  if (levels < 2) throw Error(ErrorCode::InvalidValue, "a refinement study needs at least two levels");
  std::vector<std::unique_ptr<Run2D>> runs;
  for (std::size_t l = 0; l < levels; ++l) runs.push_back(std::make_unique<Run2D>(make(n0 << l), scheme));
  const double tol = 1e-9;
  const auto in_window = [&](double t) { return t >= window.t0 - tol && t <= window.t1 + tol; };
  // stored[l][coarse step] = reference restricted to level l
  std::vector<std::map<std::size_t, Field>> stored(levels);
  {
    Run2D ref(make(n0 << levels), scheme);
    const double t_end = window.t1 + tol;
    const auto capture = [&] {
      const std::size_t s = ref.steps();
      for (std::size_t l = 0; l < levels; ++l) {
        const std::size_t r = std::size_t{1} << (levels - l);
        if (s % r != 0) continue;
        const double tc = static_cast<double>(s / r) * runs[l]->dt();
        if (in_window(tc)) stored[l][s / r] = restrict_to(ref.history().u_n, ref.mesh(), runs[l]->mesh());
      }
    };
    capture();
    while (static_cast<double>(ref.steps() + 1) * ref.dt() <= t_end) {
      ref.step();
      capture();
    }
    if (log != nullptr) *log << "reference n=" << (n0 << levels) << " steps=" << ref.steps() << "\n";
  }
  std::vector<RefinementLevel> lv;
  std::vector<double> l2;
  std::vector<double> linf;
  for (std::size_t l = 0; l < levels; ++l) {
    Run2D& run = *runs[l];
    double e2 = 0.0;
    double ei = 0.0;
    const auto measure = [&] {
      const auto it = stored[l].find(run.steps());
      if (it == stored[l].end()) return;
      e2 = std::max(e2, grid_error(run.history().u_n, it->second, run.mesh(), Norm::L2));
      ei = std::max(ei, grid_error(run.history().u_n, it->second, run.mesh(), Norm::Linf));
    };
    measure();
    while (static_cast<double>(run.steps() + 1) * run.dt() <= window.t1 + tol) {
      run.step();
      measure();
    }
    if (stored[l].empty()) throw Error(ErrorCode::InsufficientSteps, "no time level falls in the error window");
    lv.push_back({run.mesh().dx, run.mesh().dy, run.dt()});
    l2.push_back(e2);
    linf.push_back(ei);
    if (log != nullptr) *log << "level n=" << (n0 << l) << " l2=" << e2 << " linf=" << ei << "\n";
    runs[l].reset();
  }
  return make_report(std::move(lv), std::move(l2), std::move(linf));
}

RefinementReport run_convergence(const RunConfig& cfg, std::size_t levels, std::ostream* log) {
  if (levels < 2) throw Error(ErrorCode::InvalidValue, "a refinement study needs at least two levels");
  const SchemeChoice scheme = scheme_from_config(cfg);
  const double t_final = default_t_final(cfg);
  const std::size_t n0 = default_n(cfg);
  std::vector<RefinementLevel> lv;
  std::vector<double> l2;
  std::vector<double> linf;
  if (cfg.is_1d()) {
    for (std::size_t l = 0; l < levels; ++l) {
      Run1D run(make_problem_1d(cfg, n0 << l), scheme);
      run.advance_to(t_final);
      lv.push_back({run.problem().line.h, 0.0, run.dt()});
      l2.push_back(run.error(Norm::L2));
      linf.push_back(run.error(Norm::Linf));
    }
    return make_report(lv, l2, linf);
  }
  const bool analytic = cfg.scenario == "bessel_dirichlet" || cfg.scenario == "bessel_neumann" ||
                        cfg.scenario == "quarter_circle";
  if (analytic) {
    for (std::size_t l = 0; l < levels; ++l) {
      Run2D run(make_problem_2d(cfg, n0 << l), scheme);
      run.advance_to(t_final);
      lv.push_back({run.mesh().dx, run.mesh().dy, run.dt()});
      l2.push_back(run.error(Norm::L2));
      linf.push_back(run.error(Norm::Linf));
      if (log != nullptr) *log << "level n=" << (n0 << l) << " l2=" << l2.back() << " linf=" << linf.back() << "\n";
    }
    return make_report(lv, l2, linf);
  }
  ErrorWindow window;
  if (cfg.scenario == "double_circle" && cfg.t_final == 0.0) {
    window = {0.28, 0.29};
  } else {
    const Run2D probe(make_problem_2d(cfg, n0), scheme);
    const double t = std::round(t_final / probe.dt()) * probe.dt();
    window = {t, t};
  }
  return self_convergence_2d([&](std::size_t n) { return make_problem_2d(cfg, n); }, n0, levels, scheme, window, log);
}

}  // namespace molt
