#include "molt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "molt/errors.hpp"
#include "molt/stepper1d.hpp"

namespace molt {

namespace {

double combine(double acc, double diff, Norm norm) {
  return norm == Norm::L2 ? acc + diff * diff : std::max(acc, std::abs(diff));
}

}  // namespace

double grid_error(const Field& numeric, const Field& reference, const EmbeddedMesh& mesh, Norm norm) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t id = 0; id < mesh.node_count(); ++id) {
    if (mesh.kind[id] != NodeKind::interior) continue;
    acc = combine(acc, numeric[id] - reference[id], norm);
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::EmptyInterior, "no interior nodes to measure");
  return norm == Norm::L2 ? std::sqrt(acc * mesh.dx * mesh.dy) : acc;
}

double grid_error(const Field& numeric, const Field2Fn& reference, const EmbeddedMesh& mesh, Norm norm) {
  return grid_error(numeric, sample(mesh, reference), mesh, norm);
}

double grid_error_1d(const std::vector<double>& numeric, const std::vector<double>& reference, double h, Norm norm) {
  if (numeric.empty() || numeric.size() != reference.size()) {
    throw Error(ErrorCode::EmptyInterior, "fields are empty or differ in size");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < numeric.size(); ++k) acc = combine(acc, numeric[k] - reference[k], norm);
  return norm == Norm::L2 ? std::sqrt(acc * h) : acc;
}

Field restrict_to(const Field& fine, const EmbeddedMesh& fm, const EmbeddedMesh& cm) {
  const std::size_t rx = fm.nx / cm.nx;
  const std::size_t ry = fm.ny / cm.ny;
  if (rx * cm.nx != fm.nx || ry * cm.ny != fm.ny || rx == 0 || ry == 0) {
    throw Error(ErrorCode::InvalidValue, "meshes are not nested");
  }
  Field out(cm.node_count(), 0.0);
  for (std::size_t j = 0; j <= cm.ny; ++j) {
    for (std::size_t i = 0; i <= cm.nx; ++i) {
      const std::size_t c = cm.id(i, j);
      const std::size_t f = fm.id(i * rx, j * ry);
      if (cm.kind[c] == NodeKind::interior && fm.kind[f] != NodeKind::interior) {
        throw Error(ErrorCode::InvalidValue, "coarse interior node is not interior on the fine mesh");
      }
      out[c] = fine[f];
    }
  }
  return out;
}

std::vector<double> convergence_order(const std::vector<double>& errors, double ratio) {
  if (errors.size() < 2) throw Error(ErrorCode::NonPositiveError, "need at least two errors");
  for (double e : errors) {
    if (!(e > 0.0)) throw Error(ErrorCode::NonPositiveError, "errors must be positive");
  }
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) out.push_back(std::log(errors[k] / errors[k + 1]) / std::log(ratio));
  return out;
}

namespace {

// Power series of J_nu for nu = 0, 1 in extended precision.
double bessel_series(int nu, double xd) {
  const long double x = xd;
  const long double q = -x * x / 4.0L;
  long double term = nu == 0 ? 1.0L : x / 2.0L;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + nu));
    sum += term;
    if (std::abs(term) < 1e-22L * std::max(1.0L, std::abs(sum))) break;
  }
  return static_cast<double>(sum);
}

// Hankel asymptotic expansion for large |x|.
double bessel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  const double z = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (static_cast<double>(k) * z);
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      p += ((k / 2) % 2 == 1 ? -1.0 : 1.0) * term;
    }
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel(int nu, double x) {
  const double ax = std::abs(x);
  const double v = ax <= 20.0 ? bessel_series(nu, ax) : bessel_asymptotic(nu, ax);
  return (nu == 1 && x < 0.0) ? -v : v;
}

double bisect_zero(double (*fn)(double), double lo, double hi) {
  double flo = fn(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double nth_zero(double (*fn)(double), int k) {
  if (k < 1) throw Error(ErrorCode::InvalidValue, "zero index starts at 1");
  const double step = 0.05;
  double x = step;
  double fx = fn(x);
  int found = 0;
  while (true) {
    const double xn = x + step;
    const double fn_x = fn(xn);
    if ((fx < 0.0) != (fn_x < 0.0)) {
      if (++found == k) return bisect_zero(fn, x, xn);
    }
    x = xn;
    fx = fn_x;
  }
}

}  // namespace

double bessel_j0(double x) { return bessel(0, x); }
double bessel_j1(double x) { return bessel(1, x); }
double bessel_j0_zero(int k) { return nth_zero(&bessel_j0, k); }
double bessel_j0_prime_zero(int k) { return nth_zero(&bessel_j1, k); }

double reference_solution(const std::string& name, Point p, double t, const ReferenceParams& rp) {
  if (name == "bessel_dirichlet" || name == "bessel_neumann") {
    static const double z2 = bessel_j0_zero(2);
    static const double z0 = bessel_j0_prime_zero(1);
    const double z = name == "bessel_dirichlet" ? z2 : z0;
    const double r = std::hypot(p.x, p.y);
    return bessel_j0(z * r / rp.radius) * std::cos(z * rp.c * t / rp.radius);
  }
  if (name == "plane_wave") return std::cos(rp.k * (p.x - rp.c * t));
  if (name == "sine_1d") return std::sin(std::numbers::pi * p.x) * std::cos(std::numbers::pi * rp.c * t);
  throw Error(ErrorCode::UnknownReference, "unknown reference solution '" + name + "'");
}

double damping_from_projections(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 4 || a.size() != b.size()) {
    throw Error(ErrorCode::InsufficientSteps, "damping fit needs at least four steps");
  }
  // Normal equations for [a_n, -a_{n-1}] [p q]^T = a_{n+1}, stacked over both projections.
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, r1 = 0.0, r2 = 0.0;
  for (const auto* s : {&a, &b}) {
    for (std::size_t n = 1; n + 1 < s->size(); ++n) {
      const double x1 = (*s)[n];
      const double x2 = -(*s)[n - 1];
      const double y = (*s)[n + 1];
      s11 += x1 * x1;
      s12 += x1 * x2;
      s22 += x2 * x2;
      r1 += x1 * y;
      r2 += x2 * y;
    }
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 0.0)) throw Error(ErrorCode::InsufficientSteps, "damping fit is degenerate");
  return (s11 * r2 - s12 * r1) / det;
}

double measure_damping(const DampingRun& run) {
  if (run.steps < 4) throw Error(ErrorCode::InsufficientSteps, "damping run needs at least four steps");
  const SweepLine line = SweepLine::uniform(0.0, run.length, run.cells, true);
  const double k = 2.0 * std::numbers::pi * static_cast<double>(run.mode) / run.length;
  LineClosure closure = LineClosure::both(BcKind::periodic);
  LineStepper stepper(line, closure, run.params);
  FieldHistory hist;
  const std::size_t n = line.nodes.size();
  hist.u_nm1.resize(n);
  hist.u_n.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    hist.u_nm1[j] = std::cos(k * line.nodes[j]);
    hist.u_n[j] = std::cos(k * line.nodes[j]) + 0.5 * std::sin(k * line.nodes[j]);
  }
  hist.u_nm2 = hist.u_nm1;
  std::vector<double> pc;
  std::vector<double> ps;
  const auto project = [&](const std::vector<double>& u) {
    double c = 0.0, s = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      c += u[j] * std::cos(k * line.nodes[j]);
      s += u[j] * std::sin(k * line.nodes[j]);
    }
    pc.push_back(c);
    ps.push_back(s);
  };
  project(hist.u_nm1);
  project(hist.u_n);
  for (std::size_t s = 0; s < run.steps; ++s) {
    stepper.step(hist);
    project(hist.u_n);
  }
  return damping_from_projections(pc, ps);
}

double predicted_damping(double k, double alpha, double epsilon) {
  const double r = k * k / (k * k + alpha * alpha);
  return 1.0 - r * r * epsilon;
}

RefinementReport make_report(std::vector<RefinementLevel> levels, std::vector<double> l2, std::vector<double> linf) {
  RefinementReport r;
  r.levels = std::move(levels);
  r.l2 = std::move(l2);
  r.linf = std::move(linf);
  if (r.l2.size() >= 2) r.l2_orders = convergence_order(r.l2);
  if (r.linf.size() >= 2) r.linf_orders = convergence_order(r.linf);
  return r;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string RefinementReport::to_text() const {
  std::string out = "level          dx          dy          dt    L2 error   L2 order  Linf error Linf order\n";
  for (std::size_t k = 0; k < l2.size(); ++k) {
    const RefinementLevel lv = k < levels.size() ? levels[k] : RefinementLevel{};
    out += fmt("%5.0f", static_cast<double>(k)) + fmt(" %11.4e", lv.dx) + fmt(" %11.4e", lv.dy) + fmt(" %11.4e", lv.dt);
    out += fmt(" %11.4e", l2[k]);
    out += k > 0 && k - 1 < l2_orders.size() ? fmt(" %10.4f", l2_orders[k - 1]) : std::string(11, ' ');
    out += k < linf.size() ? fmt(" %11.4e", linf[k]) : std::string(12, ' ');
    out += k > 0 && k - 1 < linf_orders.size() ? fmt(" %10.4f", linf_orders[k - 1]) : std::string(11, ' ');
    out += "\n";
  }
  return out;
}

std::string RefinementReport::to_csv() const {
  std::string out = "level,dx,dy,dt,l2_error,l2_order,linf_error,linf_order\n";
  for (std::size_t k = 0; k < l2.size(); ++k) {
    const RefinementLevel lv = k < levels.size() ? levels[k] : RefinementLevel{};
    out += std::to_string(k) + fmt(",%.17g", lv.dx) + fmt(",%.17g", lv.dy) + fmt(",%.17g", lv.dt) + fmt(",%.17g", l2[k]);
    out += k > 0 && k - 1 < l2_orders.size() ? fmt(",%.17g", l2_orders[k - 1]) : std::string(",");
    out += k < linf.size() ? fmt(",%.17g", linf[k]) : std::string(",");
    out += k > 0 && k - 1 < linf_orders.size() ? fmt(",%.17g", linf_orders[k - 1]) : std::string(",");
    out += "\n";
  }
  return out;
}

}  // namespace molt
