#include "molt/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "molt/errors.hpp"

namespace molt {

const char* to_string(EdgeBc bc) noexcept {
  switch (bc) {
    case EdgeBc::none: return "none";
    case EdgeBc::dirichlet: return "dirichlet";
    case EdgeBc::neumann: return "neumann";
    case EdgeBc::periodic: return "periodic";
    case EdgeBc::outflow: return "outflow";
  }
  return "unknown";
}

DomainSpec circle_domain(double radius, Box bbox, bool neumann) {
  DomainSpec d;
  d.name = "circle";
  d.bbox = bbox;
  const double r2 = radius * radius;
  d.level_set = [r2](double x, double y) { return x * x + y * y - r2; };
  d.gradient = [](double x, double y) { return Point{2.0 * x, 2.0 * y}; };
  d.curved_neumann = neumann;
  return d;
}

DomainSpec double_circle_domain(double radius, double gamma, Box bbox) {
  DomainSpec d;
  d.name = "double_circle";
  d.bbox = bbox;
  const double r2 = radius * radius;
  d.level_set = [r2, gamma](double x, double y) {
    const double c1 = (x - gamma) * (x - gamma) + y * y - r2;
    const double c2 = (x + gamma) * (x + gamma) + y * y - r2;
    return std::min(c1, c2);
  };
  d.gradient = [gamma](double x, double y) {
    const double cx = x >= 0.0 ? gamma : -gamma;
    return Point{2.0 * (x - cx), 2.0 * y};
  };
  return d;
}

DomainSpec quarter_circle_domain(double radius) {
  DomainSpec d;
  d.name = "quarter_circle";
  d.bbox = {-radius, 0.0, 0.0, radius};
  const double r2 = radius * radius;
  d.level_set = [r2](double x, double y) { return x * x + y * y - r2; };
  d.gradient = [](double x, double y) { return Point{2.0 * x, 2.0 * y}; };
  d.edges = {EdgeBc::none, EdgeBc::neumann, EdgeBc::neumann, EdgeBc::none};
  return d;
}

DomainSpec rectangle_domain(Box bbox, std::array<EdgeBc, 4> edges) {
  DomainSpec d;
  d.name = "rectangle";
  d.bbox = bbox;
  d.edges = edges;
  for (EdgeBc e : edges) {
    if (e == EdgeBc::none) throw Error(ErrorCode::IncompatibleBC, "rectangle edges need a boundary condition");
  }
  return d;
}

DomainSpec slit_grating_domain(double aperture, double period, double ly) {
  DomainSpec d;
  d.name = "slit_grating";
  d.bbox = {-0.5 * period, 0.5 * period, -0.5 * ly, 0.5 * ly};
  d.edges = {EdgeBc::periodic, EdgeBc::periodic, EdgeBc::outflow, EdgeBc::outflow};
  d.screens.push_back({0.0, -0.5 * aperture, 0.5 * aperture});
  return d;
}

std::size_t EmbeddedMesh::interior_count() const {
  return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), NodeKind::interior));
}

Point bisect_boundary(const LevelSet& level_set, Point inside, Point outside) {
  double f_in = level_set(inside.x, inside.y);
  double f_out = level_set(outside.x, outside.y);
  if (!(f_in < 0.0) || !(f_out >= 0.0)) {
    throw Error(ErrorCode::TangentIntersection, "boundary crossing is not bracketed");
  }
  if (f_out == 0.0) return outside;
  Point lo = inside;
  Point hi = outside;
  for (int it = 0; it < 200; ++it) {
    const double len = std::hypot(hi.x - lo.x, hi.y - lo.y);
    if (len <= 1e-13) break;
    const Point mid{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    const double fm = level_set(mid.x, mid.y);
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
      if (fm == 0.0) break;
    }
  }
  return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
}

namespace {

struct Builder {
  const DomainSpec& dom;
  EmbeddedMesh& mesh;

  bool blocked_between_rows(std::size_t i, std::size_t j) const {
    const double x = mesh.x(i);
    const double ya = mesh.y(j);
    const double yb = mesh.y(j + 1);
    for (const Screen& s : dom.screens) {
      if (s.y > ya && s.y < yb && s.blocks(x)) return true;
    }
    return false;
  }

  double screen_between_rows(std::size_t i, std::size_t j) const {
    const double x = mesh.x(i);
    for (const Screen& s : dom.screens) {
      if (s.y > mesh.y(j) && s.y < mesh.y(j + 1) && s.blocks(x)) return s.y;
    }
    return 0.0;
  }

  // Node at position k along an axis-aligned grid line.
  std::size_t node_on(int axis, std::size_t fixed, std::size_t k) const {
    return axis == 0 ? mesh.id(k, fixed) : mesh.id(fixed, k);
  }

  double coord(int axis, std::size_t k) const { return axis == 0 ? mesh.x(k) : mesh.y(k); }

  LineEnd end_before(int axis, std::size_t fixed, std::size_t k_in, std::size_t k_out, bool past_edge,
                     Edge edge, bool& extra_point, std::size_t& extra_id) const {
    LineEnd end;
    extra_point = false;
    extra_id = no_node;
    if (past_edge) {
      end.type = EndType::edge;
      end.bc = dom.edges[edge];
      end.pos = coord(axis, k_in);
      if (end.bc == EdgeBc::none || end.bc == EdgeBc::dirichlet) {
        throw Error(ErrorCode::IncompatibleBC,
                    std::string("domain reaches the ") + (axis == 0 ? "x" : "y") + " edge without a usable condition");
      }
      return end;
    }
    extra_point = true;
    const std::size_t out_id = node_on(axis, fixed, k_out);
    if (axis == 1) {
      const std::size_t jlo = std::min(k_in, k_out);
      if (blocked_between_rows(fixed, jlo)) {
        end.type = EndType::screen;
        end.bc = EdgeBc::dirichlet;
        end.pos = screen_between_rows(fixed, jlo);
        return end;
      }
    }
    if (mesh.kind[out_id] == NodeKind::boundary) {
      end.type = EndType::data_node;
      end.bc = EdgeBc::dirichlet;
      end.pos = coord(axis, k_out);
      extra_id = out_id;
      return end;
    }
    if (dom.curved_neumann) {
      end.type = EndType::ghost;
      end.bc = EdgeBc::neumann;
      end.pos = coord(axis, k_out);
      extra_id = out_id;
      return end;
    }
    const Point pin = mesh.node_point(node_on(axis, fixed, k_in));
    const Point pout = mesh.node_point(out_id);
    const Point b = bisect_boundary(dom.level_set, pin, pout);
    end.type = EndType::curve;
    end.bc = EdgeBc::dirichlet;
    end.pos = axis == 0 ? b.x : b.y;
    return end;
  }

  bool cut(int axis, std::size_t fixed, std::size_t k) const {
    return axis == 1 && blocked_between_rows(fixed, k);
  }

  // Returns run lengths too short for embedded Neumann stencils.
  std::vector<std::size_t> build_lines(int axis, std::size_t min_run) {
    std::vector<MeshLine>& out = axis == 0 ? mesh.x_lines : mesh.y_lines;
    out.clear();
    std::vector<std::size_t> short_runs;
    const std::size_t nk = axis == 0 ? mesh.nx : mesh.ny;
    const std::size_t nf = axis == 0 ? mesh.ny : mesh.nx;
    const double h = axis == 0 ? mesh.dx : mesh.dy;
    const Edge lo_edge = axis == 0 ? edge_left : edge_bottom;
    const Edge hi_edge = axis == 0 ? edge_right : edge_top;
    for (std::size_t f = 0; f <= nf; ++f) {
      std::size_t k = 0;
      while (k <= nk) {
        if (mesh.kind[node_on(axis, f, k)] != NodeKind::interior) {
          ++k;
          continue;
        }
        const std::size_t start = k;
        while (k + 1 <= nk && mesh.kind[node_on(axis, f, k + 1)] == NodeKind::interior && !cut(axis, f, k)) ++k;
        const std::size_t stop = k;
        ++k;
        if (dom.curved_neumann && stop - start + 1 < min_run) {
          for (std::size_t q = start; q <= stop; ++q) short_runs.push_back(node_on(axis, f, q));
          continue;
        }
        MeshLine line;
        line.axis = axis;
        line.fixed_index = f;
        line.fixed = axis == 0 ? mesh.y(f) : mesh.x(f);
        bool lo_extra = false, hi_extra = false;
        std::size_t lo_id = no_node, hi_id = no_node;
        line.lo = end_before(axis, f, start, start == 0 ? 0 : start - 1, start == 0, lo_edge, lo_extra, lo_id);
        line.hi = end_before(axis, f, stop, stop == nk ? nk : stop + 1, stop == nk, hi_edge, hi_extra, hi_id);
        std::vector<double> pts;
        if (lo_extra) {
          pts.push_back(line.lo.pos);
          line.ids.push_back(lo_id);
        }
        for (std::size_t q = start; q <= stop; ++q) {
          pts.push_back(coord(axis, q));
          line.ids.push_back(node_on(axis, f, q));
        }
        if (hi_extra) {
          pts.push_back(line.hi.pos);
          line.ids.push_back(hi_id);
        }
        const bool periodic = line.lo.type == EndType::edge && line.hi.type == EndType::edge &&
                              line.lo.bc == EdgeBc::periodic && line.hi.bc == EdgeBc::periodic;
        if ((line.lo.bc == EdgeBc::periodic) != (line.hi.bc == EdgeBc::periodic)) {
          throw Error(ErrorCode::IncompatibleBC, "periodic edges must come in opposite pairs");
        }
        line.geom = SweepLine{std::move(pts), h, periodic};
        validate_line(line.geom);
        out.push_back(std::move(line));
      }
    }
    return short_runs;
  }
};

}  // namespace

EmbeddedMesh build_mesh(const DomainSpec& domain, std::size_t nx, std::size_t ny, MeshOptions options) {
  if (nx < 2 || ny < 2) throw Error(ErrorCode::NoInteriorNodes, "mesh needs at least two cells per direction");
  if (domain.curved_neumann && !domain.level_set) {
    throw Error(ErrorCode::IncompatibleBC, "embedded Neumann needs a level set");
  }
  EmbeddedMesh mesh;
  mesh.domain = domain;
  mesh.bbox = domain.bbox;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.dx = (domain.bbox.x1 - domain.bbox.x0) / static_cast<double>(nx);
  mesh.dy = (domain.bbox.y1 - domain.bbox.y0) / static_cast<double>(ny);
  mesh.kind.assign(mesh.node_count(), NodeKind::exterior);

  for (std::size_t j = 0; j <= ny; ++j) {
    for (std::size_t i = 0; i <= nx; ++i) {
      const double x = mesh.x(i);
      const double y = mesh.y(j);
      if (domain.level_set && !(domain.level_set(x, y) < 0.0)) continue;
      EdgeBc edge_bc = EdgeBc::none;
      bool on_edge = false;
      const auto touch = [&](bool on, Edge e) {
        if (!on) return;
        on_edge = true;
        if (domain.edges[e] == EdgeBc::dirichlet || edge_bc == EdgeBc::none) edge_bc = domain.edges[e];
      };
      touch(i == 0, edge_left);
      touch(i == nx, edge_right);
      touch(j == 0, edge_bottom);
      touch(j == ny, edge_top);
      bool on_screen = false;
      for (const Screen& s : domain.screens) on_screen = on_screen || (y == s.y && s.blocks(x));
      if (on_screen || (on_edge && edge_bc == EdgeBc::dirichlet)) {
        mesh.kind[mesh.id(i, j)] = NodeKind::boundary;
      } else if (on_edge && edge_bc == EdgeBc::none) {
        throw Error(ErrorCode::IncompatibleBC, "domain is not strictly inside the bounding box");
      } else {
        mesh.kind[mesh.id(i, j)] = NodeKind::interior;
      }
    }
  }

  Builder b{domain, mesh};
  for (int pass = 0; pass < 1000; ++pass) {
    std::vector<std::size_t> demote = b.build_lines(0, options.min_run);
    const std::vector<std::size_t> demote_y = b.build_lines(1, options.min_run);
    demote.insert(demote.end(), demote_y.begin(), demote_y.end());
    if (demote.empty()) break;
    for (std::size_t id : demote) {
      if (mesh.kind[id] == NodeKind::interior) {
        mesh.kind[id] = NodeKind::exterior;
        mesh.merged_nodes.push_back(id);
      }
    }
  }
  std::sort(mesh.merged_nodes.begin(), mesh.merged_nodes.end());
  if (mesh.interior_count() == 0) throw Error(ErrorCode::NoInteriorNodes, "no interior nodes");

  const auto is_interior = [&](std::size_t i, std::size_t j) { return mesh.kind[mesh.id(i, j)] == NodeKind::interior; };
  for (std::size_t j = 0; j <= ny; ++j) {
    for (std::size_t i = 0; i <= nx; ++i) {
      if (mesh.kind[mesh.id(i, j)] != NodeKind::exterior) continue;
      const bool adj = (i > 0 && is_interior(i - 1, j)) || (i < nx && is_interior(i + 1, j)) ||
                       (j > 0 && is_interior(i, j - 1)) || (j < ny && is_interior(i, j + 1));
      if (adj) mesh.kind[mesh.id(i, j)] = NodeKind::ghost;
    }
  }

  mesh.x_line_of.assign(mesh.node_count(), -1);
  mesh.y_line_of.assign(mesh.node_count(), -1);
  for (int axis = 0; axis < 2; ++axis) {
    auto& owner = axis == 0 ? mesh.x_line_of : mesh.y_line_of;
    const auto& lines = mesh.lines(axis);
    for (std::size_t l = 0; l < lines.size(); ++l) {
      for (std::size_t id : lines[l].ids) {
        if (id != no_node && mesh.kind[id] == NodeKind::interior) owner[id] = static_cast<std::int32_t>(l);
      }
    }
  }
  return mesh;
}

EmbeddedMesh build_mesh(const LevelSet& level_set, Box bbox, std::size_t nx, std::size_t ny) {
  DomainSpec d;
  d.name = "level_set";
  d.bbox = bbox;
  d.level_set = level_set;
  return build_mesh(d, nx, ny);
}

std::array<double, 4> bilinear_weights(Point p, double xi, double yj, double dx, double dy) {
  const double tol = 1e-12;
  const double sx = (p.x - xi) / dx;
  const double sy = (p.y - yj) / dy;
  if (sx < -tol || sx > 1.0 + tol || sy < -tol || sy > 1.0 + tol) {
    throw Error(ErrorCode::PointOutsideCell, "interpolation point outside cell");
  }
  const double xs = std::clamp(sx, 0.0, 1.0);
  const double ys = std::clamp(sy, 0.0, 1.0);
  return {(1.0 - xs) * (1.0 - ys), xs * (1.0 - ys), xs * ys, (1.0 - xs) * ys};
}

double GhostStencil::apply(const std::vector<double>& u) const {
  double vi = 0.0;
  double vii = 0.0;
  for (int q = 0; q < 4; ++q) {
    vi += interp_I.w[q] * u[interp_I.nodes[q]];
    vii += interp_II.w[q] * u[interp_II.nodes[q]];
  }
  return gamma_I * vi + gamma_II * vii;
}

Point level_set_normal(const DomainSpec& domain, Point p, double step) {
  Point g;
  if (domain.gradient) {
    g = domain.gradient(p.x, p.y);
  } else {
    const auto& c = domain.level_set;
    g.x = (c(p.x + step, p.y) - c(p.x - step, p.y)) / (2.0 * step);
    g.y = (c(p.x, p.y + step) - c(p.x, p.y - step)) / (2.0 * step);
  }
  const double n = std::hypot(g.x, g.y);
  if (!(n > 0.0)) throw Error(ErrorCode::TangentIntersection, "level set gradient vanishes");
  return {g.x / n, g.y / n};
}

namespace {

InterpCell make_cell(const EmbeddedMesh& mesh, Point p) {
  const double fx = (p.x - mesh.bbox.x0) / mesh.dx;
  const double fy = (p.y - mesh.bbox.y0) / mesh.dy;
  if (fx < 0.0 || fy < 0.0 || fx > static_cast<double>(mesh.nx) || fy > static_cast<double>(mesh.ny)) {
    throw Error(ErrorCode::StencilNotInterior, "interpolation point outside the grid");
  }
  const std::size_t i = std::min(static_cast<std::size_t>(fx), mesh.nx - 1);
  const std::size_t j = std::min(static_cast<std::size_t>(fy), mesh.ny - 1);
  InterpCell cell;
  cell.nodes = {mesh.id(i, j), mesh.id(i + 1, j), mesh.id(i + 1, j + 1), mesh.id(i, j + 1)};
  for (std::size_t n : cell.nodes) {
    if (mesh.kind[n] != NodeKind::interior) {
      throw Error(ErrorCode::StencilNotInterior, "interpolation cell touches a non-interior node");
    }
  }
  cell.w = bilinear_weights(p, mesh.x(i), mesh.y(j), mesh.dx, mesh.dy);
  return cell;
}

// Foot of the normal from g onto the zero set, by repeated root-finding along the local normal.
Point closest_boundary_point(const DomainSpec& dom, Point g, double h) {
  const auto& c = dom.level_set;
  Point p = g;
  for (int outer = 0; outer < 50; ++outer) {
    const Point n = level_set_normal(dom, p, h / 100.0);
    const auto along = [&](double s) { return c(g.x - s * n.x, g.y - s * n.y); };
    double lo = 0.0;
    double hi = 0.0;
    bool found = along(0.0) <= 0.0;
    for (int k = 1; k <= 64 && !found; ++k) {
      hi = 0.25 * h * k;
      if (along(hi) < 0.0) {
        found = true;
      } else {
        lo = hi;
      }
    }
    if (!found) throw Error(ErrorCode::TangentIntersection, "no boundary crossing along the normal");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * h; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (along(mid) >= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double s = 0.5 * (lo + hi);
    const Point next{g.x - s * n.x, g.y - s * n.y};
    const double moved = std::hypot(next.x - p.x, next.y - p.y);
    p = next;
    if (moved < 1e-14 * h) break;
  }
  return p;
}

}  // namespace

std::vector<GhostStencil> build_ghost_stencils(const EmbeddedMesh& mesh, double ds_I) {
  if (!mesh.domain.level_set) throw Error(ErrorCode::IncompatibleBC, "ghost stencils need a level set");
  const double ds = ds_I > 0.0 ? ds_I : std::sqrt(2.0) * mesh.dx;
  std::vector<GhostStencil> out;
  for (std::size_t id = 0; id < mesh.node_count(); ++id) {
    if (mesh.kind[id] != NodeKind::ghost) continue;
    GhostStencil s;
    s.ghost = id;
    const Point g = mesh.node_point(id);
    s.boundary_pt = closest_boundary_point(mesh.domain, g, mesh.dx);
    s.normal = level_set_normal(mesh.domain, s.boundary_pt, mesh.dx / 100.0);
    s.xi_G = std::hypot(g.x - s.boundary_pt.x, g.y - s.boundary_pt.y);
    s.xi_I = ds;
    s.xi_II = 2.0 * ds;
    const double den = s.xi_II * s.xi_II - s.xi_I * s.xi_I;
    s.gamma_I = (s.xi_II * s.xi_II - s.xi_G * s.xi_G) / den;
    s.gamma_II = (s.xi_G * s.xi_G - s.xi_I * s.xi_I) / den;
    s.p_I = {s.boundary_pt.x - s.xi_I * s.normal.x, s.boundary_pt.y - s.xi_I * s.normal.y};
    s.p_II = {s.boundary_pt.x - s.xi_II * s.normal.x, s.boundary_pt.y - s.xi_II * s.normal.y};
    s.interp_I = make_cell(mesh, s.p_I);
    s.interp_II = make_cell(mesh, s.p_II);
    out.push_back(s);
  }
  return out;
}

}  // namespace molt
