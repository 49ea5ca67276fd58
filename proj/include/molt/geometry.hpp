#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "molt/fastconv.hpp"

namespace molt {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Negative inside the domain, positive outside.
using LevelSet = std::function<double(double, double)>;
using Gradient = std::function<Point(double, double)>;

enum class EdgeBc { none, dirichlet, neumann, periodic, outflow };
enum Edge { edge_left = 0, edge_right = 1, edge_bottom = 2, edge_top = 3 };

const char* to_string(EdgeBc bc) noexcept;

/// Zero-thickness Dirichlet screen on the row y = const, open on (aperture_lo, aperture_hi).
struct Screen {
  double y = 0.0;
  double aperture_lo = 0.0;
  double aperture_hi = 0.0;

  bool blocks(double x) const { return x <= aperture_lo || x >= aperture_hi; }
};

struct Box {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

/// A bounding box with per-edge conditions, an optional curved boundary and screens.
struct DomainSpec {
  std::string name;
  Box bbox;
  LevelSet level_set;
  Gradient gradient;
  bool curved_neumann = false;
  std::array<EdgeBc, 4> edges{EdgeBc::none, EdgeBc::none, EdgeBc::none, EdgeBc::none};
  std::vector<Screen> screens;
};

DomainSpec circle_domain(double radius, Box bbox, bool neumann = false);
DomainSpec double_circle_domain(double radius, double gamma, Box bbox);
/// Second quadrant of a disc: Dirichlet arc, Neumann along both axes.
DomainSpec quarter_circle_domain(double radius);
DomainSpec rectangle_domain(Box bbox, std::array<EdgeBc, 4> edges);
/// Periodic in x on [-d/2, d/2], outflow at y = +-ly/2, screen on y = 0 with aperture a.
DomainSpec slit_grating_domain(double aperture, double period, double ly);

enum class NodeKind : std::uint8_t { interior, exterior, ghost, boundary };

inline constexpr std::size_t no_node = std::numeric_limits<std::size_t>::max();

/// How a mesh line terminates.
enum class EndType {
  curve,      ///< embedded Dirichlet point on the level set
  screen,     ///< embedded Dirichlet point on a screen
  data_node,  ///< grid node on a Dirichlet edge
  edge,       ///< the end node itself sits on a Neumann, periodic or outflow edge
  ghost,      ///< exterior ghost node of an embedded Neumann boundary
};

struct LineEnd {
  EndType type = EndType::curve;
  EdgeBc bc = EdgeBc::dirichlet;
  double pos = 0.0;
};

/// One x-line (axis 0, fixed y) or y-line (axis 1, fixed x).
struct MeshLine {
  int axis = 0;
  std::size_t fixed_index = 0;
  double fixed = 0.0;
  SweepLine geom;
  std::vector<std::size_t> ids;  ///< grid node per geom point, no_node for embedded points
  LineEnd lo;
  LineEnd hi;

  Point point(std::size_t k) const {
    return axis == 0 ? Point{geom.nodes[k], fixed} : Point{fixed, geom.nodes[k]};
  }
};

struct MeshOptions {
  /// Runs shorter than this are merged into the exterior (embedded Neumann only).
  std::size_t min_run = 3;
};

struct EmbeddedMesh {
  DomainSpec domain;
  Box bbox;
  std::size_t nx = 0;  ///< cells in x
  std::size_t ny = 0;  ///< cells in y
  double dx = 0.0;
  double dy = 0.0;
  std::vector<NodeKind> kind;
  std::vector<MeshLine> x_lines;
  std::vector<MeshLine> y_lines;
  std::vector<std::int32_t> x_line_of;  ///< per node, -1 if none
  std::vector<std::int32_t> y_line_of;
  std::vector<std::size_t> merged_nodes;  ///< nodes demoted from short runs

  std::size_t cols() const { return nx + 1; }
  std::size_t rows() const { return ny + 1; }
  std::size_t node_count() const { return cols() * rows(); }
  std::size_t id(std::size_t i, std::size_t j) const { return j * cols() + i; }
  std::size_t col_of(std::size_t id) const { return id % cols(); }
  std::size_t row_of(std::size_t id) const { return id / cols(); }
  double x(std::size_t i) const { return bbox.x0 + static_cast<double>(i) * dx; }
  double y(std::size_t j) const { return bbox.y0 + static_cast<double>(j) * dy; }
  Point node_point(std::size_t id) const { return {x(col_of(id)), y(row_of(id))}; }
  std::size_t interior_count() const;
  const std::vector<MeshLine>& lines(int axis) const { return axis == 0 ? x_lines : y_lines; }
};

/// Root of the level set on the segment from inside point p to outside point q, to 1e-13.
Point bisect_boundary(const LevelSet& level_set, Point inside, Point outside);

EmbeddedMesh build_mesh(const DomainSpec& domain, std::size_t nx, std::size_t ny, MeshOptions options = {});
EmbeddedMesh build_mesh(const LevelSet& level_set, Box bbox, std::size_t nx, std::size_t ny);

struct InterpCell {
  std::array<std::size_t, 4> nodes{};
  std::array<double, 4> w{};
};

/// Bilinear weights (w1..w4) for p inside the cell with lower-left corner (xi, yj).
std::array<double, 4> bilinear_weights(Point p, double xi, double yj, double dx, double dy);

struct GhostStencil {
  std::size_t ghost = 0;
  Point boundary_pt;
  Point normal;
  double xi_G = 0.0;
  double xi_I = 0.0;
  double xi_II = 0.0;
  double gamma_I = 0.0;
  double gamma_II = 0.0;
  Point p_I;
  Point p_II;
  InterpCell interp_I;
  InterpCell interp_II;

  double apply(const std::vector<double>& u) const;
};

/// Outward unit normal from the gradient (analytic if the domain has one).
Point level_set_normal(const DomainSpec& domain, Point p, double step);

/// One stencil per ghost node; ds_I <= 0 selects sqrt(2) dx.
std::vector<GhostStencil> build_ghost_stencils(const EmbeddedMesh& mesh, double ds_I = 0.0);

}  // namespace molt
