#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "molt/core.hpp"

namespace molt {

/// One grid line a = x_0 < x_1 < ... < x_M = b.
///
/// Interior cells have width h; the first and last cells may be shorter when
/// the line ends on an embedded boundary point. A periodic line stores both
/// x_0 and x_M, and the field values there are expected to agree.
struct SweepLine {
  std::vector<double> nodes;
  double h = 0.0;
  bool periodic = false;

  double a() const { return nodes.front(); }
  double b() const { return nodes.back(); }
  double h_left() const { return nodes[1] - nodes[0]; }
  double h_right() const { return nodes[nodes.size() - 1] - nodes[nodes.size() - 2]; }
  std::size_t cells() const { return nodes.size() - 1; }

  static SweepLine uniform(double a, double b, std::size_t cells, bool periodic = false);
};

/// Throws DegenerateLine unless nodes are strictly increasing and h > 0.
void validate_line(const SweepLine& line);

struct LocalWeights {
  double P = 0.0;
  double Q = 0.0;
  double R = 0.0;
};

/// Second-order weights for the unit-kernel local integral nu * int_0^1 f e^{-nu s} ds.
LocalWeights local_weights(double nu);

/// Moments nu * int_0^1 s^k e^{-nu s} ds for k = 0, 1, 2, accurate for small nu.
std::array<double, 3> kernel_moments(double nu);

struct LocalIntegrals {
  std::vector<double> J_L;  ///< J_L[0] = 0
  std::vector<double> J_R;  ///< J_R[M] = 0
};

LocalIntegrals local_integrals(std::span<const double> f, const SweepLine& line, double alpha);

struct ConvResult {
  std::vector<double> I;
  std::vector<double> I_L;
  std::vector<double> I_R;
  double mu = 0.0;
};

/// Precomputed quadrature and decay factors for one line and one alpha.
///
/// Cells whose stencil is the regular centered one share a single weight set;
/// only end cells carry their own rule.
class ConvolutionPlan {
 public:
  struct CellRule {
    std::size_t cell = 0;
    std::array<std::size_t, 4> l_idx{};
    std::array<double, 4> l_w{};
    std::array<std::size_t, 4> r_idx{};
    std::array<double, 4> r_w{};
    double decay = 0.0;
  };

  ConvolutionPlan() = default;
  ConvolutionPlan(const SweepLine& line, double alpha);

  std::size_t size() const { return n_; }
  double alpha() const { return alpha_; }
  double mu() const { return mu_; }
  double a() const { return a_; }
  double b() const { return b_; }

  /// I = I_L + I_R written to out (length size()).
  void apply(const double* f, double* out) const;
  void apply_split(const double* f, double* il, double* ir) const;

  /// e^{-alpha (x_j - a)} and e^{-alpha (b - x_j)} at every node.
  void homogeneous(std::vector<double>& from_a, std::vector<double>& from_b) const;

  /// v += A e^{-alpha (x_j - a)} + B e^{-alpha (b - x_j)}.
  void add_homogeneous(double A, double B, double* v) const;

  /// Local integrals assembled with the same rules as apply().
  void local(const double* f, double* jl, double* jr) const;

 private:
  double jl_regular(const double* f, std::size_t c) const {
    return wl_[0] * f[c] + wl_[1] * f[c - 1] + wl_[2] * f[c + 1];
  }
  double jr_regular(const double* f, std::size_t c) const {
    return wl_[0] * f[c - 1] + wl_[1] * f[c] + wl_[2] * f[c - 2];
  }

  std::size_t n_ = 0;
  double alpha_ = 0.0;
  double mu_ = 0.0;
  double a_ = 0.0;
  double b_ = 0.0;
  double d_ = 0.0;
  std::array<double, 3> wl_{};
  std::vector<CellRule> special_;
};

ConvResult fast_convolve(std::span<const double> f, const SweepLine& line, double alpha);
ConvResult fast_convolve(std::span<const double> f, const SchemeParams& params, const SweepLine& line);

/// Quadratic-cost oracle: sums the same local integrals with explicit attenuation.
ConvResult direct_convolve(std::span<const double> f, const SweepLine& line, double alpha);
ConvResult direct_convolve(std::span<const double> f, const SchemeParams& params, const SweepLine& line);

}  // namespace molt
