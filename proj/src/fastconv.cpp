#include "molt/fastconv.hpp"

#include <cmath>
#include <string>

#include "molt/errors.hpp"

namespace molt {

SweepLine SweepLine::uniform(double a, double b, std::size_t cells, bool periodic) {
  if (cells < 1 || !(b > a)) throw Error(ErrorCode::DegenerateLine, "uniform line needs b > a and cells >= 1");
  SweepLine line;
  line.h = (b - a) / static_cast<double>(cells);
  line.periodic = periodic;
  line.nodes.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) line.nodes[i] = a + line.h * static_cast<double>(i);
  line.nodes.back() = b;
  return line;
}

void validate_line(const SweepLine& line) {
  if (line.nodes.size() < 2) throw Error(ErrorCode::DegenerateLine, "line needs at least two nodes");
  if (!(line.h > 0.0)) throw Error(ErrorCode::DegenerateLine, "line spacing must be positive");
  if (line.periodic && line.nodes.size() < 3) {
    throw Error(ErrorCode::DegenerateLine, "periodic line needs at least two cells");
  }
  for (std::size_t i = 1; i < line.nodes.size(); ++i) {
    if (!(line.nodes[i] > line.nodes[i - 1])) {
      throw Error(ErrorCode::DegenerateLine, "line nodes must be strictly increasing");
    }
  }
}

std::array<double, 3> kernel_moments(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::NonPositiveNu, "nu must be positive");
  std::array<double, 3> m{};
  if (nu < 0.5) {
    for (int k = 0; k < 3; ++k) {
      double term = 1.0;  // (-nu)^i / i!
      double sum = 0.0;
      for (int i = 0; i < 30; ++i) {
        sum += term / static_cast<double>(k + i + 1);
        term *= -nu / static_cast<double>(i + 1);
      }
      m[k] = nu * sum;
    }
    return m;
  }
  const double d = std::exp(-nu);
  const double one_minus_d = -std::expm1(-nu);
  m[0] = one_minus_d;
  m[1] = one_minus_d / nu - d;
  m[2] = 2.0 * one_minus_d / (nu * nu) - 2.0 * d / nu - d;
  return m;
}

LocalWeights local_weights(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::NonPositiveNu, "nu must be positive");
  LocalWeights w;
  if (nu < 0.5) {
    const auto m = kernel_moments(nu);
    w.P = m[0] - m[1];
    w.Q = m[1];
    w.R = 0.5 * (m[2] - m[1]);
    return w;
  }
  const double d = std::exp(-nu);
  w.P = 1.0 - (1.0 - d) / nu;
  w.Q = -d + (1.0 - d) / nu;
  w.R = (1.0 - d) / (nu * nu) - (1.0 + d) / (2.0 * nu);
  return w;
}

namespace {

struct Accum {
  std::array<std::size_t, 4> idx{};
  std::array<double, 4> w{};
  std::size_t n = 0;

  void add(std::size_t i, double v) {
    for (std::size_t k = 0; k < n; ++k) {
      if (idx[k] == i) {
        w[k] += v;
        return;
      }
    }
    idx[n] = i;
    w[n] = v;
    ++n;
  }
};

class RuleBuilder {
 public:
  RuleBuilder(const SweepLine& line, double alpha) : line_(line), alpha_(alpha), m_(line.cells()) {}

  double width(std::size_t c) const { return line_.nodes[c] - line_.nodes[c - 1]; }

  bool regular(std::size_t c) const {
    return c >= 1 && c <= m_ && std::abs(width(c) - line_.h) <= 1e-8 * line_.h;
  }

  bool standard(std::size_t c) const {
    return regular(c) && c + 1 <= m_ && regular(c + 1) && c >= 2 && regular(c - 1);
  }

  /// Left-looking integral at node c over cell c.
  Accum left(std::size_t c) const { return build(c, c - 1, true); }
  /// Right-looking integral at node c-1 over cell c.
  Accum right(std::size_t c) const { return build(c - 1, c, false); }

 private:
  struct Center {
    std::size_t k, km, kp;
  };

  bool center_at(std::size_t k, Center& out) const {
    if (k >= 1 && k + 1 <= m_ && regular(k) && regular(k + 1)) {
      out = {k, k - 1, k + 1};
      return true;
    }
    if (!line_.periodic) return false;
    if (k == 0 && regular(1) && regular(m_)) {
      out = {0, m_ - 1, 1};
      return true;
    }
    if (k == m_ && regular(m_) && regular(1)) {
      out = {m_, m_ - 1, 1};
      return true;
    }
    return false;
  }

  Accum build(std::size_t near, std::size_t far, bool left_looking) const {
    const std::size_t c = left_looking ? near : far;
    Accum acc;
    Center ctr{};
    const bool have_ctr = regular(c) && (center_at(near, ctr) || center_at(far, ctr));
    if (!have_ctr) {
      const auto m = kernel_moments(alpha_ * width(c));
      acc.add(near, 0.5 * (m[0] - m[1]));
      acc.add(far, 0.5 * m[1]);
      return acc;
    }
    const LocalWeights lw = local_weights(alpha_ * line_.h);
    acc.add(near, 0.5 * lw.P);
    acc.add(far, 0.5 * lw.Q);
    acc.add(ctr.km, 0.5 * lw.R);
    acc.add(ctr.k, -lw.R);
    acc.add(ctr.kp, 0.5 * lw.R);
    return acc;
  }

  const SweepLine& line_;
  double alpha_;
  std::size_t m_;
};

}  // namespace

ConvolutionPlan::ConvolutionPlan(const SweepLine& line, double alpha) {
  validate_line(line);
  if (!(alpha > 0.0)) throw Error(ErrorCode::NonPositiveNu, "alpha must be positive");
  n_ = line.nodes.size();
  alpha_ = alpha;
  a_ = line.a();
  b_ = line.b();
  mu_ = std::exp(-alpha * (b_ - a_));
  d_ = std::exp(-alpha * line.h);
  const LocalWeights lw = local_weights(alpha * line.h);
  wl_ = {0.5 * (lw.P - 2.0 * lw.R), 0.5 * (lw.Q + lw.R), 0.5 * lw.R};

  RuleBuilder rb(line, alpha);
  const std::size_t m = line.cells();
  for (std::size_t c = 1; c <= m; ++c) {
    if (rb.standard(c)) continue;
    CellRule rule;
    rule.cell = c;
    const Accum l = rb.left(c);
    const Accum r = rb.right(c);
    for (std::size_t k = 0; k < 4; ++k) {
      rule.l_idx[k] = k < l.n ? l.idx[k] : c;
      rule.l_w[k] = k < l.n ? l.w[k] : 0.0;
      rule.r_idx[k] = k < r.n ? r.idx[k] : c;
      rule.r_w[k] = k < r.n ? r.w[k] : 0.0;
    }
    rule.decay = std::exp(-alpha * rb.width(c));
    special_.push_back(rule);
  }
}

namespace {

inline double dot4(const std::array<std::size_t, 4>& idx, const std::array<double, 4>& w, const double* f) {
  return w[0] * f[idx[0]] + w[1] * f[idx[1]] + w[2] * f[idx[2]] + w[3] * f[idx[3]];
}

}  // namespace

void ConvolutionPlan::apply_split(const double* f, double* il, double* ir) const {
  const std::size_t m = n_ - 1;
  double acc = 0.0;
  il[0] = 0.0;
  std::size_t s = 0;
  for (std::size_t c = 1; c <= m; ++c) {
    if (s < special_.size() && special_[s].cell == c) {
      const CellRule& r = special_[s++];
      acc = r.decay * acc + dot4(r.l_idx, r.l_w, f);
    } else {
      acc = d_ * acc + jl_regular(f, c);
    }
    il[c] = acc;
  }
  acc = 0.0;
  ir[m] = 0.0;
  std::size_t t = special_.size();
  for (std::size_t c = m; c >= 1; --c) {
    if (t > 0 && special_[t - 1].cell == c) {
      const CellRule& r = special_[--t];
      acc = r.decay * acc + dot4(r.r_idx, r.r_w, f);
    } else {
      acc = d_ * acc + jr_regular(f, c);
    }
    ir[c - 1] = acc;
  }
}

void ConvolutionPlan::apply(const double* f, double* out) const {
  const std::size_t m = n_ - 1;
  double acc = 0.0;
  out[0] = 0.0;
  std::size_t s = 0;
  for (std::size_t c = 1; c <= m; ++c) {
    if (s < special_.size() && special_[s].cell == c) {
      const CellRule& r = special_[s++];
      acc = r.decay * acc + dot4(r.l_idx, r.l_w, f);
    } else {
      acc = d_ * acc + jl_regular(f, c);
    }
    out[c] = acc;
  }
  acc = 0.0;
  std::size_t t = special_.size();
  for (std::size_t c = m; c >= 1; --c) {
    if (t > 0 && special_[t - 1].cell == c) {
      const CellRule& r = special_[--t];
      acc = r.decay * acc + dot4(r.r_idx, r.r_w, f);
    } else {
      acc = d_ * acc + jr_regular(f, c);
    }
    out[c - 1] += acc;
  }
}

void ConvolutionPlan::local(const double* f, double* jl, double* jr) const {
  const std::size_t m = n_ - 1;
  jl[0] = 0.0;
  jr[m] = 0.0;
  std::size_t s = 0;
  for (std::size_t c = 1; c <= m; ++c) {
    if (s < special_.size() && special_[s].cell == c) {
      const CellRule& r = special_[s++];
      jl[c] = dot4(r.l_idx, r.l_w, f);
      jr[c - 1] = dot4(r.r_idx, r.r_w, f);
    } else {
      jl[c] = jl_regular(f, c);
      jr[c - 1] = jr_regular(f, c);
    }
  }
}

void ConvolutionPlan::homogeneous(std::vector<double>& from_a, std::vector<double>& from_b) const {
  const std::size_t m = n_ - 1;
  from_a.assign(n_, 1.0);
  from_b.assign(n_, 1.0);
  std::size_t s = 0;
  for (std::size_t c = 1; c <= m; ++c) {
    double dec = d_;
    if (s < special_.size() && special_[s].cell == c) dec = special_[s++].decay;
    from_a[c] = from_a[c - 1] * dec;
  }
  std::size_t t = special_.size();
  for (std::size_t c = m; c >= 1; --c) {
    double dec = d_;
    if (t > 0 && special_[t - 1].cell == c) dec = special_[--t].decay;
    from_b[c - 1] = from_b[c] * dec;
  }
}

void ConvolutionPlan::add_homogeneous(double A, double B, double* v) const {
  const std::size_t m = n_ - 1;
  double e = 1.0;
  v[0] += A;
  std::size_t s = 0;
  for (std::size_t c = 1; c <= m; ++c) {
    double dec = d_;
    if (s < special_.size() && special_[s].cell == c) dec = special_[s++].decay;
    e *= dec;
    v[c] += A * e;
  }
  e = 1.0;
  v[m] += B;
  std::size_t t = special_.size();
  for (std::size_t c = m; c >= 1; --c) {
    double dec = d_;
    if (t > 0 && special_[t - 1].cell == c) dec = special_[--t].decay;
    e *= dec;
    v[c - 1] += B * e;
  }
}

LocalIntegrals local_integrals(std::span<const double> f, const SweepLine& line, double alpha) {
  const ConvolutionPlan plan(line, alpha);
  if (f.size() != plan.size()) throw Error(ErrorCode::DegenerateLine, "field size does not match line");
  LocalIntegrals out;
  out.J_L.assign(plan.size(), 0.0);
  out.J_R.assign(plan.size(), 0.0);
  plan.local(f.data(), out.J_L.data(), out.J_R.data());
  return out;
}

ConvResult fast_convolve(std::span<const double> f, const SweepLine& line, double alpha) {
  const ConvolutionPlan plan(line, alpha);
  if (f.size() != plan.size()) throw Error(ErrorCode::DegenerateLine, "field size does not match line");
  ConvResult res;
  res.I_L.assign(plan.size(), 0.0);
  res.I_R.assign(plan.size(), 0.0);
  plan.apply_split(f.data(), res.I_L.data(), res.I_R.data());
  res.I.resize(plan.size());
  for (std::size_t j = 0; j < plan.size(); ++j) res.I[j] = res.I_L[j] + res.I_R[j];
  res.mu = plan.mu();
  return res;
}

ConvResult fast_convolve(std::span<const double> f, const SchemeParams& params, const SweepLine& line) {
  return fast_convolve(f, line, params.alpha);
}

ConvResult direct_convolve(std::span<const double> f, const SweepLine& line, double alpha) {
  const LocalIntegrals j = local_integrals(f, line, alpha);
  const std::size_t n = line.nodes.size();
  const auto& x = line.nodes;
  ConvResult res;
  res.I_L.assign(n, 0.0);
  res.I_R.assign(n, 0.0);
  res.I.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double left = 0.0;
    for (std::size_t c = 1; c <= i; ++c) left += j.J_L[c] * std::exp(-alpha * (x[i] - x[c]));
    double right = 0.0;
    for (std::size_t c = i; c + 1 < n; ++c) right += j.J_R[c] * std::exp(-alpha * (x[c] - x[i]));
    res.I_L[i] = left;
    res.I_R[i] = right;
    res.I[i] = left + right;
  }
  res.mu = std::exp(-alpha * (line.b() - line.a()));
  return res;
}

ConvResult direct_convolve(std::span<const double> f, const SchemeParams& params, const SweepLine& line) {
  return direct_convolve(f, line, params.alpha);
}

}  // namespace molt
