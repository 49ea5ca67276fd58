#include "molt/core.hpp"

#include <cmath>
#include <string>

#include "molt/errors.hpp"

namespace molt {

const char* to_string(Variant v) noexcept {
  switch (v) {
    case Variant::dispersive: return "dispersive";
    case Variant::diffusive: return "diffusive";
    case Variant::dissipative: return "dissipative";
  }
  return "unknown";
}

Variant variant_from_string(const std::string& name) {
  if (name == "dispersive") return Variant::dispersive;
  if (name == "diffusive") return Variant::diffusive;
  if (name == "dissipative") return Variant::dissipative;
  throw Error(ErrorCode::InvalidValue, "unknown variant '" + name + "'");
}

double max_beta(Variant variant, double epsilon) {
  switch (variant) {
    case Variant::dispersive: return 2.0;
    case Variant::dissipative: return std::sqrt(2.0 + 2.0 * std::sqrt(1.0 - epsilon));
    case Variant::diffusive: return 0.0;
  }
  return 0.0;
}

SchemeParams make_params(double c, double dt, double beta, double epsilon, Variant variant) {
  if (!(c > 0.0) || !(dt > 0.0) || !std::isfinite(c) || !std::isfinite(dt)) {
    throw Error(ErrorCode::NonPositiveStep, "wave speed and time step must be positive");
  }
  if (!(epsilon >= 0.0) || !(epsilon < 1.0)) {
    throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must lie in [0, 1)");
  }
  SchemeParams p;
  p.c = c;
  p.dt = dt;
  p.epsilon = epsilon;
  p.variant = variant;
  if (variant == Variant::diffusive) {
    p.beta = std::sqrt(2.0);
  } else {
    const double bound = max_beta(variant, epsilon);
    if (!(beta > 0.0) || beta > bound * (1.0 + 1e-14)) {
      throw Error(ErrorCode::BetaOutOfRange,
                  "beta=" + std::to_string(beta) + " outside (0, " + std::to_string(bound) + "]");
    }
    p.beta = beta;
  }
  p.alpha = p.beta / (c * dt);
  return p;
}

void FieldHistory::advance(std::vector<double> next, double dt) {
  u_nm2 = std::move(u_nm1);
  u_nm1 = std::move(u_n);
  u_n = std::move(next);
  t_n += dt;
}

}  // namespace molt
