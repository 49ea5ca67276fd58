#pragma once

#include <string>
#include <vector>

namespace molt {

enum class Variant { dispersive, diffusive, dissipative };

const char* to_string(Variant v) noexcept;
Variant variant_from_string(const std::string& name);

/// Time-step parameters shared by every stepper.
///
/// For the diffusive variant beta is stored as sqrt(2) so that
/// alpha = beta / (c dt) holds for all variants.
struct SchemeParams {
  double c = 1.0;
  double dt = 0.0;
  double beta = 2.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  Variant variant = Variant::dispersive;
};

/// Largest admissible beta for the variant (0 for diffusive, where beta is fixed).
double max_beta(Variant variant, double epsilon);

SchemeParams make_params(double c, double dt, double beta, double epsilon, Variant variant);

/// Solution values at the retained time levels.
struct FieldHistory {
  std::vector<double> u_n;
  std::vector<double> u_nm1;
  std::vector<double> u_nm2;
  double t_n = 0.0;

  /// Push a new level: n+1 becomes n and the oldest level is dropped.
  void advance(std::vector<double> next, double dt);
};

}  // namespace molt
