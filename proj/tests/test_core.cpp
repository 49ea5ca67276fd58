#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "molt/core.hpp"
#include "molt/errors.hpp"

using namespace molt;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidValue;
}

}  // namespace

TEST_CASE("alpha follows beta over c dt") {
  const SchemeParams p = make_params(1.0, 0.01, 2.0, 0.0, Variant::dispersive);
  CHECK(p.alpha == doctest::Approx(200.0).epsilon(1e-15));
  CHECK(p.beta == 2.0);
}

TEST_CASE("beta above two is rejected for the dispersive variant") {
  CHECK(code_of([] { make_params(1.0, 0.01, 2.1, 0.0, Variant::dispersive); }) == ErrorCode::BetaOutOfRange);
  CHECK_NOTHROW(make_params(1.0, 0.01, 2.0, 0.0, Variant::dispersive));
}

TEST_CASE("diffusive variant fixes alpha at sqrt(2) / (c dt)") {
  const SchemeParams p = make_params(1.0, 0.01, 7.0, 0.0, Variant::diffusive);
  CHECK(p.alpha == doctest::Approx(141.42135623730951).epsilon(1e-14));
  CHECK(p.beta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("dissipative beta bound") {
  CHECK(max_beta(Variant::dissipative, 0.19) == doctest::Approx(1.9493588689617927).epsilon(1e-14));
  CHECK(max_beta(Variant::dissipative, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(max_beta(Variant::dispersive, 0.3) == 2.0);
  CHECK_NOTHROW(make_params(1.0, 0.01, 1.949, 0.19, Variant::dissipative));
  CHECK(code_of([] { make_params(1.0, 0.01, 1.95, 0.19, Variant::dissipative); }) == ErrorCode::BetaOutOfRange);
}

TEST_CASE("non-positive step and epsilon range") {
  CHECK(code_of([] { make_params(1.0, 0.0, 2.0, 0.0, Variant::dispersive); }) == ErrorCode::NonPositiveStep);
  CHECK(code_of([] { make_params(-1.0, 0.1, 2.0, 0.0, Variant::dispersive); }) == ErrorCode::NonPositiveStep);
  CHECK(code_of([] { make_params(1.0, 0.1, 1.0, 1.0, Variant::dissipative); }) == ErrorCode::EpsilonOutOfRange);
  CHECK(code_of([] { make_params(1.0, 0.1, 1.0, -0.1, Variant::dissipative); }) == ErrorCode::EpsilonOutOfRange);
}

TEST_CASE("variant names round trip") {
  for (Variant v : {Variant::dispersive, Variant::diffusive, Variant::dissipative}) {
    CHECK(variant_from_string(to_string(v)) == v);
  }
  CHECK(code_of([] { variant_from_string("explicit"); }) == ErrorCode::InvalidValue);
}

TEST_CASE("history advance shifts levels") {
  FieldHistory h;
  h.u_nm2 = {0.0};
  h.u_nm1 = {1.0};
  h.u_n = {2.0};
  h.t_n = 1.0;
  h.advance({3.0}, 0.5);
  CHECK(h.u_n[0] == 3.0);
  CHECK(h.u_nm1[0] == 2.0);
  CHECK(h.u_nm2[0] == 1.0);
  CHECK(h.t_n == 1.5);
}

TEST_CASE("config errors are classified") {
  CHECK(is_config_error(ErrorCode::UnknownKey));
  CHECK(is_config_error(ErrorCode::BetaOutOfRange));
  CHECK_FALSE(is_config_error(ErrorCode::MaxIterExceeded));
  CHECK_FALSE(is_config_error(ErrorCode::BlowUp));
}
