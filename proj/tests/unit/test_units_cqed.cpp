#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phc/cqed.hpp"
#include "phc/error.hpp"
#include "phc/units.hpp"

using namespace phc;
using doctest::Approx;

TEST_SUITE("units_cqed") {

TEST_CASE("wavelength and frequency are inverse") {
  // c / 737 nm, written out from SI units.
  const double f = 299792458.0 / 737e-9 / 1e12;
  CHECK(wavelength_to_frequency({737.0}).thz == Approx(f).epsilon(1e-14));
  CHECK(frequency_to_wavelength(wavelength_to_frequency({512.5})).nm == Approx(512.5).epsilon(1e-14));
  CHECK_THROWS_AS(wavelength_to_frequency({-1.0}), DomainError);
  CHECK_THROWS_AS(frequency_to_wavelength({0.0}), DomainError);
}

TEST_CASE("q_to_kappa is the center frequency over Q") {
  const double nu_ghz = 299792458.0 / 737e-9 / 1e9;
  CHECK(q_to_kappa({1.8e5}, {737.0}).ghz == Approx(nu_ghz / 1.8e5).epsilon(1e-12));
  CHECK(q_to_kappa({8.4e4}, {737.0}).ghz == Approx(4.84).epsilon(0.003));
  CHECK(fwhm_to_q({737.0}, {0.01}).value == Approx(73700.0));
  // A small wavelength span maps to c dl / l^2.
  CHECK(wavelength_span_to_rate({737.0}, {0.4}).ghz == Approx(299792458.0 * 0.4e-9 / (737e-9 * 737e-9) / 1e9));
  CHECK_THROWS_AS(q_to_kappa({0.0}, {737.0}), DomainError);
}

TEST_CASE("Purcell factor from Q and V") {
  CHECK(purcell_ideal({1.2e5}, {0.5}) == Approx(3.0 / (4.0 * std::numbers::pi * std::numbers::pi) * 2.4e5));
  CHECK_THROWS_AS(purcell_ideal({1e5}, {0.0}), DomainError);
}

TEST_CASE("Purcell factor from lifetimes") {
  EmitterParams e;
  const double f = purcell_from_lifetimes({0.47}, {1.3}, e);
  CHECK(f == Approx((1.3 / 0.47 - 1.0) / (0.70 * 0.193)).epsilon(1e-14));
  CHECK(purcell_from_lifetimes({1.3}, {1.3}, e) == Approx(0.0));
  CHECK_THROWS_AS(purcell_from_lifetimes({1.4}, {1.3}, e), DomainError);
  e.debye_waller = 1.5;
  CHECK_THROWS_AS(validate(e), DomainError);
}

TEST_CASE("cooperativity") {
  CHECK(cooperativity({8.0}, {2.2}, {0.12}) == Approx(4.0 * 64.0 / (2.2 * 0.12)));
  CHECK(cooperativity({15.2}, {2.2}, {0.12}) == Approx(3500.6).epsilon(1e-4));
  CHECK_THROWS_AS(cooperativity({8.0}, {0.0}, {0.12}), DomainError);
}

TEST_CASE("coupling split satisfies the loss budget") {
  for (double r0 : {0.0, 0.046, 0.3, 0.9}) {
    for (auto regime : {CouplingRegime::Over, CouplingRegime::Under, CouplingRegime::Both}) {
      const CouplingBudget b = split_intrinsic_extrinsic(8.4e4, r0, regime);
      CHECK(1.0 / b.q_i + 1.0 / b.q_e == Approx(1.0 / 8.4e4).epsilon(1e-12));
      CHECK(b.kappa_i_fraction + b.kappa_e_fraction == Approx(1.0));
      // Reflection on resonance from the two rates.
      const double s = b.kappa_i_fraction - b.kappa_e_fraction;
      CHECK(s * s == Approx(r0).epsilon(1e-12));
    }
  }
  const CouplingBudget under = split_intrinsic_extrinsic(8.4e4, 0.046, CouplingRegime::Under);
  CHECK(under.kappa_i_fraction > under.kappa_e_fraction);
  CHECK(under.q_i < under.q_e);
  const CouplingBudget both = split_intrinsic_extrinsic(8.4e4, 0.046, CouplingRegime::Both);
  CHECK(both.interchangeable);
  CHECK(both.q_i > both.q_e);
  // Critical coupling.
  const CouplingBudget crit = split_intrinsic_extrinsic(1e4, 0.0, CouplingRegime::Over);
  CHECK(crit.q_i == Approx(2e4));
  CHECK(crit.q_e == Approx(2e4));
  CHECK_THROWS_AS(split_intrinsic_extrinsic(1e4, 1.5, CouplingRegime::Both), DomainError);
}

TEST_CASE("coupling efficiency and detuning rolloff") {
  CHECK(coupling_efficiency(0.4225, 1.0) == Approx(0.65));
  CHECK_THROWS_AS(coupling_efficiency(0.5, 0.4), CalibrationError);
  CHECK(detuning_enhancement(10.0, {1.0}, {2.0}) == Approx(5.0));
  CHECK(detuning_enhancement(10.0, {0.0}, {2.0}) == Approx(10.0));
}

TEST_CASE("cQED report from defaults and config") {
  const CqedReport d = make_cqed_report(default_cqed_inputs());
  CHECK(d.f_zpl == Approx(13.07).epsilon(0.01));
  CHECK(d.cooperativity == Approx(4.0 * 64.0 / (q_to_kappa({1.8e5}, {737.0}).ghz * 0.12)));
  CHECK(d.inputs.q_intrinsic.provenance == "default");
  CHECK_FALSE(to_text(d).empty());

  const CqedInputs in = cqed_inputs_from_json(Json{{"g_preset", "theoretical"}, {"contrast", 0.953}});
  CHECK(in.g_ghz.value == Approx(kIdealCouplingGhz));
  CHECK(in.r0.value == Approx(0.047));
  CHECK(in.r0.provenance.rfind("config", 0) == 0);
  CHECK_THROWS_AS(cqed_inputs_from_json(Json{{"r0", 0.1}, {"contrast", 0.9}}), ConfigError);
  CHECK_THROWS_AS(cqed_inputs_from_json(Json{{"q_loded", 1.0}}), ConfigError);
  const Json j = to_json(d);
  CHECK(j.contains("cooperativity"));
}

}  // TEST_SUITE
