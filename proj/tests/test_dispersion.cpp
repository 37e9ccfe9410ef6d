#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracle.hpp"
#include "t2x/dispersion.hpp"
#include "t2x/errors.hpp"
#include "t2x/units.hpp"

using namespace t2x;

namespace {

Crystal default_crystal() { return Crystal(CrystalConfig{}); }

} // namespace

TEST_CASE("BBO indices at the pump and signal wavelengths") {
  const auto m = materials::bbo();
  CHECK(refractive_index(m, Polarization::ordinary, 1.064) == doctest::Approx(1.6545).epsilon(1e-4));
  CHECK(refractive_index(m, Polarization::ordinary, 0.532) == doctest::Approx(1.6742).epsilon(1e-4));
  for (double l : {0.45, 0.8, 1.064, 1.7}) {
    CHECK(refractive_index(m, Polarization::ordinary, l) == doctest::Approx(std::sqrt(oracle::no2(l))).epsilon(1e-15));
    CHECK(refractive_index(m, Polarization::extraordinary_principal, l) ==
          doctest::Approx(std::sqrt(oracle::ne2(l))).epsilon(1e-15));
  }
}

TEST_CASE("index ellipse limits are exact") {
  const auto m = materials::bbo();
  const double l = 0.532;
  CHECK(refractive_index(m, Polarization::extraordinary_at_angle, l, 0.0) ==
        refractive_index(m, Polarization::ordinary, l));
  CHECK(refractive_index(m, Polarization::extraordinary_at_angle, l, units::pi / 2) ==
        refractive_index(m, Polarization::extraordinary_principal, l));
  CHECK_THROWS_AS(refractive_index(m, Polarization::extraordinary_at_angle, l), DomainError);
}

TEST_CASE("wavelengths outside the validated range are rejected") {
  const auto m = materials::bbo();
  CHECK_THROWS_AS(refractive_index(m, Polarization::ordinary, 0.2), DomainError);
  CHECK_THROWS_AS(refractive_index(m, Polarization::ordinary, 3.0), DomainError);
}

TEST_CASE("cut angle matches the closed-form index-ellipse solution") {
  const auto m = materials::bbo();
  const double th = phase_matching_angle(m, 0.532, 1.064);
  CHECK(th == doctest::Approx(oracle::cut_angle(0.532, 1.064)).epsilon(1e-10));
  CHECK(units::deg(th) == doctest::Approx(22.8).epsilon(0.3 / 22.8));

  const Crystal c = default_crystal();
  CHECK(std::abs(c.collinear_residual()) < 1e-6);
}

TEST_CASE("positive uniaxial material is not phase-matchable") {
  auto m = materials::bbo();
  m.extraordinary = m.ordinary;
  m.extraordinary.b1 += 0.1;
  CHECK_THROWS_WITH_AS(phase_matching_angle(m, 0.532, 1.064), doctest::Contains("not phase-matchable"), DomainError);
}

TEST_CASE("k derivatives agree with numerical differentiation of the raw Sellmeier") {
  const Crystal c = default_crystal();
  const auto d = dispersion_derivatives(c);
  const double ws = units::omega_of_wavelength(1.064);
  CHECK(d.k0 == doctest::Approx(oracle::k_o(ws)).epsilon(1e-13));
  CHECK(d.k0_prime == doctest::Approx(oracle::d1(oracle::k_o, ws, 1e-3)).epsilon(1e-9));
  CHECK(d.k0_double_prime == doctest::Approx(oracle::d2(oracle::k_o, ws, 1e-2)).epsilon(1e-6));
  CHECK(d.fd_relative_difference < 1e-6);
}

TEST_CASE("characteristic scales") {
  const auto s = characteristic_scales(default_crystal());
  CHECK(units::to_rad_per_mm(s.q0) == doctest::Approx(44.0).epsilon(0.03));
  CHECK(units::to_rad_per_ps(s.Omega0) == doctest::Approx(69.0).epsilon(0.05));

  CrystalConfig longer;
  longer.length_um = 20000.0;
  const auto l = characteristic_scales(Crystal(longer));
  CHECK(l.q0 == doctest::Approx(0.5 * s.q0).epsilon(1e-12));
  CHECK(l.Omega0 == doctest::Approx(0.5 * s.Omega0).epsilon(1e-12));
}

TEST_CASE("wavevector_z") {
  const Crystal c = default_crystal();
  const double k = c.k_signal(0.0);
  CHECK(c.wavevector_z(Field::signal, 0.0, 0.0) == k);
  CHECK(c.wavevector_z(Field::signal, 0.3 * k, 0.0) == doctest::Approx(k * std::sqrt(1 - 0.09)).epsilon(1e-14));
  CHECK_THROWS_AS(c.wavevector_z(Field::signal, 1.01 * k, 0.0), DomainError);
}

TEST_CASE("material table parse and format round trip") {
  const auto m = materials::bbo();
  CHECK(parse_material(format_material(m)) == m);
  CHECK(load_material(std::string(T2X_DATA_DIR) + "/materials/bbo.txt") == m);
  CHECK_THROWS_AS(parse_material("name = x\nordinary = 1 2 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_material("name = x\nordinary = 2.7 0.01 0.01 0.01\n"), ConfigError);
  CHECK_THROWS_AS(parse_material("name = x\nweird = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_material("/nonexistent/table.txt"), IoError);
}

TEST_CASE("crystal config validation") {
  CrystalConfig cc;
  cc.length_um = -1.0;
  CHECK_THROWS_AS(Crystal{cc}, ConfigError);
  cc = {};
  cc.cut_angle_rad = units::rad(95.0);
  CHECK_THROWS_AS(Crystal{cc}, ConfigError);
}
