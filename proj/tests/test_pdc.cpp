#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "t2x/config.hpp"
#include "t2x/errors.hpp"
#include "t2x/pdc.hpp"
#include "t2x/units.hpp"

using namespace t2x;

namespace {

const Biphoton& scenario() {
  static const Biphoton b = build_biphoton(RunConfig{});
  return b;
}

} // namespace

TEST_CASE("pump envelope") {
  PumpConfig p;
  CHECK(units::to_rad_per_ps(p.bandwidth()) == doctest::Approx(5.887).epsilon(1e-3));
  CHECK(p.bandwidth() * p.tau_fwhm_fs == doctest::Approx(std::sqrt(2 * std::log(2.0))).epsilon(1e-15));
  CHECK(pump_envelope(p, 0, 0) == cplx(1.0, 0.0));
  CHECK(pump_envelope(p, 0, 2 * p.bandwidth()).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(pump_envelope(p, 123.0, 0.0) == pump_envelope(p, -7.0, 0.0));

  p.waist_um = 100.0;
  CHECK(pump_envelope(p, 2.0 / 100.0, 0.0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  p.tau_fwhm_fs = -5.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("sinc branches join continuously") {
  const double x = 1e-4;
  CHECK(std::abs(sinc(std::nextafter(x, 0.0)) - std::sin(x) / x) < 1e-12);
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(oracle::pi) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("collinear mismatch vanishes and Phi(0) = 1") {
  const auto& b = scenario();
  CHECK(std::abs(b.delta_mismatch(0, 0, 0, 0) * b.crystal().length_um()) < 1e-6);
  const cplx phi = b.phase_matching_function(0, 0, 0, 0);
  CHECK(std::abs(phi - cplx(1.0, 0.0)) < 1e-6);
}

TEST_CASE("Delta*L follows the quadratic form near the origin") {
  // Normalized by the size of the two quadratic terms, since their
  // difference vanishes on the matched line.
  const auto& b = scenario();
  const auto& d = b.dispersion();
  const double L = b.crystal().length_um();
  double worst = 0.0;
  for (int i = -12; i <= 12; ++i) {
    for (int j = -12; j <= 12; ++j) {
      const double xq = 0.25 * i;
      const double xo = 0.25 * j;
      if (i == 0 && j == 0)
        continue;
      const double exact = b.delta_mismatch(xq * d.q0, xo * d.Omega0, -xq * d.q0, -xo * d.Omega0) * L;
      const double quad = xo * xo - xq * xq;
      worst = std::max(worst, std::abs(exact - quad) / (xo * xo + xq * xq));
    }
  }
  MESSAGE("worst normalized deviation within 3q0, 3Omega0: " << worst);
  CHECK(worst < 0.05);
}

TEST_CASE("first zero of Phi along Omega at q = 0") {
  const auto& b = scenario();
  const double W0 = b.dispersion().Omega0;
  const double z = oracle::bisect(
      [&](double w) { return std::sin(0.5 * b.delta_mismatch(0, w, 0, -w) * b.crystal().length_um()); }, 1.5 * W0,
      3.0 * W0);
  CHECK(z / W0 == doctest::Approx(std::sqrt(2 * oracle::pi)).epsilon(0.02));
}

TEST_CASE("|Phi| <= 1 and raw J swap symmetry on random points") {
  const auto& b = scenario();
  const auto& d = b.dispersion();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uq(-7 * d.q0, 7 * d.q0);
  std::uniform_real_distribution<double> uw(-7 * d.Omega0, 7 * d.Omega0);
  for (int n = 0; n < 500; ++n) {
    const double q1 = uq(rng), q2 = uq(rng), w1 = uw(rng), w2 = uw(rng);
    CHECK(std::abs(b.phase_matching_function(q1, w1, q2, w2)) <= 1.0 + 1e-15);
    const cplx a = b.jsaa(q1, w1, q2, w2, JsaaStage::raw);
    const cplx c = b.jsaa(q2, w2, q1, w1, JsaaStage::raw);
    CHECK(std::abs(a - c) <= 1e-15 * std::max(1.0, std::abs(a)));
    CHECK(std::abs(a) <= std::abs(pump_envelope(b.pump(), q1 + q2, w1 + w2)) * (1 + 1e-15));
  }
}

TEST_CASE("filter rectangle") {
  const auto& f = scenario().filter();
  CHECK(filter_transmission(f, f.q_c, f.Omega_c) == 1);
  CHECK(filter_transmission(f, f.q_c + 1.01 * f.delta_q, f.Omega_c) == 0);
  CHECK(filter_transmission(f, f.q_c + f.delta_q, 0.0) == 1);
  CHECK(filter_transmission(f, f.q_c, 2 * f.Omega_c) == 1);
  CHECK(filter_transmission(f, f.q_c, -1e-9) == 0);
  for (double q : {0.0, f.q_c, f.q_c + 2 * f.delta_q})
    CHECK(filter_transmission(f, q, 1.0) * filter_transmission(f, q, 1.0) == filter_transmission(f, q, 1.0));
}

TEST_CASE("filtered and propagated stages vanish outside the mirror band") {
  const auto& b = scenario();
  const auto& d = b.dispersion();
  CHECK(b.jsaa(1.0 * d.q0, d.Omega0, -1.0 * d.q0, -d.Omega0, JsaaStage::filtered) == cplx{});
  CHECK(b.jsaa(11.0 * d.q0, d.Omega0, -11.0 * d.q0, -d.Omega0, JsaaStage::propagated) == cplx{});
  const double q = 6 * d.q0, w = 6 * d.Omega0;
  const cplx raw = b.jsaa(q, w, -q, -w, JsaaStage::raw);
  CHECK(b.jsaa(q, w, -q, -w, JsaaStage::filtered) == raw);
  CHECK(std::abs(b.jsaa(q, w, -q, -w, JsaaStage::propagated)) == doctest::Approx(std::abs(raw)).epsilon(1e-14));
}

TEST_CASE("propagated phase carries the output-face factor") {
  const auto& b = scenario();
  const auto& d = b.dispersion();
  const auto& c = b.crystal();
  const double q1 = 5 * d.q0, w1 = 5.2 * d.Omega0, q2 = -5 * d.q0, w2 = -5.1 * d.Omega0;
  const double L = c.length_um();
  const cplx expect = b.jsaa(q1, w1, q2, w2, JsaaStage::filtered) *
                      std::polar(1.0, (c.wavevector_z(Field::signal, q1, w1) + c.wavevector_z(Field::signal, q2, w2)) * L);
  const cplx got = b.jsaa(q1, w1, q2, w2, JsaaStage::propagated);
  // The phases are ~1e5 rad; compare to the roundoff of such an argument.
  CHECK(std::abs(got - expect) < 1e-9 * std::abs(expect));
}

TEST_CASE("pump transverse factor is exactly 1 for a plane wave") {
  const auto& b = scenario();
  const auto& d = b.dispersion();
  const double q1 = 6 * d.q0, dq = 0.3 * d.q0;
  const cplx a = pump_envelope(b.pump(), q1 + (-q1), 0.01);
  const cplx s = pump_envelope(b.pump(), (q1 + dq) + (-q1 + 0.5 * dq), 0.01);
  CHECK(a == s);
}

TEST_CASE("passband wavelengths") {
  const auto p = passbands(scenario());
  CHECK(p.ref_lambda_min_um * 1e3 >= 760.0);
  CHECK(p.ref_lambda_min_um * 1e3 <= 770.0);
  CHECK(p.ref_lambda_max_um * 1e3 >= 982.0);
  CHECK(p.ref_lambda_max_um * 1e3 <= 992.0);
  CHECK(p.test_lambda_min_um >= 1.145);
  CHECK(p.test_lambda_min_um <= 1.155);
  CHECK(p.test_lambda_max_um >= 1.738);
  CHECK(p.test_lambda_max_um <= 1.748);
}

TEST_CASE("degenerate Phi map") {
  const auto& b = scenario();
  const auto& d = b.dispersion();
  const auto axes = default_phi_axes(b, 25, 61);
  CHECK(axes.q.front() == doctest::Approx(-12 * d.q0));
  CHECK(axes.omega.back() == doctest::Approx(30 * d.Omega0));
  const auto m = phi_degenerate_map(b, axes.q, axes.omega, 3);
  CHECK(std::abs(m.at(12, 30) - cplx(1.0, 0.0)) < 1e-6);
  CHECK(std::stoi(*m.meta.find("invalid_points")) > 0);
  const auto m1 = phi_degenerate_map(b, axes.q, axes.omega, 1);
  CHECK(m.values == m1.values);

  // Near the origin the bright ridge follows |Omega|/Omega0 = |q|/q0.
  const double q = 1.5 * d.q0;
  CHECK(std::abs(b.phase_matching_function(q, 1.5 * d.Omega0, -q, -1.5 * d.Omega0)) > 0.99);
  CHECK(std::abs(b.phase_matching_function(q, 0.0, -q, 0.0)) < 0.9);

  const std::vector<double> bad{0.0, std::nan("")};
  CHECK_THROWS_AS(phi_degenerate_map(b, bad, axes.omega), ConfigError);
}

TEST_CASE("J peaks near Omega1 + Omega2 = 0 on the matched curve") {
  const auto& b = scenario();
  const auto& d = b.dispersion();
  const double q = 6 * d.q0;
  double best = 0, bw1 = 0, bw2 = 0;
  for (int i = 0; i <= 200; ++i) {
    for (int j = -20; j <= 20; ++j) {
      const double w1 = (5.0 + 2.0 * i / 200.0) * d.Omega0;
      const double w2 = -w1 + j * 0.25 * b.pump().bandwidth();
      const double a = std::abs(b.jsaa(q, w1, -q, w2, JsaaStage::raw));
      if (a > best) {
        best = a;
        bw1 = w1;
        bw2 = w2;
      }
    }
  }
  CHECK(std::abs(bw1 + bw2) <= 0.5 * b.pump().bandwidth());
  CHECK(std::abs(b.delta_mismatch(q, bw1, -q, bw2) * b.crystal().length_um()) < 0.5);
}
