#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "t2x/config.hpp"
#include "t2x/errors.hpp"
#include "t2x/gaussmodel.hpp"

using namespace t2x;

namespace {

const Biphoton& scenario() {
  static const Biphoton b = build_biphoton(RunConfig{});
  return b;
}

const double fwhm_factor = 2 * std::sqrt(2 * std::log(2.0));

} // namespace

TEST_CASE("parameters for the default scenario") {
  const auto p = gaussian_params(scenario());
  CHECK(p.mu_c == doctest::Approx(8.485).epsilon(0.01));
  CHECK(p.sigma_mu == doctest::Approx(5.657).epsilon(0.01));
  CHECK(p.sigma_nu == doctest::Approx(0.1342).epsilon(0.01));
  CHECK(p.sigma_p == doctest::Approx(0.0853).epsilon(0.01));
  CHECK(p.D == doctest::Approx(24.9).epsilon(0.01));
  CHECK(std::abs(p.regime_constant() - 0.57) <= 0.01);
  CHECK(p.Sigma_tau == doctest::Approx(7.08).epsilon(0.02));
  CHECK(p.valid());
}

TEST_CASE("Sigma_tau formula") {
  const double a = 0.2, b = 0.1;
  CHECK(sigma_tau(a, b, 0.0) * sigma_tau(a, b, 0.0) == doctest::Approx(0.25 * (1 / (4 * a * a) + 1 / (b * b))).epsilon(1e-15));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 2.0), ud(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const double sn = u(rng), sp = u(rng), D = ud(rng);
    CHECK(sigma_tau(sn, sp, D) == doctest::Approx(sigma_tau(sp / 2, 2 * sn, D)).epsilon(1e-14));
    CHECK(sigma_tau(sn, sp, D) == sigma_tau(sn, sp, -D));
  }
  double last = 0.0;
  for (double D = 0.0; D <= 100.0; D += 2.5) {
    const double s = sigma_tau(0.1342, 0.0853, D);
    CHECK(s > last);
    last = s;
  }
}

TEST_CASE("parameters are unit independent") {
  const auto& d = scenario().dispersion();
  const auto& f = scenario().filter();
  const GaussianInputs fs{d.q0, d.Omega0, scenario().pump().bandwidth(), f.q_c, f.delta_q, f.gdd_fs2, 1.61};
  // rad/ps and ps² instead of rad/fs and fs²; mm⁻¹ for the q's.
  const GaussianInputs ps{d.q0 * 1e3, d.Omega0 * 1e3, scenario().pump().bandwidth() * 1e3, f.q_c * 1e3,
                          f.delta_q * 1e3, f.gdd_fs2 * 1e-6, 1.61};
  const auto a = gaussian_params(fs);
  const auto b = gaussian_params(ps);
  CHECK(a.mu_c == doctest::Approx(b.mu_c).epsilon(1e-15));
  CHECK(a.sigma_mu == doctest::Approx(b.sigma_mu).epsilon(1e-15));
  CHECK(a.sigma_p == doctest::Approx(b.sigma_p).epsilon(1e-15));
  CHECK(a.D == doctest::Approx(b.D).epsilon(1e-14));
  CHECK(a.Sigma_tau == doctest::Approx(b.Sigma_tau).epsilon(1e-14));
}

TEST_CASE("analytic C peak, factorization and width") {
  const GaussianModel m(scenario());
  const auto& p = m.params();
  const double x6 = m.x1_of_xbar(6.0);
  CHECK(analytic_C(x6, m.t2_of_tau(-6.0 * p.D), m) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.peak_x1() == doctest::Approx(x6).epsilon(1e-14));

  for (double xb : {4.0, 6.5, 9.0}) {
    const double x1 = m.x1_of_xbar(xb);
    const double r = analytic_C(x1, m.t2_of_tau(-p.D * xb + 3.0), m) / analytic_C(x1, m.t2_of_tau(-p.D * xb - 5.0), m);
    CHECK(r == doctest::Approx(std::exp(-(9.0 - 25.0) / (2 * p.Sigma_tau * p.Sigma_tau))).epsilon(1e-12));
  }

  CHECK(m.slice_fwhm_fs() == doctest::Approx(fwhm_factor * 7.08 / scenario().dispersion().Omega0).epsilon(0.02));
  CHECK(m.slice_fwhm_fs() == doctest::Approx(242.0).epsilon(0.02));
  const double t0 = m.ridge_t2(x6);
  const double h = 0.5 * m.slice_fwhm_fs();
  CHECK(analytic_C(x6, t0 + h, m) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(analytic_C(x6, t0 - h, m) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ridge slope") {
  const GaussianModel m(scenario());
  CHECK(std::abs(m.ridge_slope()) == doctest::Approx(1.6).epsilon(0.01));
  CHECK(m.ridge_slope() == doctest::Approx(quadratic_ridge_slope(scenario())).epsilon(1e-13));
}

TEST_CASE("0.27 contour is a closed curve on the level set") {
  const GaussianModel m(scenario());
  const auto pts = m.contour(0.27, 64);
  REQUIRE(pts.size() == 64);
  double xmin = 1e300, xmax = -1e300;
  for (const auto& [x, t] : pts) {
    CHECK(analytic_C(x, t, m) == doctest::Approx(0.27).epsilon(1e-12));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  CHECK(xmin < m.peak_x1());
  CHECK(xmax > m.peak_x1());
  CHECK_THROWS_AS(m.contour(1.5, 8), DomainError);
}

TEST_CASE("resolution time") {
  const auto p = gaussian_params(scenario());
  const double W0 = scenario().dispersion().Omega0;
  const auto r = resolution_time(p, W0);
  CHECK(r.full_fs == doctest::Approx(2 * 7.08 / W0).epsilon(0.02));
  CHECK(r.full_fs == doctest::Approx(205.0).epsilon(0.02));
  CHECK(r.approx_fs == doctest::Approx(200.0 / std::sqrt(2 * std::log(2.0))).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(1.2).epsilon(0.05));

  RunConfig c;
  c.gdd_fs2 = 0.0;
  const auto p0 = gaussian_params(build_biphoton(c));
  CHECK(p0.Sigma_tau * p0.Sigma_tau ==
        doctest::Approx(0.25 * (1 / (4 * p0.sigma_nu * p0.sigma_nu) + 1 / (p0.sigma_p * p0.sigma_p))).epsilon(1e-15));

  for (double tau = 20.0; tau <= 500.0; tau += 20.0) {
    RunConfig ct;
    ct.tau_p_fs = tau;
    const auto b = build_biphoton(ct);
    CHECK(resolution_time(gaussian_params(b), b.dispersion().Omega0).full_fs < 1000.0);
  }
}

TEST_CASE("validity flags are reported, not enforced") {
  RunConfig c;
  c.delta_q_q0 = 0.01;
  c.q_c_q0 = 6.0;
  const auto b = build_biphoton(c);
  const auto p = gaussian_params(b);
  CHECK_FALSE(p.valid());
  CHECK(p.describe().find("warning") != nullptr);
  CHECK_NOTHROW(GaussianModel(b).evaluate({1000.0}, {-1000.0}));
  CHECK_THROWS_AS(gaussian_params(b, -1.0), ConfigError);
}

TEST_CASE("compare against the analytic map itself") {
  const GaussianModel m(scenario());
  std::vector<double> x1, t2;
  for (int i = 0; i < 101; ++i)
    x1.push_back(m.x1_of_xbar(1.2 + 0.096 * i));
  for (int k = 0; k < 1024; ++k)
    t2.push_back(-5000.0 + 5.0 * k);
  auto a = m.evaluate(x1, t2);
  a.band_x1_lo = m.x1_of_xbar(2.0);
  a.band_x1_hi = m.x1_of_xbar(10.0);
  const auto r = compare(a, m);
  CHECK(r.mean_abs_difference == 0.0);
  CHECK(std::abs(r.peak_offset_fs) < 0.5);
  CHECK(r.slope_ratio == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.contour_mean_numerical == doctest::Approx(0.27).epsilon(0.01));
  CHECK(r.mean_fwhm_ratio == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.fwhm_csv().rfind("x1_um,fwhm_numerical_fs,fwhm_analytic_fs\n", 0) == 0);

  auto far = m.evaluate(x1, std::vector<double>{1e6, 1e6 + 5});
  CHECK_THROWS_AS(compare(far, m), DomainError);
}
