#include "t2x/gaussmodel.hpp"

#include <algorithm>
#include <cmath>

#include "t2x/errors.hpp"
#include "t2x/units.hpp"

namespace t2x {

namespace {

const double fwhm_factor = 2.0 * std::sqrt(2.0 * std::log(2.0));

/// Bilinear interpolation of a map; false when (x1, t2) lies outside it.
bool sample(const CorrelationMap& m, double x1, double t2, double& out) {
  const std::size_t nx = m.x1.size();
  const std::size_t nt = m.t2.size();
  if (nx < 2 || nt < 2 || x1 < m.x1.front() || x1 > m.x1.back() || t2 < m.t2.front() || t2 > m.t2.back())
    return false;
  const double fx = (x1 - m.x1.front()) / (m.x1[1] - m.x1[0]);
  const double ft = (t2 - m.t2.front()) / (m.t2[1] - m.t2[0]);
  const auto ix = std::min(static_cast<std::size_t>(fx), nx - 2);
  const auto it = std::min(static_cast<std::size_t>(ft), nt - 2);
  const double ax = fx - static_cast<double>(ix);
  const double at = ft - static_cast<double>(it);
  out = (1 - ax) * (1 - at) * m.at(ix, it) + ax * (1 - at) * m.at(ix + 1, it) + (1 - ax) * at * m.at(ix, it + 1) +
        ax * at * m.at(ix + 1, it + 1);
  return true;
}

} // namespace

Metadata GaussianModelParams::describe() const {
  Metadata m;
  m.set("mu_c", mu_c);
  m.set("sigma_mu", sigma_mu);
  m.set("sigma_nu", sigma_nu);
  m.set("sigma_p", sigma_p);
  m.set("sigma_s", sigma_s);
  m.set("D", D);
  m.set("Sigma_tau", Sigma_tau);
  m.set("regime_constant_2D_sigma_nu_sigma_p", regime_constant());
  m.set("ratio_sigma_mu_over_sigma_nu", ratio_mu_nu());
  m.set("ratio_sigma_mu_over_sigma_p", ratio_mu_p());
  m.set("validity_ratios_above_10", valid());
  if (!valid())
    m.set("warning", "sigma_mu is not >> sigma_nu, sigma_p; analytic map outside its validity limits");
  return m;
}

double sigma_tau(double sigma_nu, double sigma_p, double D) {
  const double a = 1.0 / (4.0 * sigma_nu * sigma_nu) + 1.0 / (sigma_p * sigma_p);
  const double b = 1.0 + 4.0 * D * D * sigma_nu * sigma_nu * sigma_p * sigma_p;
  return std::sqrt(0.25 * a * b);
}

GaussianModelParams gaussian_params(const GaussianInputs& in) {
  GaussianModelParams p;
  p.mu_c = std::sqrt(2.0) * in.q_c / in.q0;
  p.sigma_mu = std::sqrt(2.0) * in.delta_q / in.q0;
  p.sigma_s = in.sigma_s;
  p.sigma_nu = in.sigma_s / (std::sqrt(2.0) * p.mu_c);
  p.sigma_p = in.Omega_p / in.Omega0;
  p.D = in.gdd * in.Omega0 * in.Omega0;
  p.Sigma_tau = sigma_tau(p.sigma_nu, p.sigma_p, p.D);
  return p;
}

GaussianModelParams gaussian_params(const Biphoton& b, double sigma_s) {
  if (!(sigma_s > 0.0) || !std::isfinite(sigma_s))
    throw ConfigError("model.sigma_s", "model.sigma_s must be finite and > 0");
  const auto& d = b.dispersion();
  const auto& f = b.filter();
  return gaussian_params(
      GaussianInputs{d.q0, d.Omega0, b.pump().bandwidth(), f.q_c, f.delta_q, f.gdd_fs2, sigma_s});
}

GaussianModel::GaussianModel(const Biphoton& b, double sigma_s)
    : p_(gaussian_params(b, sigma_s)),
      q0_(b.dispersion().q0),
      Omega0_(b.dispersion().Omega0),
      k0_(b.dispersion().k0),
      f_(b.filter().focal_length_um),
      t_T_(b.filter().t_test_fs),
      qc_ratio_(b.filter().q_c / b.dispersion().q0) {}

double GaussianModel::peak_x1() const { return x1_of_xbar(qc_ratio_); }

double GaussianModel::peak_t2() const { return t2_of_tau(-p_.D * qc_ratio_); }

double GaussianModel::ridge_t2(double x1) const { return t2_of_tau(-p_.D * xbar(x1)); }

double GaussianModel::ridge_slope() const { return -p_.D * k0_ / (f_ * q0_ * Omega0_); }

double GaussianModel::slice_fwhm_fs() const { return fwhm_factor * p_.Sigma_tau / Omega0_; }

std::vector<std::pair<double, double>> GaussianModel::contour(double level, std::size_t n) const {
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("contour level must lie in (0, 1)");
  const double L = -std::log(level);
  const double au = p_.sigma_mu * std::sqrt(0.5 * L);
  const double av = p_.Sigma_tau * std::sqrt(2.0 * L);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = units::two_pi * static_cast<double>(i) / static_cast<double>(n);
    const double xb = qc_ratio_ + au * std::cos(th);
    const double tau = av * std::sin(th) - p_.D * xb;
    pts.emplace_back(x1_of_xbar(xb), t2_of_tau(tau));
  }
  return pts;
}

double analytic_C(double x1, double t2, const GaussianModel& model) {
  const auto& p = model.params();
  const double xb = model.xbar(x1);
  const double u = p.D * xb + model.tau(t2);
  const double v = xb - model.xbar(model.peak_x1());
  return std::exp(-u * u / (2.0 * p.Sigma_tau * p.Sigma_tau) - 2.0 * v * v / (p.sigma_mu * p.sigma_mu));
}

CorrelationMap GaussianModel::evaluate(const std::vector<double>& x1, const std::vector<double>& t2) const {
  CorrelationMap m;
  m.x1 = x1;
  m.t2 = t2;
  m.values.resize(x1.size() * t2.size());
  for (std::size_t i = 0; i < x1.size(); ++i)
    for (std::size_t k = 0; k < t2.size(); ++k)
      m.values[i * t2.size() + k] = analytic_C(x1[i], t2[k], *this);
  m.raw_peak = 1.0;
  const double half = p_.sigma_mu / std::sqrt(2.0);
  m.band_x1_lo = x1_of_xbar(qc_ratio_ - half);
  m.band_x1_hi = x1_of_xbar(qc_ratio_ + half);
  m.meta = p_.describe();
  m.meta.set("map", "analytic Gaussian model");
  m.meta.set("peak_x1_um", peak_x1());
  m.meta.set("peak_t2_fs", peak_t2());
  m.meta.set("ridge_slope_fs_per_um", ridge_slope());
  m.meta.set("slice_fwhm_fs", slice_fwhm_fs());
  return m;
}

ResolutionTime resolution_time(const GaussianModelParams& p, double Omega0) {
  ResolutionTime r;
  r.full_fs = 2.0 * p.Sigma_tau / Omega0;
  r.approx_fs = 1.0 / (p.sigma_p * Omega0);
  r.ratio = r.full_fs / r.approx_fs;
  return r;
}

Metadata ComparisonReport::describe() const {
  Metadata m;
  m.merge(params.describe(), "model.");
  m.set("resolution_time_fs", resolution.full_fs);
  m.set("resolution_time_approx_fs", resolution.approx_fs);
  m.set("resolution_time_ratio", resolution.ratio);
  m.set("peak_x1_analytic_um", peak_x1_analytic);
  m.set("peak_t2_analytic_fs", peak_t2_analytic);
  m.set("center_slice_x1_um", center_slice_x1);
  m.set("peak_offset_fs", peak_offset_fs);
  m.set("peak_offset_um", peak_offset_um);
  m.set("peak_offset_over_fwhm", std::abs(peak_offset_fs) / fwhm_analytic_fs);
  m.set("ridge_slope_numerical_fs_per_um", slope_numerical);
  m.set("ridge_slope_analytic_fs_per_um", slope_analytic);
  m.set("ridge_slope_ratio", slope_ratio);
  m.set("fwhm_analytic_fs", fwhm_analytic_fs);
  m.set("fwhm_center_numerical_fs", fwhm_center_numerical_fs);
  m.set("fwhm_ratio_mean", mean_fwhm_ratio);
  m.set("fwhm_pairs", fwhm.size());
  m.set("mean_abs_difference", mean_abs_difference);
  m.set("mean_abs_difference_region", "analytic C > 0.05");
  m.set("overlap_points", overlap_points);
  m.set("contour_level", contour_level);
  m.set("contour_mean_numerical", contour_mean_numerical);
  m.set("contour_points", contour_points);
  return m;
}

std::string ComparisonReport::fwhm_csv() const {
  std::string out = "x1_um,fwhm_numerical_fs,fwhm_analytic_fs\n";
  for (const auto& f : fwhm)
    out += csv_number(f.x1) + "," + csv_number(f.numerical) + "," + csv_number(f.analytic) + "\n";
  return out;
}

ComparisonReport compare(const CorrelationMap& numerical, const GaussianModel& model) {
  const auto analytic = model.evaluate(numerical.x1, numerical.t2);
  ComparisonReport r;
  r.params = model.params();
  r.resolution = resolution_time(r.params, model.Omega0());

  double sum = 0.0;
  for (std::size_t i = 0; i < analytic.values.size(); ++i) {
    if (analytic.values[i] > 0.05) {
      sum += std::abs(numerical.values[i] - analytic.values[i]);
      ++r.overlap_points;
    }
  }
  if (r.overlap_points == 0)
    throw DomainError("compare: analytic map has no points above 0.05 on the numerical grid");
  r.mean_abs_difference = sum / static_cast<double>(r.overlap_points);

  const auto metrics = extract_metrics(numerical);
  r.peak_x1_analytic = model.peak_x1();
  r.peak_t2_analytic = model.peak_t2();
  r.fwhm_analytic_fs = model.slice_fwhm_fs();
  r.slope_analytic = model.ridge_slope();
  r.slope_numerical = metrics.fit.slope;
  r.slope_ratio = r.slope_numerical / r.slope_analytic;

  std::size_t center = 0;
  for (std::size_t i = 1; i < numerical.x1.size(); ++i)
    if (std::abs(numerical.x1[i] - r.peak_x1_analytic) < std::abs(numerical.x1[center] - r.peak_x1_analytic))
      center = i;
  const auto& cs = metrics.slices[center];
  r.center_slice_x1 = cs.x1;
  r.peak_offset_fs = cs.t_peak - model.ridge_t2(cs.x1);
  r.fwhm_center_numerical_fs = cs.fwhm;
  r.peak_offset_um = metrics.fit.slope != 0.0
                         ? (r.peak_t2_analytic - metrics.fit.intercept) / metrics.fit.slope - r.peak_x1_analytic
                         : 0.0;

  double ratio_sum = 0.0;
  for (const auto& s : metrics.slices) {
    if (!s.retained || std::isnan(s.fwhm))
      continue;
    r.fwhm.push_back({s.x1, s.fwhm, r.fwhm_analytic_fs});
    ratio_sum += s.fwhm / r.fwhm_analytic_fs;
  }
  if (!r.fwhm.empty())
    r.mean_fwhm_ratio = ratio_sum / static_cast<double>(r.fwhm.size());

  double csum = 0.0;
  for (const auto& [x, t] : model.contour(r.contour_level, 256)) {
    double v = 0.0;
    if (sample(numerical, x, t, v)) {
      csum += v;
      ++r.contour_points;
    }
  }
  r.contour_mean_numerical = r.contour_points ? csum / static_cast<double>(r.contour_points) : 0.0;
  return r;
}

} // namespace t2x
