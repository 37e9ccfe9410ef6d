#pragma once

#include <string>
#include <utility>
#include <vector>

#include "t2x/correlate.hpp"
#include "t2x/io.hpp"
#include "t2x/pdc.hpp"

namespace t2x {

/// Dimensionless parameters of the double-Gaussian phase-matching model.
struct GaussianModelParams {
  double mu_c = 0.0;      ///< √2·q_c/q0
  double sigma_mu = 0.0;  ///< √2·Δq/q0
  double sigma_nu = 0.0;  ///< σ_s/(√2·μ_c)
  double sigma_p = 0.0;   ///< Ω_p/Ω0
  double sigma_s = 1.61;
  double D = 0.0;         ///< D_T·Ω0²
  double Sigma_tau = 0.0;

  /// 2·D·σ_ν·σ_p; the dispersion factor in Σ_τ is 1 + (this)².
  double regime_constant() const { return 2.0 * D * sigma_nu * sigma_p; }
  /// σ_μ/σ_ν and σ_μ/σ_p; the analytic C assumes both are large.
  double ratio_mu_nu() const { return sigma_mu / sigma_nu; }
  double ratio_mu_p() const { return sigma_mu / sigma_p; }
  /// Both ratios above 10.
  bool valid() const { return ratio_mu_nu() > 10.0 && ratio_mu_p() > 10.0; }

  Metadata describe() const;
};

/// Raw inputs in any consistent unit system.
struct GaussianInputs {
  double q0 = 0.0;
  double Omega0 = 0.0;
  double Omega_p = 0.0;
  double q_c = 0.0;
  double delta_q = 0.0;
  double gdd = 0.0; ///< in (1/Omega0 units)²
  double sigma_s = 1.61;
};

/// Σ_τ² = ¼·(1/(4σ_ν²) + 1/σ_p²)·(1 + 4D²σ_ν²σ_p²)
double sigma_tau(double sigma_nu, double sigma_p, double D);

GaussianModelParams gaussian_params(const GaussianInputs& in);
GaussianModelParams gaussian_params(const Biphoton& b, double sigma_s = 1.61);

/// Analytic model bound to the physical mapping x̄ = k0·x1/(f·q0),
/// τ = (t2 − t_T)·Ω0.
class GaussianModel {
public:
  GaussianModel(const Biphoton& b, double sigma_s = 1.61);

  const GaussianModelParams& params() const noexcept { return p_; }
  double xbar(double x1) const { return k0_ * x1 / (f_ * q0_); }
  double x1_of_xbar(double xbar) const { return xbar * f_ * q0_ / k0_; }
  double tau(double t2) const { return (t2 - t_T_) * Omega0_; }
  double t2_of_tau(double tau) const { return tau / Omega0_ + t_T_; }
  double Omega0() const noexcept { return Omega0_; }

  /// Peak position (x̄ = q_c/q0, τ = −D·x̄) in µm and fs.
  double peak_x1() const;
  double peak_t2() const;
  /// Analytic ridge time at x1 (τ = −D·x̄).
  double ridge_t2(double x1) const;
  /// dt2/dx1 of the analytic ridge, fs/µm.
  double ridge_slope() const;
  /// Temporal FWHM of one slice: 2·sqrt(2 ln 2)·Σ_τ/Ω0.
  double slice_fwhm_fs() const;

  /// Points (x1, t2) on the level-`level` contour, uniformly spaced in angle.
  std::vector<std::pair<double, double>> contour(double level, std::size_t n) const;

  /// Analytic map on the given axes (same layout as a numerical map).
  CorrelationMap evaluate(const std::vector<double>& x1, const std::vector<double>& t2) const;

private:
  GaussianModelParams p_;
  double q0_, Omega0_, k0_, f_, t_T_, qc_ratio_;
};

/// exp[−(D·x̄ + τ)²/(2Σ_τ²) − 2(x̄ − q_c/q0)²/σ_μ²]; peak exactly 1.
double analytic_C(double x1, double t2, const GaussianModel& model);

struct ResolutionTime {
  double full_fs = 0.0;   ///< 2Σ_τ/Ω0
  double approx_fs = 0.0; ///< 1/(σ_p·Ω0) = τ_p/sqrt(2 ln 2)
  double ratio = 0.0;     ///< full/approx
};
ResolutionTime resolution_time(const GaussianModelParams& p, double Omega0);

struct FwhmPair {
  double x1;
  double numerical;
  double analytic;
};

struct ComparisonReport {
  double peak_x1_analytic = 0.0;
  double peak_t2_analytic = 0.0;
  double center_slice_x1 = 0.0;
  double peak_offset_fs = 0.0;  ///< numerical − analytic peak time at the band-center slice
  double peak_offset_um = 0.0;  ///< numerical ridge x1 at the analytic peak time − analytic peak x1
  double slope_numerical = 0.0;
  double slope_analytic = 0.0;
  double slope_ratio = 0.0;
  double fwhm_analytic_fs = 0.0;
  double fwhm_center_numerical_fs = 0.0;
  double mean_fwhm_ratio = 0.0;
  double mean_abs_difference = 0.0; ///< over analytic C > 0.05
  std::size_t overlap_points = 0;
  double contour_level = 0.27;
  double contour_mean_numerical = 0.0;
  std::size_t contour_points = 0;
  std::vector<FwhmPair> fwhm;
  GaussianModelParams params;
  ResolutionTime resolution;

  Metadata describe() const;
  std::string fwhm_csv() const;
};

/// Forward comparison of a numerical map with the analytic model on the
/// map's own grid. Throws DomainError when the analytic overlap region is empty.
ComparisonReport compare(const CorrelationMap& numerical, const GaussianModel& model);

} // namespace t2x
