#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "t2x/dispersion.hpp"
#include "t2x/io.hpp"

namespace t2x {

using cplx = std::complex<double>;

/// Fourier-limited Gaussian pump pulse.
struct PumpConfig {
  double tau_fwhm_fs = 200.0;
  double waist_um = std::numeric_limits<double>::infinity();
  double amplitude = 1.0;

  /// Ω_p = sqrt(2 ln 2)/τ_p, rad/fs.
  double bandwidth() const { return std::sqrt(2.0 * std::log(2.0)) / tau_fwhm_fs; }
  /// q_p = 1/w_p, rad/µm; zero for a plane-wave pump.
  double q_p() const { return plane_wave() ? 0.0 : 1.0 / waist_um; }
  bool plane_wave() const { return std::isinf(waist_um); }

  void validate() const;
  bool operator==(const PumpConfig&) const = default;
};

/// Spectro-angular filter, far-field lens and test-arm dispersion.
/// All values in canonical units (rad/µm, rad/fs, µm, fs², fs).
struct FilterGeometryConfig {
  double q_c = 0.0;
  double delta_q = 0.0;
  double Omega_c = 0.0;
  double focal_length_um = 5.0e4;
  double gdd_fs2 = 5233.0;
  double t_test_fs = 0.0;
  double t_ref_fs = 0.0;

  void validate() const;
  bool operator==(const FilterGeometryConfig&) const = default;
};

/// A(q, Ω) = A0 exp(−q²/4q_p² − Ω²/4Ω_p²); the transverse factor is exactly 1
/// for a plane-wave pump.
cplx pump_envelope(const PumpConfig& pump, double q, double omega);

/// sin(x)/x, with the series 1 − x²/6 + x⁴/120 below |x| = 1e-4.
double sinc(double x);

/// Rectangular reference-arm filter: 1 inside |q − q_c| ≤ Δq and
/// |Ω − Ω_c| ≤ Ω_c (closed edges), else 0. The test arm uses F(−q, −Ω).
int filter_transmission(const FilterGeometryConfig& filter, double q, double omega);

enum class JsaaStage { raw, filtered, propagated };

/// Biphoton amplitude of type-I PDC for one crystal, pump and filter set.
/// Overall constants (κ, χ, 2π factors) are folded into an arbitrary scale.
class Biphoton {
public:
  Biphoton(Crystal crystal, PumpConfig pump, FilterGeometryConfig filter);

  const Crystal& crystal() const noexcept { return crystal_; }
  const PumpConfig& pump() const noexcept { return pump_; }
  const FilterGeometryConfig& filter() const noexcept { return filter_; }
  const DispersionSummary& dispersion() const noexcept { return dispersion_; }

  /// Δ = k_sz(q1,Ω1) + k_sz(q2,Ω2) − k_pz(q1+q2, Ω1+Ω2), exact dispersion.
  double delta_mismatch(double q1, double o1, double q2, double o2) const;

  /// Φ = exp(−iΔL/2)·sinc(ΔL/2).
  cplx phase_matching_function(double q1, double o1, double q2, double o2) const;

  /// J (raw), J0 = J·F(q1,Ω1)·F(−q2,−Ω2) (filtered) or
  /// J1 = J0·exp(i k_sz(q1,Ω1)L + i k_sz(q2,Ω2)L) (propagated).
  /// Filtered stages skip the dispersion evaluation outside the passband.
  cplx jsaa(double q1, double o1, double q2, double o2, JsaaStage stage) const;

  /// Mean group delay of the pair through the crystal,
  /// L·(k_s'(0) + k_p'(0))/2 (fs). Correlation times are quoted relative to it.
  double crystal_group_delay() const;

  /// Config echo in canonical units.
  Metadata describe() const;

private:
  Crystal crystal_;
  PumpConfig pump_;
  FilterGeometryConfig filter_;
  DispersionSummary dispersion_;
};

/// Reference and test passbands implied by the mirror band through the
/// Quadratic-approximation matched line Ω = q·Ω0/q0.
struct Passbands {
  double ref_omega_lo = 0.0; ///< rad/fs
  double ref_omega_hi = 0.0;
  double ref_lambda_min_um = 0.0;
  double ref_lambda_max_um = 0.0;
  double test_lambda_min_um = 0.0;
  double test_lambda_max_um = 0.0;
};
Passbands passbands(const Biphoton& b);

/// Complex map on a uniform 2D grid, row-major with axis1 as the slow index.
struct ComplexField2D {
  std::string axis1_name;
  std::string axis2_name;
  std::vector<double> axis1;
  std::vector<double> axis2;
  std::vector<cplx> values;
  Metadata meta;

  cplx at(std::size_t i1, std::size_t i2) const { return values[i1 * axis2.size() + i2]; }

  /// Long-form CSV: axis1,axis2,re,im,abs with a header row.
  std::string to_csv() const;
};

/// Φ(q, Ω, −q, −Ω) on the given axes (rad/µm, rad/fs). Points where either
/// photon leaves the validated Sellmeier range are written as 0 and counted
/// in meta["invalid_points"].
ComplexField2D phi_degenerate_map(const Biphoton& b, std::span<const double> q_axis,
                                  std::span<const double> omega_axis, int workers = 1);

/// Default axes: q ∈ [−12, 12]q0, Ω ∈ [−30, 30]Ω0.
struct PhiAxes {
  std::vector<double> q;
  std::vector<double> omega;
};
PhiAxes default_phi_axes(const Biphoton& b, int nq = 241, int nomega = 301);

std::vector<double> linspace(double a, double b, std::size_t n);

} // namespace t2x
