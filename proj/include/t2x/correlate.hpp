#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "t2x/io.hpp"
#include "t2x/pdc.hpp"

namespace t2x {

/// Sampling counts and coverage rules for the correlation pipeline.
struct GridConfig {
  int n_x1 = 101;
  int n_omega1 = 129;
  int n_omega_plus = 513;
  int n_fft = 1024;
  double x1_margin = 0.1;     ///< fraction of the mirror-band image added on each side
  double strip_lobes = 10.0;  ///< phase-matched strip half-width, in units of π of ΔL/2
  double pump_margin = 5.0;   ///< test-band padding in pump bandwidths Ω_p

  void validate() const;
  /// Multiply spectral counts by `s` (x1 count unchanged). s = 2 nests the
  /// doubled lattices on the originals: n → 2(n−1)+1, n_fft → 2·n_fft.
  GridConfig scaled(double s) const;

  bool operator==(const GridConfig&) const = default;
};

/// Quadrature lattices shared by every path.
///
/// Ω2 (the test-photon detuning) lives on a + j·h, j < M. The pair
/// (Ω₊, Ω₋) = ((Ω2 + Ω2')/2, Ω2 − Ω2') of two lattice nodes is therefore
/// on Ω₋ = m·h, |m| < M. The reported time axis is t2 = t_T + τ_k with
/// τ_k = τ0 + k·Δt, Δt = 2π/(N·h), so one FFT window spans 2π/h.
struct SpectralGrid {
  std::vector<double> x1;   ///< µm
  double omega2_start = 0.0;
  double h = 0.0;           ///< Ω2 / Ω₋ step, rad/fs
  std::size_t n_omega2 = 0; ///< M
  std::size_t n_omega1 = 0;
  double ref_lo = 0.0;      ///< reference integration band, rad/fs
  double ref_hi = 0.0;
  double strip_lobes = 0.0;
  std::size_t n_fft = 0;    ///< N
  double dt = 0.0;          ///< fs
  double tau0 = 0.0;        ///< first τ = t2 − t_T, fs
  double band_x1_lo = 0.0;  ///< mirror-band image on the camera, µm
  double band_x1_hi = 0.0;

  double omega2(std::size_t j) const { return omega2_start + h * static_cast<double>(j); }
  double time_window() const;
  std::vector<double> omega2_axis() const;
  std::vector<double> tau_axis() const;
  /// Ω1 nodes for one camera position: reference band ∩ phase-matched strip.
  /// Empty when x1 maps outside the mirror band.
  std::vector<double> omega1_axis(const Biphoton& b, double x1) const;
  /// Ω₋ = m·h for m = −(M−1) … M−1.
  std::vector<double> omega_minus_axis() const;

  Metadata describe() const;
};

/// Builds the lattices and rejects windows too short for the ridge
/// (ConfigError) before any compute happens.
SpectralGrid make_grid(const Biphoton& b, const GridConfig& cfg);

/// Trapezoid weights (1, …, 1, ½ at both ends) for n uniform nodes.
std::vector<double> trapezoid_weights(std::size_t n);

enum class CorrelationPath { fast, oracle };
std::string to_string(CorrelationPath p);
CorrelationPath parse_path(const std::string& s);

/// Peak-normalized C(x1, t2), row-major with x1 as the slow index.
struct CorrelationMap {
  std::vector<double> x1; ///< µm
  std::vector<double> t2; ///< fs, measured from the pair's crystal group delay
  std::vector<double> values;
  double raw_peak = 0.0;
  double max_imag_residue = 0.0; ///< max |Im C| / raw peak before the real cast
  CorrelationPath path = CorrelationPath::fast;
  double band_x1_lo = 0.0;
  double band_x1_hi = 0.0;
  Metadata meta;

  double at(std::size_t ix, std::size_t it) const { return values[ix * t2.size() + it]; }
  std::span<const double> slice(std::size_t ix) const { return {values.data() + ix * t2.size(), t2.size()}; }

  /// `x1_um,t2_fs,C_norm` long form.
  std::string to_csv() const;
  /// First row = t2 axis, first column = x1 axis.
  std::string to_matrix_csv() const;
};

/// C(x1, t2) on the grid. `fast`: |A|² with one FFT per Ω1 node.
/// `oracle`: Q(x1, Ω₋) by tensor quadrature, then one FFT over Ω₋.
/// Columns are independent, so results do not depend on `workers`.
CorrelationMap correlation_map(const Biphoton& b, const SpectralGrid& grid,
                               CorrelationPath path = CorrelationPath::fast, int workers = 0);

struct QSpectrum {
  std::vector<double> omega_minus;
  std::vector<cplx> values;
};

/// Q(x1, Ω₋) for a plane-wave pump. Requires w_p = ∞ (ConfigError otherwise).
QSpectrum q_spectrum(const Biphoton& b, const SpectralGrid& grid, double x1);

/// Direct evaluation of C at a few times (≤ 16) from the Q double integral
/// and an explicit Ω₋ sum, divided by `normalization` (a map's raw_peak).
std::vector<double> brute_force_C(const Biphoton& b, const SpectralGrid& grid, double x1,
                                  std::span<const double> t2, double normalization);

struct SliceMetrics {
  double x1 = 0.0;
  double t_peak = 0.0; ///< quadratic interpolation around the argmax
  double fwhm = 0.0;   ///< NaN when a half-maximum crossing is missing
  double peak = 0.0;
  bool retained = false;
  bool in_fit = false;
};

struct RidgeFit {
  double slope = 0.0; ///< fs/µm
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

struct CorrelationMetrics {
  std::vector<SliceMetrics> slices;
  RidgeFit fit;
  double fit_x1_lo = 0.0;
  double fit_x1_hi = 0.0;
  std::vector<double> excluded_x1;

  std::string to_csv() const;
  Metadata describe() const;
};

/// Ridge and width extraction. Slices whose peak is below 1e-3 of the
/// global peak are excluded; the linear fit uses retained slices within
/// the central `fit_fraction` of the mirror band.
CorrelationMetrics extract_metrics(const CorrelationMap& map, double fit_fraction = 0.6);

/// |dt2/dx1| of the quadratic-approximation ridge, D_T·Ω0·k0/(f·q0), signed like D_T.
double quadratic_ridge_slope(const Biphoton& b);

struct GhostImage {
  std::vector<double> x1;
  std::vector<double> values;
  bool no_signal = false;

  std::string to_csv() const;
};

/// image(x1) = ∫ C(x1, t)·T(t) dt, peak-normalized; T sampled on map.t2.
GhostImage ghost_image(const CorrelationMap& map, std::span<const double> transmittance);

} // namespace t2x
