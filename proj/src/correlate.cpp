#include "t2x/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "fft.hpp"
#include "t2x/errors.hpp"
#include "t2x/gaussmodel.hpp"
#include "t2x/parallel.hpp"
#include "t2x/units.hpp"
#include "text_util.hpp"

namespace t2x {

namespace {

constexpr double two_pi = units::two_pi;

double camera_q(const Biphoton& b, double x1) {
  return b.dispersion().k0 * x1 / b.filter().focal_length_um;
}

/// J1(q, Ω1_i, −q, Ω2_j) stored as [j][i] so that sums over Ω1 are contiguous.
std::vector<cplx> propagated_block(const Biphoton& b, const SpectralGrid& g, double q,
                                   const std::vector<double>& omega1) {
  const std::size_t n1 = omega1.size();
  std::vector<cplx> block(g.n_omega2 * n1);
  for (std::size_t j = 0; j < g.n_omega2; ++j) {
    const double o2 = g.omega2(j);
    for (std::size_t i = 0; i < n1; ++i)
      block[j * n1 + i] = b.jsaa(q, omega1[i], -q, o2, JsaaStage::propagated);
  }
  return block;
}

/// Q(Ω₋ = m·h) for m = −(M−1) … M−1 by tensor trapezoid quadrature.
std::vector<cplx> q_values(const Biphoton& b, const SpectralGrid& g, double x1) {
  const std::size_t M = g.n_omega2;
  std::vector<cplx> Q(2 * M - 1, cplx{});
  const auto omega1 = g.omega1_axis(b, x1);
  if (omega1.empty())
    return Q;
  const std::size_t n1 = omega1.size();
  const double h1 = n1 > 1 ? omega1[1] - omega1[0] : 0.0;
  const auto w1 = trapezoid_weights(n1);
  const auto w2 = trapezoid_weights(M);
  const auto block = propagated_block(b, g, camera_q(b, x1), omega1);
  const double gdd = b.filter().gdd_fs2;
  const double scale = h1 * g.h / (two_pi * two_pi);

  for (std::ptrdiff_t m = -static_cast<std::ptrdiff_t>(M) + 1; m < static_cast<std::ptrdiff_t>(M); ++m) {
    const double om = static_cast<double>(m) * g.h;
    const std::size_t j_lo = m < 0 ? static_cast<std::size_t>(-m) : 0;
    const std::size_t j_hi = m < 0 ? M : M - static_cast<std::size_t>(m);
    cplx acc{};
    for (std::size_t j = j_lo; j < j_hi; ++j) {
      const std::size_t jp = j + static_cast<std::size_t>(m); // Ω₊ + Ω₋/2
      const double op = g.omega2_start + (static_cast<double>(j) + 0.5 * static_cast<double>(m)) * g.h;
      const cplx* a = &block[jp * n1];
      const cplx* c = &block[j * n1];
      cplx s{};
      for (std::size_t i = 0; i < n1; ++i)
        s += w1[i] * a[i] * std::conj(c[i]);
      acc += (w2[jp] * w2[j]) * s * std::polar(1.0, gdd * op * om);
    }
    Q[static_cast<std::size_t>(m + static_cast<std::ptrdiff_t>(M) - 1)] = acc * scale;
  }
  return Q;
}

void fast_column(const Biphoton& b, const SpectralGrid& g, double x1, const std::vector<cplx>& kernel,
                 detail::FftPlan& plan, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const auto omega1 = g.omega1_axis(b, x1);
  if (omega1.empty())
    return;
  const std::size_t n1 = omega1.size();
  const std::size_t N = g.n_fft;
  const double h1 = n1 > 1 ? omega1[1] - omega1[0] : 0.0;
  const auto w1 = trapezoid_weights(n1);
  const double q = camera_q(b, x1);
  cplx* buf = plan.data();
  for (std::size_t i = 0; i < n1; ++i) {
    plan.clear();
    for (std::size_t j = 0; j < g.n_omega2; ++j)
      buf[j % N] += b.jsaa(q, omega1[i], -q, g.omega2(j), JsaaStage::propagated) * kernel[j];
    plan.execute();
    for (std::size_t k = 0; k < N; ++k)
      out[k] += w1[i] * std::norm(buf[k]);
  }
  const double scale = h1 * g.h * g.h / (two_pi * two_pi * two_pi);
  for (auto& v : out)
    v *= scale;
}

void oracle_column(const Biphoton& b, const SpectralGrid& g, double x1, detail::FftPlan& plan,
                   std::span<double> out, double& imag_max) {
  const auto Q = q_values(b, g, x1);
  const std::size_t M = g.n_omega2;
  const std::size_t N = g.n_fft;
  const double shift = g.tau0 + b.crystal_group_delay();
  plan.clear();
  cplx* buf = plan.data();
  for (std::ptrdiff_t m = -static_cast<std::ptrdiff_t>(M) + 1; m < static_cast<std::ptrdiff_t>(M); ++m) {
    const auto bin = static_cast<std::size_t>(((m % static_cast<std::ptrdiff_t>(N)) + static_cast<std::ptrdiff_t>(N)) %
                                              static_cast<std::ptrdiff_t>(N));
    const double om = static_cast<double>(m) * g.h;
    buf[bin] += Q[static_cast<std::size_t>(m + static_cast<std::ptrdiff_t>(M) - 1)] * std::polar(1.0, -om * shift);
  }
  plan.execute();
  const double scale = g.h / two_pi;
  imag_max = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    out[k] = buf[k].real() * scale;
    imag_max = std::max(imag_max, std::abs(buf[k].imag() * scale));
  }
}

} // namespace

void GridConfig::validate() const {
  if (n_x1 < 2)
    throw ConfigError("grid.n_x1", "grid.n_x1 must be >= 2");
  if (n_omega1 < 2)
    throw ConfigError("grid.n_omega1", "grid.n_omega1 must be >= 2");
  if (n_omega_plus < 2)
    throw ConfigError("grid.n_omega_plus", "grid.n_omega_plus must be >= 2");
  if (n_fft < 2 || n_fft % 2 != 0)
    throw ConfigError("grid.n_fft", "grid.n_fft must be even and >= 2");
  if (!(x1_margin >= 0.0) || !std::isfinite(x1_margin))
    throw ConfigError("grid.x1_margin", "grid.x1_margin must be >= 0");
  if (!(strip_lobes > 0.0) || !std::isfinite(strip_lobes))
    throw ConfigError("grid.strip_lobes", "grid.strip_lobes must be > 0");
  if (!(pump_margin >= 0.0) || !std::isfinite(pump_margin))
    throw ConfigError("grid.pump_margin", "grid.pump_margin must be >= 0");
}

GridConfig GridConfig::scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s))
    throw ConfigError("grid-scale", "--grid-scale must be a positive number");
  GridConfig out = *this;
  auto nodes = [s](int n) { return std::max(2, static_cast<int>(std::lround((n - 1) * s)) + 1); };
  out.n_omega1 = nodes(n_omega1);
  out.n_omega_plus = nodes(n_omega_plus);
  out.n_fft = std::max(2, 2 * static_cast<int>(std::lround(n_fft * s / 2.0)));
  return out;
}

double SpectralGrid::time_window() const { return two_pi / h; }

std::vector<double> SpectralGrid::omega2_axis() const {
  std::vector<double> v(n_omega2);
  for (std::size_t j = 0; j < n_omega2; ++j)
    v[j] = omega2(j);
  return v;
}

std::vector<double> SpectralGrid::tau_axis() const {
  std::vector<double> v(n_fft);
  for (std::size_t k = 0; k < n_fft; ++k)
    v[k] = tau0 + dt * static_cast<double>(k);
  return v;
}

std::vector<double> SpectralGrid::omega1_axis(const Biphoton& b, double x1) const {
  const auto& d = b.dispersion();
  const auto& f = b.filter();
  const double q = camera_q(b, x1);
  if (std::abs(q - f.q_c) > f.delta_q)
    return {};
  const double xb2 = (q / d.q0) * (q / d.q0);
  const double width = 2.0 * units::pi * strip_lobes;
  const double lo2 = xb2 - width;
  double lo = lo2 > 0.0 ? std::sqrt(lo2) * d.Omega0 : 0.0;
  double hi = std::sqrt(xb2 + width) * d.Omega0;
  lo = std::max(lo, ref_lo);
  hi = std::min(hi, ref_hi);
  if (!(hi > lo))
    return {};
  return linspace(lo, hi, n_omega1);
}

std::vector<double> SpectralGrid::omega_minus_axis() const {
  std::vector<double> v(2 * n_omega2 - 1);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = (static_cast<double>(i) - static_cast<double>(n_omega2 - 1)) * h;
  return v;
}

Metadata SpectralGrid::describe() const {
  Metadata m;
  m.set("n_x1", x1.size());
  m.set("x1_lo_um", x1.front());
  m.set("x1_hi_um", x1.back());
  m.set("mirror_band_x1_lo_um", band_x1_lo);
  m.set("mirror_band_x1_hi_um", band_x1_hi);
  m.set("n_omega1", n_omega1);
  m.set("omega1_band_lo_rad_per_fs", ref_lo);
  m.set("omega1_band_hi_rad_per_fs", ref_hi);
  m.set("strip_lobes", strip_lobes);
  m.set("n_omega2", n_omega2);
  m.set("omega2_lo_rad_per_fs", omega2_start);
  m.set("omega2_hi_rad_per_fs", omega2(n_omega2 - 1));
  m.set("omega_step_rad_per_fs", h);
  m.set("n_fft", n_fft);
  m.set("time_window_fs", time_window());
  m.set("dt_fs", dt);
  m.set("tau0_fs", tau0);
  return m;
}

std::vector<double> trapezoid_weights(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n >= 2) {
    w.front() = 0.5;
    w.back() = 0.5;
  }
  return w;
}

double quadratic_ridge_slope(const Biphoton& b) {
  const auto& d = b.dispersion();
  const auto& f = b.filter();
  return -f.gdd_fs2 * d.Omega0 * d.k0 / (f.focal_length_um * d.q0);
}

SpectralGrid make_grid(const Biphoton& b, const GridConfig& cfg) {
  cfg.validate();
  if (!b.pump().plane_wave())
    throw ConfigError("pump.waist_mm", "the correlation pipeline needs a plane-wave pump (pump.waist_mm = inf)");

  const auto& d = b.dispersion();
  const auto& f = b.filter();
  SpectralGrid g;
  g.band_x1_lo = (f.q_c - f.delta_q) * f.focal_length_um / d.k0;
  g.band_x1_hi = (f.q_c + f.delta_q) * f.focal_length_um / d.k0;
  const double span = g.band_x1_hi - g.band_x1_lo;
  g.x1 = linspace(g.band_x1_lo - cfg.x1_margin * span, g.band_x1_hi + cfg.x1_margin * span,
                  static_cast<std::size_t>(cfg.n_x1));

  const auto pb = passbands(b);
  g.ref_lo = pb.ref_omega_lo;
  g.ref_hi = pb.ref_omega_hi;
  g.n_omega1 = static_cast<std::size_t>(cfg.n_omega1);
  g.strip_lobes = cfg.strip_lobes;

  const double pad = cfg.pump_margin * b.pump().bandwidth();
  const double lo = std::max(-2.0 * f.Omega_c, -g.ref_hi - pad);
  const double hi = std::min(0.0, -g.ref_lo + pad);
  if (!(hi > lo))
    throw ConfigError("filter", "empty test band");
  g.n_omega2 = static_cast<std::size_t>(cfg.n_omega_plus);
  g.omega2_start = lo;
  g.h = (hi - lo) / static_cast<double>(g.n_omega2 - 1);

  g.n_fft = static_cast<std::size_t>(cfg.n_fft);
  g.dt = two_pi / (static_cast<double>(g.n_fft) * g.h);

  const double slope = quadratic_ridge_slope(b);
  const double tau_center = slope * 0.5 * (g.x1.front() + g.x1.back());
  g.tau0 = tau_center - 0.5 * static_cast<double>(g.n_fft) * g.dt;

  const double fwhm = GaussianModel(b).slice_fwhm_fs();
  const double window = g.time_window();
  const double extent = std::abs(slope) * (g.x1.back() - g.x1.front()) + 4.0 * fwhm;
  if (window < 6.0 * fwhm || window < extent) {
    throw ConfigError("grid.n_omega_plus",
                      "grid too coarse: time window " + detail::fmt_g(window, 6) + " fs is shorter than max(6 x slice FWHM " +
                          detail::fmt_g(6.0 * fwhm, 6) + " fs, ridge extent " + detail::fmt_g(extent, 6) +
                          " fs); increase grid.n_omega_plus");
  }
  return g;
}

std::string to_string(CorrelationPath p) { return p == CorrelationPath::fast ? "fast" : "oracle"; }

CorrelationPath parse_path(const std::string& s) {
  if (s == "fast")
    return CorrelationPath::fast;
  if (s == "oracle")
    return CorrelationPath::oracle;
  throw ConfigError("path", "--path must be 'fast' or 'oracle', got '" + s + "'");
}

std::string CorrelationMap::to_csv() const {
  std::string out = "x1_um,t2_fs,C_norm\n";
  out.reserve(values.size() * 32);
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const std::string xs = csv_number(x1[i]) + ",";
    for (std::size_t k = 0; k < t2.size(); ++k)
      out += xs + csv_number(t2[k]) + "," + csv_number(at(i, k)) + "\n";
  }
  return out;
}

std::string CorrelationMap::to_matrix_csv() const {
  std::string out = "x1_um\\t2_fs";
  for (double t : t2)
    out += "," + csv_number(t);
  out += "\n";
  for (std::size_t i = 0; i < x1.size(); ++i) {
    out += csv_number(x1[i]);
    for (std::size_t k = 0; k < t2.size(); ++k)
      out += "," + csv_number(at(i, k));
    out += "\n";
  }
  return out;
}

CorrelationMap correlation_map(const Biphoton& b, const SpectralGrid& g, CorrelationPath path, int workers) {
  const std::size_t nx = g.x1.size();
  const std::size_t N = g.n_fft;
  if (workers <= 0)
    workers = default_workers();
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), nx));

  std::vector<std::unique_ptr<detail::FftPlan>> plans;
  for (int w = 0; w < workers; ++w)
    plans.push_back(std::make_unique<detail::FftPlan>(N));

  // Per-node factor w_j·exp(iD_TΩ_j²/2)·exp(−i j h (τ0 + t_g)); the common
  // phase exp(−i a (τ + t_g)) drops out of |A|².
  const double shift = g.tau0 + b.crystal_group_delay();
  const auto w2 = trapezoid_weights(g.n_omega2);
  std::vector<cplx> kernel(g.n_omega2);
  for (std::size_t j = 0; j < g.n_omega2; ++j) {
    const double o = g.omega2(j);
    kernel[j] = w2[j] * std::polar(1.0, 0.5 * b.filter().gdd_fs2 * o * o - static_cast<double>(j) * g.h * shift);
  }

  CorrelationMap map;
  map.path = path;
  map.x1 = g.x1;
  map.t2.resize(N);
  for (std::size_t k = 0; k < N; ++k)
    map.t2[k] = b.filter().t_test_fs + (g.tau0 + g.dt * static_cast<double>(k));
  map.values.assign(nx * N, 0.0);
  map.band_x1_lo = g.band_x1_lo;
  map.band_x1_hi = g.band_x1_hi;

  std::vector<double> imag(nx, 0.0);
  parallel_for(nx, workers, [&](std::size_t ix, int w) {
    std::span<double> out(map.values.data() + ix * N, N);
    if (path == CorrelationPath::fast)
      fast_column(b, g, g.x1[ix], kernel, *plans[static_cast<std::size_t>(w)], out);
    else
      oracle_column(b, g, g.x1[ix], *plans[static_cast<std::size_t>(w)], out, imag[ix]);
  });

  double peak = 0.0;
  for (double v : map.values)
    peak = std::max(peak, v);
  double imag_max = 0.0;
  for (double v : imag)
    imag_max = std::max(imag_max, v);
  map.raw_peak = peak;
  map.max_imag_residue = peak > 0.0 ? imag_max / peak : 0.0;
  if (peak > 0.0)
    for (auto& v : map.values)
      v /= peak;

  map.meta = b.describe();
  map.meta.merge(g.describe(), "grid.");
  map.meta.set("path", to_string(path));
  map.meta.set("t2_origin", "t2 is measured from the pair's crystal group delay L(k_s'+k_p')/2");
  map.meta.set("fourier_convention", "C(t2) = int Q(Omega-) exp(-i Omega- (t2 - t_T)) dOmega-/2pi");
  map.meta.set("normalization", "global peak = 1");
  map.meta.set("raw_peak", peak);
  map.meta.set("max_imag_residue_rel", map.max_imag_residue);
  if (!(peak > 0.0))
    map.meta.set("warning", "map is identically zero");
  return map;
}

QSpectrum q_spectrum(const Biphoton& b, const SpectralGrid& g, double x1) {
  if (!b.pump().plane_wave())
    throw ConfigError("pump.waist_mm", "Q spectrum is defined for a plane-wave pump only");
  return {g.omega_minus_axis(), q_values(b, g, x1)};
}

std::vector<double> brute_force_C(const Biphoton& b, const SpectralGrid& g, double x1, std::span<const double> t2,
                                  double normalization) {
  if (t2.size() > 16)
    throw ConfigError("brute_force_C evaluates at most 16 times per call");
  std::vector<double> out(t2.size(), 0.0);
  const auto omega1 = g.omega1_axis(b, x1);
  if (omega1.empty())
    return out;

  const double q = camera_q(b, x1);
  const std::size_t M = g.n_omega2;
  const std::size_t n1 = omega1.size();
  const double h1 = omega1[1] - omega1[0];
  const double gdd = b.filter().gdd_fs2;

  // J1 at every (Ω1, Ω2) node, evaluated pointwise.
  std::vector<std::vector<cplx>> J(n1, std::vector<cplx>(M));
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < M; ++j)
      J[i][j] = b.jsaa(q, omega1[i], -q, g.omega2(j), JsaaStage::propagated);

  auto w = [&](std::size_t j) { return (j == 0 || j == M - 1) ? 0.5 : 1.0; };
  auto w1 = [&](std::size_t i) { return (i == 0 || i == n1 - 1) ? 0.5 : 1.0; };

  std::vector<cplx> acc(t2.size(), cplx{});
  for (long m = -static_cast<long>(M) + 1; m <= static_cast<long>(M) - 1; ++m) {
    const double om = static_cast<double>(m) * g.h;
    cplx Q{};
    for (std::size_t i = 0; i < n1; ++i) {
      cplx inner{};
      for (std::size_t j = 0; j < M; ++j) {
        const long jp = static_cast<long>(j) + m;
        if (jp < 0 || jp >= static_cast<long>(M))
          continue;
        const double op = g.omega2_start + (static_cast<double>(j) + 0.5 * static_cast<double>(m)) * g.h;
        inner += w(static_cast<std::size_t>(jp)) * w(j) * J[i][static_cast<std::size_t>(jp)] * std::conj(J[i][j]) *
                 std::polar(1.0, gdd * op * om);
      }
      Q += w1(i) * h1 * inner;
    }
    Q *= g.h / (two_pi * two_pi);
    for (std::size_t k = 0; k < t2.size(); ++k) {
      const double tau = t2[k] - b.filter().t_test_fs + b.crystal_group_delay();
      acc[k] += Q * std::polar(1.0, -om * tau);
    }
  }
  for (std::size_t k = 0; k < t2.size(); ++k)
    out[k] = acc[k].real() * g.h / two_pi / normalization;
  return out;
}

std::string CorrelationMetrics::to_csv() const {
  std::string out = "x1_um,t_peak_fs,fwhm_fs,slice_peak,retained,in_fit\n";
  for (const auto& s : slices) {
    out += csv_number(s.x1) + "," + csv_number(s.t_peak) + "," + (std::isnan(s.fwhm) ? "nan" : csv_number(s.fwhm)) +
           "," + csv_number(s.peak) + "," + (s.retained ? "1" : "0") + "," + (s.in_fit ? "1" : "0") + "\n";
  }
  return out;
}

Metadata CorrelationMetrics::describe() const {
  Metadata m;
  m.set("ridge_slope_fs_per_um", fit.slope);
  m.set("ridge_intercept_fs", fit.intercept);
  m.set("ridge_r2", fit.r2);
  m.set("ridge_fit_points", fit.n);
  m.set("fit_x1_lo_um", fit_x1_lo);
  m.set("fit_x1_hi_um", fit_x1_hi);
  std::string ex;
  for (double x : excluded_x1)
    ex += (ex.empty() ? "" : " ") + csv_number(x);
  m.set("excluded_slices", excluded_x1.size());
  m.set("excluded_x1_um", ex.empty() ? std::string("none") : ex);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : slices) {
    if (s.retained && !std::isnan(s.fwhm)) {
      lo = std::min(lo, s.fwhm);
      hi = std::max(hi, s.fwhm);
    }
  }
  m.set("fwhm_min_fs", lo);
  m.set("fwhm_max_fs", hi);
  return m;
}

CorrelationMetrics extract_metrics(const CorrelationMap& map, double fit_fraction) {
  const std::size_t nx = map.x1.size();
  const std::size_t nt = map.t2.size();
  if (nt < 3)
    throw DomainError("extract_metrics: time axis too short");
  double global = 0.0;
  for (double v : map.values)
    global = std::max(global, v);
  if (!(global > 0.0))
    throw DomainError("extract_metrics: map peak is not positive");
  const double dt = map.t2[1] - map.t2[0];

  CorrelationMetrics out;
  const double center = 0.5 * (map.band_x1_lo + map.band_x1_hi);
  const double half = 0.5 * fit_fraction * (map.band_x1_hi - map.band_x1_lo);
  out.fit_x1_lo = center - half;
  out.fit_x1_hi = center + half;

  for (std::size_t ix = 0; ix < nx; ++ix) {
    const auto s = map.slice(ix);
    SliceMetrics m;
    m.x1 = map.x1[ix];
    const auto kmax = static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
    m.peak = s[kmax];
    m.t_peak = map.t2[kmax];
    if (kmax > 0 && kmax + 1 < nt) {
      const double a = s[kmax - 1];
      const double c = s[kmax + 1];
      const double den = a - 2.0 * m.peak + c;
      if (den < 0.0)
        m.t_peak += 0.5 * (a - c) / den * dt;
    }
    m.retained = m.peak >= 1e-3 * global;
    m.fwhm = std::numeric_limits<double>::quiet_NaN();
    if (m.retained) {
      const double hm = 0.5 * m.peak;
      std::size_t l = kmax;
      while (l > 0 && s[l - 1] >= hm)
        --l;
      std::size_t r = kmax;
      while (r + 1 < nt && s[r + 1] >= hm)
        ++r;
      if (l > 0 && r + 1 < nt) {
        const double tl = map.t2[l - 1] + (hm - s[l - 1]) / (s[l] - s[l - 1]) * dt;
        const double tr = map.t2[r] + (s[r] - hm) / (s[r] - s[r + 1]) * dt;
        m.fwhm = tr - tl;
      }
    } else {
      out.excluded_x1.push_back(m.x1);
    }
    m.in_fit = m.retained && m.x1 >= out.fit_x1_lo && m.x1 <= out.fit_x1_hi;
    out.slices.push_back(m);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& s : out.slices) {
    if (!s.in_fit)
      continue;
    sx += s.x1;
    sy += s.t_peak;
    sxx += s.x1 * s.x1;
    sxy += s.x1 * s.t_peak;
    ++n;
  }
  out.fit.n = n;
  if (n >= 2) {
    const double dn = static_cast<double>(n);
    const double den = dn * sxx - sx * sx;
    out.fit.slope = (dn * sxy - sx * sy) / den;
    out.fit.intercept = (sy - out.fit.slope * sx) / dn;
    const double mean = sy / dn;
    double ss_res = 0, ss_tot = 0;
    for (const auto& s : out.slices) {
      if (!s.in_fit)
        continue;
      const double r = s.t_peak - (out.fit.slope * s.x1 + out.fit.intercept);
      ss_res += r * r;
      ss_tot += (s.t_peak - mean) * (s.t_peak - mean);
    }
    out.fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  }
  return out;
}

std::string GhostImage::to_csv() const {
  std::string out = "x1_um,image_norm\n";
  for (std::size_t i = 0; i < x1.size(); ++i)
    out += csv_number(x1[i]) + "," + csv_number(values[i]) + "\n";
  return out;
}

GhostImage ghost_image(const CorrelationMap& map, std::span<const double> T) {
  if (T.size() != map.t2.size())
    throw ConfigError("object", "transmittance must be sampled on the map's t2 axis");
  for (double v : T)
    if (!(v >= 0.0 && v <= 1.0))
      throw ConfigError("object", "transmittance values must lie in [0, 1]");
  GhostImage img;
  img.x1 = map.x1;
  img.values.assign(map.x1.size(), 0.0);
  const double dt = map.t2.size() > 1 ? map.t2[1] - map.t2[0] : 1.0;
  for (std::size_t i = 0; i < map.x1.size(); ++i) {
    const auto s = map.slice(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
      acc += s[k] * T[k];
    img.values[i] = acc * dt;
  }
  const double peak = *std::max_element(img.values.begin(), img.values.end());
  img.no_signal = !(peak > 0.0);
  if (!img.no_signal)
    for (auto& v : img.values)
      v /= peak;
  return img;
}

} // namespace t2x
