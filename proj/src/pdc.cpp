#include "t2x/pdc.hpp"

#include <sstream>

#include "t2x/errors.hpp"
#include "t2x/parallel.hpp"
#include "t2x/units.hpp"
#include "text_util.hpp"

namespace t2x {

void PumpConfig::validate() const {
  if (!(tau_fwhm_fs > 0.0) || !std::isfinite(tau_fwhm_fs))
    throw ConfigError("pump.tau_p_fs", "pump.tau_p_fs must be finite and > 0");
  if (!(waist_um > 0.0))
    throw ConfigError("pump.waist_mm", "pump.waist_mm must be > 0 (or inf)");
  if (!std::isfinite(amplitude) || amplitude == 0.0)
    throw ConfigError("pump.amplitude", "pump.amplitude must be finite and nonzero");
}

void FilterGeometryConfig::validate() const {
  if (!(delta_q > 0.0))
    throw ConfigError("filter.delta_q_q0", "filter half-width must be > 0");
  if (!(q_c > delta_q))
    throw ConfigError("filter.q_c_q0", "filter center q_c must exceed the half-width (band must exclude q <= 0)");
  if (!(Omega_c > 0.0))
    throw ConfigError("filter.omega_c_omega0", "frequency filter center must be > 0");
  if (!(focal_length_um > 0.0))
    throw ConfigError("filter.focal_length_mm", "lens focal length must be > 0");
  if (!std::isfinite(gdd_fs2))
    throw ConfigError("filter.gdd_fs2", "test-arm GDD must be finite");
  if (!std::isfinite(t_test_fs))
    throw ConfigError("filter.t_test_fs", "test delay must be finite");
  if (!std::isfinite(t_ref_fs))
    throw ConfigError("filter.t_ref_fs", "reference delay must be finite");
}

cplx pump_envelope(const PumpConfig& pump, double q, double omega) {
  const double wp = pump.bandwidth();
  double arg = -omega * omega / (4.0 * wp * wp);
  if (!pump.plane_wave()) {
    const double qp = pump.q_p();
    arg -= q * q / (4.0 * qp * qp);
  }
  return {pump.amplitude * std::exp(arg), 0.0};
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

int filter_transmission(const FilterGeometryConfig& f, double q, double omega) {
  return (std::abs(q - f.q_c) <= f.delta_q && std::abs(omega - f.Omega_c) <= f.Omega_c) ? 1 : 0;
}

Biphoton::Biphoton(Crystal crystal, PumpConfig pump, FilterGeometryConfig filter)
    : crystal_(std::move(crystal)), pump_(pump), filter_(filter) {
  pump_.validate();
  filter_.validate();
  dispersion_ = dispersion_derivatives(crystal_);
}

double Biphoton::delta_mismatch(double q1, double o1, double q2, double o2) const {
  return crystal_.wavevector_z(Field::signal, q1, o1) + crystal_.wavevector_z(Field::signal, q2, o2) -
         crystal_.wavevector_z(Field::pump, q1 + q2, o1 + o2);
}

cplx Biphoton::phase_matching_function(double q1, double o1, double q2, double o2) const {
  const double x = 0.5 * delta_mismatch(q1, o1, q2, o2) * crystal_.length_um();
  return std::polar(sinc(x), -x);
}

cplx Biphoton::jsaa(double q1, double o1, double q2, double o2, JsaaStage stage) const {
  if (stage != JsaaStage::raw) {
    if (filter_transmission(filter_, q1, o1) == 0 || filter_transmission(filter_, -q2, -o2) == 0)
      return {0.0, 0.0};
  }
  const double L = crystal_.length_um();
  const double kz1 = crystal_.wavevector_z(Field::signal, q1, o1);
  const double kz2 = crystal_.wavevector_z(Field::signal, q2, o2);
  const double kzp = crystal_.wavevector_z(Field::pump, q1 + q2, o1 + o2);
  const double x = 0.5 * (kz1 + kz2 - kzp) * L;
  const cplx env = pump_envelope(pump_, q1 + q2, o1 + o2);
  if (stage == JsaaStage::propagated)
    // exp(−iΔL/2)·exp(i(kz1+kz2)L) collapses to one phase
    return env * std::polar(sinc(x), (kz1 + kz2 + kzp) * L * 0.5);
  return env * std::polar(sinc(x), -x);
}

double Biphoton::crystal_group_delay() const {
  return 0.5 * crystal_.length_um() * (dispersion_.k0_prime + dispersion_.pump_k_prime);
}

Metadata Biphoton::describe() const {
  Metadata m;
  const auto& d = dispersion_;
  m.set("material", crystal_.material().name);
  m.set("material_source", crystal_.material().source);
  m.set("length_um", crystal_.length_um());
  m.set("pump_wavelength_um", crystal_.config().pump_wavelength_um);
  m.set("signal_wavelength_um", crystal_.signal_wavelength_um());
  m.set("cut_angle_deg", units::deg(crystal_.cut_angle_rad()));
  m.set("cut_angle_solved", crystal_.cut_angle_solved());
  m.set("collinear_residual_rad", crystal_.collinear_residual());
  m.set("pump_index_policy", "extraordinary index at fixed cut angle, q-independent");
  m.set("k0_rad_per_um", d.k0);
  m.set("k0_prime_fs_per_um", d.k0_prime);
  m.set("k0_double_prime_fs2_per_um", d.k0_double_prime);
  m.set("k0_double_prime_fd_rel_diff", d.fd_relative_difference);
  m.set("q0_rad_per_mm", units::to_rad_per_mm(d.q0));
  m.set("Omega0_rad_per_ps", units::to_rad_per_ps(d.Omega0));
  m.set("tau_p_fs", pump_.tau_fwhm_fs);
  m.set("Omega_p_rad_per_fs", pump_.bandwidth());
  m.set("waist_um", pump_.waist_um);
  m.set("q_c_rad_per_um", filter_.q_c);
  m.set("delta_q_rad_per_um", filter_.delta_q);
  m.set("Omega_c_rad_per_fs", filter_.Omega_c);
  m.set("focal_length_um", filter_.focal_length_um);
  m.set("gdd_fs2", filter_.gdd_fs2);
  m.set("t_test_fs", filter_.t_test_fs);
  m.set("t_ref_fs", filter_.t_ref_fs);
  m.set("crystal_group_delay_fs", crystal_group_delay());
  return m;
}

Passbands passbands(const Biphoton& b) {
  const auto& d = b.dispersion();
  const auto& f = b.filter();
  const double slope = d.Omega0 / d.q0;
  Passbands p;
  p.ref_omega_lo = std::max(0.0, (f.q_c - f.delta_q) * slope);
  p.ref_omega_hi = std::min(2.0 * f.Omega_c, (f.q_c + f.delta_q) * slope);
  const double ws = b.crystal().omega_signal();
  p.ref_lambda_min_um = units::wavelength_of_omega(ws + p.ref_omega_hi);
  p.ref_lambda_max_um = units::wavelength_of_omega(ws + p.ref_omega_lo);
  if (ws - p.ref_omega_hi <= 0.0)
    throw DomainError("test passband reaches zero frequency");
  p.test_lambda_min_um = units::wavelength_of_omega(ws - p.ref_omega_lo);
  p.test_lambda_max_um = units::wavelength_of_omega(ws - p.ref_omega_hi);
  return p;
}

std::string ComplexField2D::to_csv() const {
  std::string out = axis1_name + "," + axis2_name + ",re,im,abs\n";
  for (std::size_t i = 0; i < axis1.size(); ++i) {
    for (std::size_t j = 0; j < axis2.size(); ++j) {
      const cplx v = at(i, j);
      out += csv_number(axis1[i]) + "," + csv_number(axis2[j]) + "," + csv_number(v.real()) + "," +
             csv_number(v.imag()) + "," + csv_number(std::abs(v)) + "\n";
    }
  }
  return out;
}

ComplexField2D phi_degenerate_map(const Biphoton& b, std::span<const double> q_axis,
                                  std::span<const double> omega_axis, int workers) {
  for (double v : q_axis)
    if (!std::isfinite(v))
      throw ConfigError("phimap axis values must be finite");
  for (double v : omega_axis)
    if (!std::isfinite(v))
      throw ConfigError("phimap axis values must be finite");

  ComplexField2D map;
  map.axis1_name = "q_rad_per_um";
  map.axis2_name = "omega_rad_per_fs";
  map.axis1.assign(q_axis.begin(), q_axis.end());
  map.axis2.assign(omega_axis.begin(), omega_axis.end());
  map.values.assign(q_axis.size() * omega_axis.size(), cplx{});

  std::vector<std::size_t> invalid(q_axis.size(), 0);
  parallel_for(q_axis.size(), workers, [&](std::size_t i, int) {
    const double q = q_axis[i];
    for (std::size_t j = 0; j < omega_axis.size(); ++j) {
      const double w = omega_axis[j];
      try {
        map.values[i * omega_axis.size() + j] = b.phase_matching_function(q, w, -q, -w);
      } catch (const DomainError&) {
        ++invalid[i];
      }
    }
  });

  std::size_t n_invalid = 0;
  for (auto n : invalid)
    n_invalid += n;
  map.meta = b.describe();
  map.meta.set("map", "phase-matching function Phi(q, Omega, -q, -Omega)");
  map.meta.set("invalid_points", n_invalid);
  map.meta.set("invalid_point_rule", "photon outside validated Sellmeier range -> value 0");
  const auto& f = b.filter();
  map.meta.set("mirror_band_q_lo_rad_per_um", f.q_c - f.delta_q);
  map.meta.set("mirror_band_q_hi_rad_per_um", f.q_c + f.delta_q);
  map.meta.set("frequency_filter_lo_rad_per_fs", 0.0);
  map.meta.set("frequency_filter_hi_rad_per_fs", 2.0 * f.Omega_c);
  return map;
}

PhiAxes default_phi_axes(const Biphoton& b, int nq, int nomega) {
  const auto& d = b.dispersion();
  return {linspace(-12.0 * d.q0, 12.0 * d.q0, static_cast<std::size_t>(nq)),
          linspace(-30.0 * d.Omega0, 30.0 * d.Omega0, static_cast<std::size_t>(nomega))};
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + h * static_cast<double>(i);
  if (n > 1)
    v[n - 1] = b;
  return v;
}

} // namespace t2x
