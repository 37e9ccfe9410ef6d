#include "t2x/dispersion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "t2x/errors.hpp"
#include "t2x/units.hpp"
#include "text_util.hpp"

namespace t2x {

double SellmeierSet::n_squared(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  return b1 + b2 / (l2 - b3) - b4 * l2;
}

namespace materials {

Material bbo() {
  Material m;
  m.name = "BBO";
  m.source = "D. Eimerl, L. Davis, S. Velsko, E. K. Graham, A. Zalkin, "
             "J. Appl. Phys. 62, 1968 (1987)";
  m.lambda_min_um = 0.4;
  m.lambda_max_um = 2.0;
  m.ordinary = {2.7359, 0.01878, 0.01822, 0.01354};
  m.extraordinary = {2.3753, 0.01224, 0.01667, 0.01516};
  return m;
}

std::optional<Material> builtin(const std::string& name) {
  if (detail::lower(name) == "bbo")
    return bbo();
  return std::nullopt;
}

} // namespace materials

namespace {

void validate_material(const Material& m) {
  if (!(m.lambda_min_um > 0.0 && m.lambda_max_um > m.lambda_min_um))
    throw ConfigError("material.range_um", "material '" + m.name + "': invalid validated range");
  // Sample the validated range densely; the rational term has at most one pole.
  constexpr int samples = 400;
  for (int i = 0; i <= samples; ++i) {
    const double l = m.lambda_min_um + (m.lambda_max_um - m.lambda_min_um) * i / samples;
    for (const SellmeierSet* s : {&m.ordinary, &m.extraordinary}) {
      if (l * l <= s->b3)
        throw ConfigError("material", "material '" + m.name + "': Sellmeier pole inside validated range");
      if (!(s->n_squared(l) > 1.0))
        throw ConfigError("material", "material '" + m.name + "': n^2 <= 1 inside validated range");
    }
  }
}

SellmeierSet parse_set(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  SellmeierSet s;
  if (!(is >> s.b1 >> s.b2 >> s.b3 >> s.b4))
    throw ConfigError(key, "material key '" + key + "' needs four coefficients b1 b2 b3 b4");
  std::string extra;
  if (is >> extra)
    throw ConfigError(key, "material key '" + key + "' has trailing text '" + extra + "'");
  return s;
}

void check_range(const Material& m, double lambda_um) {
  if (!(lambda_um >= m.lambda_min_um && lambda_um <= m.lambda_max_um)) {
    std::ostringstream os;
    os << "wavelength " << lambda_um << " um outside the validated range [" << m.lambda_min_um << ", "
       << m.lambda_max_um << "] um of material " << m.name;
    throw DomainError(os.str());
  }
}

IndexDerivatives sellmeier_derivatives(const SellmeierSet& s, double l) {
  const double u = l * l - s.b3;
  const double S = s.n_squared(l);
  const double dS = -2.0 * l * s.b2 / (u * u) - 2.0 * s.b4 * l;
  const double d2S = -2.0 * s.b2 / (u * u) + 8.0 * l * l * s.b2 / (u * u * u) - 2.0 * s.b4;
  const double n = std::sqrt(S);
  return {n, dS / (2.0 * n), d2S / (2.0 * n) - dS * dS / (4.0 * n * n * n)};
}

} // namespace

Material parse_material(const std::string& text) {
  Material m;
  bool have_o = false;
  bool have_e = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(detail::strip_comment(line));
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("material: line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "name") {
      m.name = value;
    } else if (key == "source") {
      m.source = value;
    } else if (key == "range_um") {
      std::istringstream is(value);
      if (!(is >> m.lambda_min_um >> m.lambda_max_um))
        throw ConfigError(key, "material: line " + std::to_string(lineno) + ": range_um needs two numbers");
    } else if (key == "ordinary") {
      m.ordinary = parse_set(key, value);
      have_o = true;
    } else if (key == "extraordinary") {
      m.extraordinary = parse_set(key, value);
      have_e = true;
    } else {
      throw ConfigError(key, "material: line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_o || !have_e)
    throw ConfigError("material", "material table needs both 'ordinary' and 'extraordinary' rows");
  if (m.name.empty())
    m.name = "custom";
  validate_material(m);
  return m;
}

Material load_material(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f)
    throw IoError("cannot open material table " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_material(ss.str());
}

std::string format_material(const Material& m) {
  std::ostringstream os;
  os.precision(17);
  os << "name = " << m.name << "\n";
  os << "source = " << m.source << "\n";
  os << "range_um = " << m.lambda_min_um << " " << m.lambda_max_um << "\n";
  os << "ordinary = " << m.ordinary.b1 << " " << m.ordinary.b2 << " " << m.ordinary.b3 << " "
     << m.ordinary.b4 << "\n";
  os << "extraordinary = " << m.extraordinary.b1 << " " << m.extraordinary.b2 << " " << m.extraordinary.b3
     << " " << m.extraordinary.b4 << "\n";
  return os.str();
}

double refractive_index(const Material& m, Polarization pol, double lambda_um, std::optional<double> theta) {
  check_range(m, lambda_um);
  switch (pol) {
  case Polarization::ordinary:
    return std::sqrt(m.ordinary.n_squared(lambda_um));
  case Polarization::extraordinary_principal:
    return std::sqrt(m.extraordinary.n_squared(lambda_um));
  case Polarization::extraordinary_at_angle: {
    if (!theta)
      throw DomainError("extraordinary-at-angle index needs an angle");
    const double no = std::sqrt(m.ordinary.n_squared(lambda_um));
    const double s = std::sin(*theta);
    if (s == 0.0)
      return no;
    const double ne = std::sqrt(m.extraordinary.n_squared(lambda_um));
    const double c = std::cos(*theta);
    if (c == 0.0)
      return ne;
    // index ellipse: 1/n² = cos²θ/n_o² + sin²θ/n_e²
    return no * ne / std::sqrt(ne * ne * c * c + no * no * s * s);
  }
  }
  throw DomainError("unknown polarization");
}

IndexDerivatives index_derivatives(const Material& m, Polarization pol, double lambda_um) {
  check_range(m, lambda_um);
  switch (pol) {
  case Polarization::ordinary:
    return sellmeier_derivatives(m.ordinary, lambda_um);
  case Polarization::extraordinary_principal:
    return sellmeier_derivatives(m.extraordinary, lambda_um);
  case Polarization::extraordinary_at_angle:
    break;
  }
  throw DomainError("index_derivatives: angle-dependent index not supported");
}

double phase_matching_angle(const Material& m, double pump_wavelength_um, double signal_wavelength_um) {
  const double target = refractive_index(m, Polarization::ordinary, signal_wavelength_um);
  auto g = [&](double theta) {
    return refractive_index(m, Polarization::extraordinary_at_angle, pump_wavelength_um, theta) - target;
  };
  double lo = 0.0;
  double hi = units::pi / 2.0;
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0)
    throw DomainError("not phase-matchable: matching only at theta = 0");
  if ((glo > 0.0) == (ghi > 0.0))
    throw DomainError("not phase-matchable: n_e(theta, pump) - n_o(signal) has no sign change on (0, pi/2)");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0)
      return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Crystal::Crystal(CrystalConfig config) : config_(std::move(config)) {
  if (!(config_.length_um > 0.0))
    throw ConfigError("crystal.length_mm", "crystal length must be > 0");
  if (!(config_.pump_wavelength_um > 0.0))
    throw ConfigError("crystal.pump_wavelength_nm", "pump wavelength must be > 0");
  omega_p_ = units::omega_of_wavelength(config_.pump_wavelength_um);
  omega_s_ = 0.5 * omega_p_;
  if (config_.cut_angle_rad) {
    theta_pm_ = *config_.cut_angle_rad;
    if (!(theta_pm_ > 0.0 && theta_pm_ < units::pi / 2.0))
      throw ConfigError("crystal.cut_angle_deg", "cut angle must lie in (0, 90) deg");
  } else {
    theta_pm_ = phase_matching_angle(config_.material, config_.pump_wavelength_um, signal_wavelength_um());
    if (std::abs(collinear_residual()) >= 1e-6)
      throw DomainError("phase-matching solver residual above 1e-6 rad");
  }
}

double Crystal::k_signal(double omega_detuning) const {
  const double w = omega_s_ + omega_detuning;
  if (!(w > 0.0))
    throw DomainError("signal frequency must be positive");
  const double n = refractive_index(config_.material, Polarization::ordinary, units::wavelength_of_omega(w));
  return n * w / units::c_um_per_fs;
}

double Crystal::k_pump(double omega_detuning) const {
  const double w = omega_p_ + omega_detuning;
  if (!(w > 0.0))
    throw DomainError("pump frequency must be positive");
  const double n = refractive_index(config_.material, Polarization::extraordinary_at_angle,
                                    units::wavelength_of_omega(w), theta_pm_);
  return n * w / units::c_um_per_fs;
}

double Crystal::wavevector_z(Field field, double q, double omega_detuning) const {
  const double k = field == Field::signal ? k_signal(omega_detuning) : k_pump(omega_detuning);
  const double r = k * k - q * q;
  if (r < 0.0)
    throw DomainError("evanescent wave: |q| exceeds k");
  return std::sqrt(r);
}

double Crystal::collinear_residual() const {
  return (2.0 * k_signal(0.0) - k_pump(0.0)) * config_.length_um;
}

DispersionSummary dispersion_derivatives(const Crystal& crystal) {
  const double c = units::c_um_per_fs;
  const double lambda = crystal.signal_wavelength_um();
  const auto d = index_derivatives(crystal.material(), Polarization::ordinary, lambda);

  DispersionSummary s;
  s.k0 = crystal.k_signal(0.0);
  s.k0_prime = (d.n - lambda * d.dn) / c;
  s.k0_double_prime = lambda * lambda * lambda * d.d2n / (units::two_pi * c * c);

  const double L = crystal.length_um();
  s.q0 = std::sqrt(s.k0 / L);
  s.Omega0 = std::sqrt(1.0 / (s.k0_double_prime * L));

  constexpr double step = 1e-3;
  auto ks = [&](double w) { return crystal.k_signal(w); };
  s.k0_double_prime_fd = central_second(ks, 0.0, step);
  s.fd_relative_difference = std::abs(s.k0_double_prime_fd - s.k0_double_prime) / std::abs(s.k0_double_prime);

  auto kp = [&](double w) { return crystal.k_pump(w); };
  s.pump_k_prime = central_first(kp, 0.0, step);
  return s;
}

CharacteristicScales characteristic_scales(const Crystal& crystal) {
  const auto s = dispersion_derivatives(crystal);
  return {s.q0, s.Omega0};
}

} // namespace t2x
