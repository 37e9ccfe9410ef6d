#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace t2x {

/// Sellmeier coefficients of the form n²(λ) = b1 + b2/(λ² − b3) − b4·λ², λ in µm.
struct SellmeierSet {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double b4 = 0.0;

  double n_squared(double lambda_um) const;

  bool operator==(const SellmeierSet&) const = default;
};

/// Uniaxial material table: one Sellmeier set per polarization plus the
/// wavelength range over which the fit is trusted.
struct Material {
  std::string name;
  std::string source;
  double lambda_min_um = 0.4;
  double lambda_max_um = 2.0;
  SellmeierSet ordinary;
  SellmeierSet extraordinary;

  bool operator==(const Material&) const = default;
};

namespace materials {
/// Beta-barium borate, built-in copy of data/materials/bbo.txt.
Material bbo();
/// Look up a built-in table by (case-insensitive) name.
std::optional<Material> builtin(const std::string& name);
} // namespace materials

/// Parse a material table ("key = value" lines, `#` comments).
Material parse_material(const std::string& text);
Material load_material(const std::filesystem::path& path);
std::string format_material(const Material& m);

enum class Polarization { ordinary, extraordinary_principal, extraordinary_at_angle };

/// Refractive index. `theta` (angle to the optic axis, rad) is required for
/// extraordinary_at_angle and ignored otherwise. Throws DomainError when λ
/// is outside the table's validated range.
double refractive_index(const Material& m, Polarization pol, double lambda_um,
                        std::optional<double> theta = std::nullopt);

/// n, dn/dλ, d²n/dλ² of the ordinary or principal extraordinary index.
struct IndexDerivatives {
  double n;
  double dn;
  double d2n;
};
IndexDerivatives index_derivatives(const Material& m, Polarization pol, double lambda_um);

/// Collinear type-I cut angle: solves n_e(θ, λ_p) = n_o(λ_s) by bisection.
/// Throws DomainError("not phase-matchable") when no root exists on (0, π/2).
double phase_matching_angle(const Material& m, double pump_wavelength_um,
                            double signal_wavelength_um);

struct CrystalConfig {
  Material material = materials::bbo();
  double length_um = 5000.0;
  double pump_wavelength_um = 0.532;
  /// Empty means "solve for collinear degenerate matching".
  std::optional<double> cut_angle_rad;

  bool operator==(const CrystalConfig&) const = default;
};

enum class Field { signal, pump };

/// A validated crystal with its cut angle resolved. Signal (subharmonic) is
/// the ordinary wave at ω_s = ω_p/2; the pump is extraordinary at θ_pm.
///
/// The extraordinary index of the pump is taken at the fixed cut angle for
/// every transverse wave vector. All correlation quantities evaluate the pump
/// at q1 + q2 = 0, so the q-dependence of n_e never enters.
class Crystal {
public:
  explicit Crystal(CrystalConfig config);

  const CrystalConfig& config() const noexcept { return config_; }
  const Material& material() const noexcept { return config_.material; }
  double length_um() const noexcept { return config_.length_um; }
  double cut_angle_rad() const noexcept { return theta_pm_; }
  bool cut_angle_solved() const noexcept { return !config_.cut_angle_rad.has_value(); }
  double omega_pump() const noexcept { return omega_p_; }
  double omega_signal() const noexcept { return omega_s_; }
  double signal_wavelength_um() const noexcept { return 2.0 * config_.pump_wavelength_um; }

  /// Wave-vector modulus k_s(Ω) of the signal at detuning Ω (rad/fs).
  double k_signal(double omega_detuning) const;
  /// Wave-vector modulus of the pump at detuning Ω from ω_p.
  double k_pump(double omega_detuning) const;

  /// sqrt(k²(Ω) − q²); DomainError if |q| > k.
  double wavevector_z(Field field, double q, double omega_detuning) const;

  /// (2k_s(0) − k_p(0))·L, the collinear degenerate mismatch phase.
  double collinear_residual() const;

private:
  CrystalConfig config_;
  double theta_pm_ = 0.0;
  double omega_p_ = 0.0;
  double omega_s_ = 0.0;
};

/// Derivatives of k_s(Ω) at Ω = 0 plus the derived characteristic scales.
struct DispersionSummary {
  double k0 = 0.0;              ///< rad/µm
  double k0_prime = 0.0;        ///< fs/µm
  double k0_double_prime = 0.0; ///< fs²/µm
  double q0 = 0.0;              ///< rad/µm
  double Omega0 = 0.0;          ///< rad/fs
  double pump_k_prime = 0.0;    ///< fs/µm, pump group delay per length
  double k0_double_prime_fd = 0.0; ///< finite-difference cross-check
  double fd_relative_difference = 0.0;
};

/// Analytic chain-rule derivatives, cross-checked with a 5-point stencil
/// (step 1e-3 rad/fs).
DispersionSummary dispersion_derivatives(const Crystal& crystal);

struct CharacteristicScales {
  double q0;     ///< sqrt(k0/L), rad/µm
  double Omega0; ///< sqrt(1/(k0''·L)), rad/fs
};
CharacteristicScales characteristic_scales(const Crystal& crystal);

/// Five-point central difference stencils, exposed for tests.
template <class F> double central_first(F&& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}
template <class F> double central_second(F&& f, double x, double h) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
}

} // namespace t2x
