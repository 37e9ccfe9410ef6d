#pragma once

#include <numbers>

// Canonical units inside the library: µm, fs, rad/µm, rad/fs, fs².
namespace t2x::units {

inline constexpr double c_um_per_fs = 0.299792458;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double um_per_mm = 1.0e3;
inline constexpr double um_per_nm = 1.0e-3;
inline constexpr double fs_per_ps = 1.0e3;

/// rad/µm -> rad/mm
constexpr double to_rad_per_mm(double rad_per_um) { return rad_per_um * um_per_mm; }
/// rad/fs -> rad/ps
constexpr double to_rad_per_ps(double rad_per_fs) { return rad_per_fs * fs_per_ps; }

constexpr double deg(double rad) { return rad * 180.0 / pi; }
constexpr double rad(double deg) { return deg * pi / 180.0; }

/// Angular frequency (rad/fs) of vacuum wavelength λ (µm).
constexpr double omega_of_wavelength(double lambda_um) { return two_pi * c_um_per_fs / lambda_um; }
/// Vacuum wavelength (µm) of angular frequency ω (rad/fs).
constexpr double wavelength_of_omega(double omega) { return two_pi * c_um_per_fs / omega; }

} // namespace t2x::units
