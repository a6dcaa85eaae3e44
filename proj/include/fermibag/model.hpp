#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "fermibag/specfun.hpp"

namespace fermibag {

/// Single bag: a massless spinor field between two walls, the right wall
/// vibrating as a quantum oscillator. Natural units (hbar = c = 1).
struct CavityConfig {
  double length = 1.0;      ///< L > 0
  double epsilon = 0.0;     ///< delta L_0 / L, >= 0
  double omega_mech = 1.0;  ///< wall frequency Omega > 0
  int n_fermion_modes = 1;  ///< particle and antiparticle modes 0..N_f-1

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;

  friend bool operator==(const CavityConfig&, const CavityConfig&) = default;
};

/// Non-fatal diagnostics for a config (e.g. epsilon outside the perturbative
/// regime). Empty when nothing is worth reporting.
std::vector<std::string> config_warnings(const CavityConfig& cfg);

struct DriveOff {
  friend bool operator==(const DriveOff&, const DriveOff&) = default;
};

/// lambda(t) = -(g nu / 2) e^{-nu t} (cos Omega t + i sin Omega t).
struct ImpulsiveDrive {
  double g = 0.0;
  double nu = 1.0;
  friend bool operator==(const ImpulsiveDrive&, const ImpulsiveDrive&) = default;
};

/// Piecewise-linear lambda(t) through (times[i], values[i]).
struct SampledDrive {
  std::vector<double> times;
  std::vector<Complex> values;
  friend bool operator==(const SampledDrive&, const SampledDrive&) = default;
};

/// External drive lambda(t) = lambda_x(t) + i lambda_p(t) on the wall mode.
class DriveSpec {
 public:
  using Variant = std::variant<DriveOff, ImpulsiveDrive, SampledDrive>;

  DriveSpec() = default;

  static DriveSpec off() { return DriveSpec(); }
  static DriveSpec impulsive(double g, double nu);
  static DriveSpec sampled(std::vector<double> times, std::vector<Complex> values);

  const Variant& variant() const { return variant_; }
  bool is_off() const;

  friend bool operator==(const DriveSpec&, const DriveSpec&) = default;

 private:
  explicit DriveSpec(Variant v) : variant_(std::move(v)) {}
  Variant variant_{DriveOff{}};
};

/// N equally spaced spikes; the ones listed in `fluctuating` vibrate, each
/// with its own frequency and drive. The fermionic spectrum is that of `base`.
struct MultiBagConfig {
  int n_spikes = 2;
  std::vector<int> fluctuating;
  std::vector<double> omegas;
  std::vector<DriveSpec> drives;
  CavityConfig base;

  void validate() const;

  /// The single-bag config seen by wall `wall` (base with Omega -> Omega_l).
  CavityConfig wall_config(std::size_t wall) const;
};

enum class Branch { Particle, Antiparticle };

/// omega_n = (n + 1/2) pi / L.
double mode_frequency(int n, double length);

/// Mode spinor components (+-sin(k_n x), cos(k_n x)) / sqrt(L).
std::array<double, 2> mode_spinor(int n, double x, double length, Branch branch);

/// Coefficient of (d_n c_m + d_m^dag c_n^dag)(b^dag + b) in H_I:
/// -2 (-1)^{n+m} (omega_n - omega_m).
double pair_coupling(int n, int m, const CavityConfig& cfg);

/// Coefficient of (c_n^dag c_m + d_m^dag d_n)(b^dag + b) in H_I:
/// -2 (-1)^{n+m} (omega_n + omega_m).
double scatter_coupling(int n, int m, const CavityConfig& cfg);

/// lambda(t). Sampled drives throw InvalidArgument outside their time range.
Complex drive_value(const DriveSpec& drive, double t, double omega_mech);

}  // namespace fermibag
