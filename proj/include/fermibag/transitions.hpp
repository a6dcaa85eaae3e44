#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fermibag/model.hpp"
#include "fermibag/specfun.hpp"

namespace fermibag {

// ---------------------------------------------------------------------------
// Phonon states

struct FockState {
  int j = 0;
  friend bool operator==(const FockState&, const FockState&) = default;
};
struct CoherentState {
  CoherentParams coh;
  friend bool operator==(const CoherentState&, const CoherentState&) = default;
};
struct SqueezedState {
  SqueezeParams sq;
  friend bool operator==(const SqueezedState&, const SqueezedState&) = default;
};
struct SqueezedCoherentState {
  CoherentParams coh;
  SqueezeParams sq;
  friend bool operator==(const SqueezedCoherentState&, const SqueezedCoherentState&) = default;
};
struct VacuumState {
  friend bool operator==(const VacuumState&, const VacuumState&) = default;
};

/// Initial or final state of the wall oscillator.
class BosonState {
 public:
  using Variant =
      std::variant<VacuumState, FockState, CoherentState, SqueezedState, SqueezedCoherentState>;

  BosonState() = default;

  static BosonState vacuum() { return BosonState(VacuumState{}); }
  static BosonState fock(int j);
  static BosonState coherent(const CoherentParams& coh) { return BosonState(CoherentState{coh}); }
  static BosonState squeezed(const SqueezeParams& sq) { return BosonState(SqueezedState{sq}); }
  static BosonState squeezed_coherent(const CoherentParams& coh, const SqueezeParams& sq) {
    return BosonState(SqueezedCoherentState{coh, sq});
  }

  const Variant& variant() const { return variant_; }

  /// Canonical representative: every vacuum spelling becomes VacuumState,
  /// squeezed-coherent with r = 0 (beta = 0) becomes coherent (squeezed).
  BosonState normalized() const;

  /// Fock number for Fock states and the vacuum.
  std::optional<int> fock_number() const;

  /// True for vacuum, coherent, squeezed and squeezed-coherent states.
  bool is_gaussian() const;
  /// Coherent amplitude of a Gaussian state (0 where absent).
  Complex beta() const;
  /// Squeezing of a Gaussian state (r = 0 where absent).
  SqueezeParams squeeze() const;

  /// Fock-basis amplitudes c_0..c_{n_max}.
  std::vector<Complex> fock_coefficients(int n_max) const;

  std::string describe() const;

  friend bool operator==(const BosonState& a, const BosonState& b) {
    return a.normalized().variant_ == b.normalized().variant_;
  }

 private:
  explicit BosonState(Variant v) : variant_(std::move(v)) {}
  Variant variant_{VacuumState{}};
};

/// Pair creation of a particle in mode k and an antiparticle in mode k'.
struct TransitionSpec {
  int k = 0;
  int k_prime = 1;
  BosonState initial;
  BosonState final;
  CavityConfig cfg;
  DriveSpec drive;

  void validate() const;
};

enum class FormulaTag {
  General,
  Resonant,
  Fock,
  FockNoDrive,
  VacuumDrive,
  ScNoDrive,
  CompactF,
  CompactC,
  CompactS,
  CompactSC,
  Oracle,
  Dyson1,
};

std::string to_string(FormulaTag tag);
/// Inverse of to_string; throws InvalidArgument on unknown names.
FormulaTag formula_tag_from_string(const std::string& name);

struct TransitionResult {
  double probability = 0.0;  ///< clamped into [0, 1]
  double time = 0.0;
  FormulaTag formula = FormulaTag::General;
  bool resonant = false;
  bool clamped = false;  ///< raw value exceeded 1: perturbation theory broke down
};

/// |Omega - (omega_k + omega_k')| <= 1e-9 Omega.
bool is_resonant(const CavityConfig& cfg, int k, int k_prime);

// ---------------------------------------------------------------------------
// Drive integrals

/// Lambda(t) = int_0^t [lambda_x sin(Omega t') - lambda_p cos(Omega t')
///                      + i (lambda_x cos(Omega t') + lambda_p sin(Omega t'))] dt'.
/// The grid starts at n_quad cells and is doubled until Lambda moves by less
/// than 1e-9; throws QuadratureNotConverged otherwise.
Complex displacement_parameter(const DriveSpec& drive, double t, double omega_mech,
                               int n_quad = 64);

/// xi(t) = Re Lambda(t) cos(Omega t) - Im Lambda(t) sin(Omega t).
double xi(const DriveSpec& drive, double t, double omega_mech);

/// int_0^t xi(t') e^{i freq t'} dt', on the same refined grid as Lambda.
Complex xi_phase_integral(const DriveSpec& drive, double t, double omega_mech, double freq,
                          int n_quad = 64);

// ---------------------------------------------------------------------------
// Transition probabilities

/// (chi_1, chi_2, chi_3) for Fock -> Fock or Gaussian -> vacuum transitions.
std::array<Complex, 3> chi_functions(const TransitionSpec& spec, double t);

/// Full first-order expression including the counter-rotating sinc terms.
TransitionResult probability_general(const TransitionSpec& spec, double t);

/// Secular (resonant) form 4 eps^2 dw^2 |chi_2 t + chi_3 int xi e^{i Omega t'}|^2.
TransitionResult probability_resonant(const TransitionSpec& spec, double t);

/// Fock j -> Fock l on resonance, written with displacement elements of Lambda_t.
TransitionResult probability_fock(const TransitionSpec& spec, double t);

/// Undriven Fock j -> j-1: 4 j eps^2 dw^2 t^2 (zero for any other l).
TransitionResult probability_fock_nodrive(const TransitionSpec& spec, double t);

/// Vacuum -> vacuum under a drive: 4 eps^2 dw^2 e^{-|Lambda|^2} |int xi e^{i w t'}|^2.
TransitionResult probability_vacuum_drive(const TransitionSpec& spec, double t);

/// Undriven squeezed-coherent -> vacuum, closed form in beta and zeta.
TransitionResult probability_sc_nodrive(const TransitionSpec& spec, double t);

// ---------------------------------------------------------------------------
// Long-time impulsive-drive forms. These carry the overall normalization of
// the compact expressions: Gamma_F(1, 0) = 1, which is a
// quarter of the undriven Fock law above.

double gamma_fock(int j, double g);
double gamma_coherent(const CoherentParams& coh, double g);
double gamma_squeezed(const SqueezeParams& sq, double g);
double gamma_sc(const CoherentParams& coh, const SqueezeParams& sq, double g);

enum class CompactKind { F, C, S, SC };

/// eps^2 dw^2 t^2 Gamma_kind(state, g). `state` must fit the kind: Fock j >= 1
/// for F, coherent (or vacuum) for C, squeezed (or vacuum) for S, any
/// Gaussian state for SC.
TransitionResult compact_probability(CompactKind kind, const BosonState& state, double g,
                                     double t, const CavityConfig& cfg, int k, int k_prime);

struct Figure1Row {
  double n_phon = 0.0;
  std::optional<double> gamma_f;  ///< only at integer N >= 1
  double gamma_c = 0.0;
  double gamma_s = 0.0;
  double gamma_sc = 0.0;
};

/// Gamma curves against mean phonon number: j = N, beta = sqrt(N),
/// r = arsinh(sqrt(N)); the squeezed-coherent state splits N evenly between
/// |beta|^2 and sinh^2 r. Phases are zero. Rows follow `n_grid` order;
/// `threads` = 0 picks the hardware concurrency.
std::vector<Figure1Row> sweep_figure1(double g, const std::vector<double>& n_grid,
                                      std::size_t threads = 0);

}  // namespace fermibag
