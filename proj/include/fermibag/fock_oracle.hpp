#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "fermibag/model.hpp"
#include "fermibag/transitions.hpp"

namespace fermibag {

using OperatorMatrix = Eigen::SparseMatrix<std::complex<double>>;
using StateVector = Eigen::VectorXcd;

/// Truncated wall Fock space (levels 0..N_b) times the fermionic Fock space
/// of N_f particle and N_f antiparticle modes.
///
/// Basis index = fermion_bits + 2^(2 N_f) * boson_level. Bit n is particle
/// mode n, bit N_f + n is antiparticle mode n. Jordan-Wigner strings run over
/// lower bits, so the canonical basis ket with a set of occupied modes equals
/// the product of creators applied in descending bit order to the vacuum
/// (particle creators leftmost): |..., 1_n, ..., 1bar_m, ...> = c_n^dag d_m^dag |0>.
class HilbertSpace {
 public:
  static constexpr std::int64_t kDefaultDimLimit = std::int64_t{1} << 20;

  HilbertSpace(int n_boson_levels, int n_fermion_modes,
               std::int64_t dim_limit = kDefaultDimLimit);

  int n_boson_levels() const { return n_boson_levels_; }  // N_b, top level index
  int n_fermion_modes() const { return n_fermion_modes_; }
  int fermion_dim() const { return fermion_dim_; }
  int dim() const { return dim_; }

  int index(int boson_level, std::uint32_t fermion_bits) const;
  int boson_level(int index) const { return index / fermion_dim_; }
  std::uint32_t fermion_bits(int index) const {
    return static_cast<std::uint32_t>(index % fermion_dim_);
  }

  std::uint32_t particle_bit(int n) const;
  std::uint32_t antiparticle_bit(int n) const;

  /// Index of |x; 1_k, 1bar_k'> (all other modes empty).
  int pair_index(int boson_level, int k, int k_prime) const;

  /// Sign s with d_{k'}^dag c_k^dag |x; vac> = s |x; 1_k, 1bar_k'>, i.e. the
  /// sign picked up by the operator ordering used in the interaction term.
  double pair_creation_sign(int k, int k_prime) const;

  /// Basis vector |boson_level; fermion_bits>.
  StateVector basis_state(int boson_level, std::uint32_t fermion_bits) const;

  /// Phonon state (truncated to the space and renormalized) times the
  /// fermionic vacuum. Throws InvalidArgument if truncation drops more than
  /// `max_loss` of its norm.
  StateVector product_state(const BosonState& phonons, std::uint32_t fermion_bits = 0,
                            double max_loss = 1e-6) const;

 private:
  int n_boson_levels_;
  int n_fermion_modes_;
  int fermion_dim_;
  int dim_;
};

/// build_space(n_b, n_f) from the operation list: same as the constructor.
HilbertSpace build_space(int n_boson_levels, int n_fermion_modes,
                         std::int64_t dim_limit = HilbertSpace::kDefaultDimLimit);

struct FermionOperators {
  std::vector<OperatorMatrix> c, c_dag, d, d_dag;
};

struct BosonOperators {
  OperatorMatrix b, b_dag;
};

FermionOperators fermion_operators(const HilbertSpace& space);
BosonOperators boson_operators(const HilbertSpace& space);

/// H(t) = H_0 + eps H_I + lambda(t) b^dag + lambda^*(t) b, normal ordered.
OperatorMatrix build_hamiltonian(const HilbertSpace& space, const CavityConfig& cfg,
                                 const DriveSpec& drive, double t);

struct GroundState {
  double energy = 0.0;
  StateVector state;
};

/// Lowest eigenpair of the undriven Hamiltonian. The phase is fixed so that
/// the largest-magnitude amplitude is real and positive.
GroundState exact_ground_state(const HilbertSpace& space, const CavityConfig& cfg);

/// Stepwise propagation psi(t + dt) = exp(-i H(t + dt/2) dt) psi(t).
///
/// Each step exponential is exactly unitary (Hermitian eigendecomposition);
/// the undriven Hamiltonian is diagonalized once. The step must satisfy
/// ||H||_inf dt < 0.5 (StepSizeViolation) and the final norm must stay within
/// 1e-9 of the initial norm (NormDriftViolation).
class Propagator {
 public:
  Propagator(const HilbertSpace& space, const CavityConfig& cfg, DriveSpec drive);

  using Observer = std::function<void(int step, double t, const StateVector& psi)>;

  /// Observer is called with step 0 before the first step and after every step.
  StateVector run(const StateVector& psi0, double t_final, int n_steps,
                  const Observer& observer = {}) const;

  const OperatorMatrix& static_hamiltonian() const { return h_static_; }

 private:
  HilbertSpace space_;
  CavityConfig cfg_;
  DriveSpec drive_;
  OperatorMatrix h_static_;
  OperatorMatrix b_;
  OperatorMatrix b_dag_;
  double static_norm_ = 0.0;
  double drive_operator_norm_ = 0.0;
};

StateVector propagate(const HilbertSpace& space, const CavityConfig& cfg, const DriveSpec& drive,
                      const StateVector& psi0, double t_final, int n_steps);

/// Displacement actually generated by lambda b^dag + lambda^* b in the frame
/// rotating with Omega: alpha(t) = -i int_0^t lambda(t') e^{i Omega t'} dt'.
/// For drives with lambda_p = 0 this is the complex conjugate of
/// displacement_parameter().
Complex effective_displacement(const DriveSpec& drive, double t, double omega_mech,
                               int n_quad = 64);

/// First-order Dyson amplitude <psi_f; 1_k, 1bar_k'| U(t) |psi_i; vac>,
///   -i eps int_0^t <f| U_0(t) D(alpha_t) H~_I(t') |i> dt',
/// with the wall coupling (e^{i Omega t'} b^dag + e^{-i Omega t'} b + 2 xi(t'))
/// and xi(t') = Re(alpha(t') e^{-i Omega t'}). The t' integral is done by
/// refined Simpson quadrature; matrix elements come from truncated Fock
/// vectors and displacement_element. Phases follow the canonical basis of
/// HilbertSpace and include the c-number phase of the driven wall
/// propagator, so the result is comparable with propagated amplitudes.
Complex dyson1_amplitude(const TransitionSpec& spec, double t, int n_quad = 64);

/// |dyson1_amplitude|^2 packaged as a result.
TransitionResult probability_dyson1(const TransitionSpec& spec, double t, int n_quad = 64);

}  // namespace fermibag
