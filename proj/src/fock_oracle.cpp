#include "fermibag/fock_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fermibag/errors.hpp"
#include "quadrature.hpp"
#include "unitary_exp.hpp"

namespace fermibag {

namespace {

using Triplet = Eigen::Triplet<std::complex<double>>;

constexpr int kDenseLimit = 8192;

OperatorMatrix from_triplets(int dim, const std::vector<Triplet>& entries) {
  OperatorMatrix m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

// Annihilator for fermion bit q with the Jordan-Wigner string over lower bits.
OperatorMatrix jordan_wigner_annihilator(const HilbertSpace& space, std::uint32_t q) {
  std::vector<Triplet> entries;
  const std::uint32_t mask = 1u << q;
  const std::uint32_t lower = mask - 1u;
  for (int i = 0; i < space.dim(); ++i) {
    const std::uint32_t bits = space.fermion_bits(i);
    if (!(bits & mask)) continue;
    const double sign = std::popcount(bits & lower) % 2 == 0 ? 1.0 : -1.0;
    entries.emplace_back(space.index(space.boson_level(i), bits ^ mask), i, sign);
  }
  return from_triplets(space.dim(), entries);
}

double max_row_sum(const Eigen::MatrixXcd& h) {
  return h.cwiseAbs().rowwise().sum().maxCoeff();
}

double max_row_sum(const OperatorMatrix& h) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(h.rows());
  for (int col = 0; col < h.outerSize(); ++col) {
    for (OperatorMatrix::InnerIterator it(h, col); it; ++it) sums(it.row()) += std::abs(it.value());
  }
  return sums.size() ? sums.maxCoeff() : 0.0;
}

// Truncated Fock amplitudes of a phonon state, grown until the dropped
// population is negligible.
std::vector<Complex> phonon_vector(const BosonState& state) {
  if (const auto j = state.fock_number()) return state.fock_coefficients(*j);
  for (int n_max = 32;; n_max *= 2) {
    auto c = state.fock_coefficients(n_max);
    double mass = 0.0;
    for (const auto& x : c) mass += std::norm(x);
    if (1.0 - mass < 1e-13) return c;
    if (n_max >= 512) {
      throw CutoffTooSmall("dyson1_amplitude: phonon state not captured by 512 levels");
    }
  }
}

// <f| e^{-i Omega t b^dag b} D(alpha) |v> with exact displacement elements.
Complex displaced_overlap(const std::vector<Complex>& f, const std::vector<Complex>& v,
                          Complex alpha, double omega_t) {
  Complex acc = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) {
    if (f[m] == 0.0) continue;
    Complex row = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
      if (v[n] == 0.0) continue;
      row += displacement_element(static_cast<int>(m), static_cast<int>(n), alpha) * v[n];
    }
    acc += std::conj(f[m]) * std::polar(1.0, -double(m) * omega_t) * row;
  }
  return acc;
}

std::vector<Complex> raise(const std::vector<Complex>& v) {
  std::vector<Complex> out(v.size() + 1, 0.0);
  for (std::size_t n = 0; n < v.size(); ++n) out[n + 1] = std::sqrt(double(n + 1)) * v[n];
  return out;
}

std::vector<Complex> lower(const std::vector<Complex>& v) {
  std::vector<Complex> out(v.size(), 0.0);
  for (std::size_t n = 1; n < v.size(); ++n) out[n - 1] = std::sqrt(double(n)) * v[n];
  return out;
}

Complex alpha_integrand(const DriveSpec& drive, double omega, double t) {
  return Complex(0.0, -1.0) * drive_value(drive, t, omega) * std::polar(1.0, omega * t);
}

// c-number phase of the driven wall propagator, U = e^{i phi} D(alpha) in the
// rotating frame: phi(t) = int_0^t Im(alpha'(s) alpha^*(s)) ds.
double drive_phase(const DriveSpec& drive, double omega, double t) {
  const Complex phi = detail::refine_until_converged(
      [&](int cells) {
        const auto alpha = detail::cumulative_integral(
            [&](double s) { return alpha_integrand(drive, omega, s); }, t, cells);
        const double h = t / cells;
        std::vector<Complex> values(alpha.size());
        for (std::size_t i = 0; i < alpha.size(); ++i) {
          values[i] = (alpha_integrand(drive, omega, i * h) * std::conj(alpha[i])).imag();
        }
        return detail::simpson(values, h);
      },
      64, 1e-12, 1 << 22, "dyson1_amplitude");
  return phi.real();
}

}  // namespace

// ---------------------------------------------------------------------------
// HilbertSpace

HilbertSpace::HilbertSpace(int n_boson_levels, int n_fermion_modes, std::int64_t dim_limit)
    : n_boson_levels_(n_boson_levels), n_fermion_modes_(n_fermion_modes) {
  if (n_boson_levels < 0) throw InvalidArgument("n_boson_levels must be >= 0");
  if (n_fermion_modes < 1) throw InvalidArgument("n_fermion_modes must be >= 1");
  if (2 * n_fermion_modes > 30) {
    throw DimensionLimitExceeded("too many fermion modes for the bit-mask basis");
  }
  const std::int64_t fdim = std::int64_t{1} << (2 * n_fermion_modes);
  const std::int64_t dim = fdim * (n_boson_levels + std::int64_t{1});
  if (dim > dim_limit) {
    throw DimensionLimitExceeded("Hilbert space dimension " + std::to_string(dim) +
                                 " exceeds limit " + std::to_string(dim_limit));
  }
  fermion_dim_ = static_cast<int>(fdim);
  dim_ = static_cast<int>(dim);
}

int HilbertSpace::index(int boson_level, std::uint32_t fermion_bits) const {
  if (boson_level < 0 || boson_level > n_boson_levels_ ||
      fermion_bits >= static_cast<std::uint32_t>(fermion_dim_)) {
    throw InvalidArgument("basis label outside the truncated space");
  }
  return static_cast<int>(fermion_bits) + fermion_dim_ * boson_level;
}

std::uint32_t HilbertSpace::particle_bit(int n) const {
  if (n < 0 || n >= n_fermion_modes_) throw InvalidArgument("particle mode out of range");
  return static_cast<std::uint32_t>(n);
}

std::uint32_t HilbertSpace::antiparticle_bit(int n) const {
  if (n < 0 || n >= n_fermion_modes_) throw InvalidArgument("antiparticle mode out of range");
  return static_cast<std::uint32_t>(n_fermion_modes_ + n);
}

int HilbertSpace::pair_index(int boson_level, int k, int k_prime) const {
  return index(boson_level, (1u << particle_bit(k)) | (1u << antiparticle_bit(k_prime)));
}

double HilbertSpace::pair_creation_sign(int k, int k_prime) const {
  // c_k^dag on the vacuum passes no occupied bits; d_k'^dag then passes bit k
  // exactly when k sits below it, which it always does.
  const std::uint32_t p = particle_bit(k);
  const std::uint32_t a = antiparticle_bit(k_prime);
  const std::uint32_t after_c = 1u << p;
  return std::popcount(after_c & ((1u << a) - 1u)) % 2 == 0 ? 1.0 : -1.0;
}

StateVector HilbertSpace::basis_state(int boson_level, std::uint32_t fermion_bits) const {
  StateVector v = StateVector::Zero(dim_);
  v(index(boson_level, fermion_bits)) = 1.0;
  return v;
}

StateVector HilbertSpace::product_state(const BosonState& phonons, std::uint32_t fermion_bits,
                                        double max_loss) const {
  const auto c = phonons.fock_coefficients(n_boson_levels_);
  double mass = 0.0;
  for (const auto& x : c) mass += std::norm(x);
  if (1.0 - mass > max_loss) {
    throw InvalidArgument("phonon state " + phonons.describe() + " loses " +
                          std::to_string(1.0 - mass) + " of its norm at N_b = " +
                          std::to_string(n_boson_levels_));
  }
  StateVector v = StateVector::Zero(dim_);
  const double scale = 1.0 / std::sqrt(mass);
  for (int x = 0; x <= n_boson_levels_; ++x) v(index(x, fermion_bits)) = c[x] * scale;
  return v;
}

HilbertSpace build_space(int n_boson_levels, int n_fermion_modes, std::int64_t dim_limit) {
  return HilbertSpace(n_boson_levels, n_fermion_modes, dim_limit);
}

// ---------------------------------------------------------------------------
// Operators

FermionOperators fermion_operators(const HilbertSpace& space) {
  FermionOperators ops;
  for (int n = 0; n < space.n_fermion_modes(); ++n) {
    ops.c.push_back(jordan_wigner_annihilator(space, space.particle_bit(n)));
    ops.c_dag.push_back(ops.c.back().adjoint());
    ops.d.push_back(jordan_wigner_annihilator(space, space.antiparticle_bit(n)));
    ops.d_dag.push_back(ops.d.back().adjoint());
  }
  return ops;
}

BosonOperators boson_operators(const HilbertSpace& space) {
  std::vector<Triplet> entries;
  for (int i = 0; i < space.dim(); ++i) {
    const int x = space.boson_level(i);
    if (x == 0) continue;
    entries.emplace_back(space.index(x - 1, space.fermion_bits(i)), i, std::sqrt(double(x)));
  }
  BosonOperators ops;
  ops.b = from_triplets(space.dim(), entries);
  ops.b_dag = ops.b.adjoint();
  return ops;
}

namespace {

OperatorMatrix assemble_static(const HilbertSpace& space, const CavityConfig& cfg,
                                  const FermionOperators& f, const BosonOperators& bos) {
  cfg.validate();
  if (cfg.n_fermion_modes != space.n_fermion_modes()) {
    throw InvalidArgument("build_hamiltonian: cavity cutoff differs from the Hilbert space");
  }
  const int nf = cfg.n_fermion_modes;
  OperatorMatrix h0 = cfg.omega_mech * (bos.b_dag * bos.b);
  for (int n = 0; n < nf; ++n) {
    const double w = mode_frequency(n, cfg.length);
    h0 += w * (f.c_dag[n] * f.c[n]);
    h0 += w * (f.d_dag[n] * f.d[n]);
  }
  if (cfg.epsilon == 0.0) return h0;

  OperatorMatrix fermion_part(space.dim(), space.dim());
  for (int n = 0; n < nf; ++n) {
    for (int m = 0; m < nf; ++m) {
      const double s = scatter_coupling(n, m, cfg);
      fermion_part += s * (f.c_dag[n] * f.c[m]);
      fermion_part += s * (f.d_dag[m] * f.d[n]);
      const double a = pair_coupling(n, m, cfg);
      if (a == 0.0) continue;
      fermion_part += a * (f.d[n] * f.c[m]);
      fermion_part += a * (f.d_dag[m] * f.c_dag[n]);
    }
  }
  OperatorMatrix position = bos.b_dag + bos.b;
  OperatorMatrix h = h0 + cfg.epsilon * OperatorMatrix(fermion_part * position);
  h.prune(std::complex<double>(0.0), 0.0);
  return h;
}

}  // namespace

OperatorMatrix build_hamiltonian(const HilbertSpace& space, const CavityConfig& cfg,
                                 const DriveSpec& drive, double t) {
  const auto f = fermion_operators(space);
  const auto bos = boson_operators(space);
  OperatorMatrix h = assemble_static(space, cfg, f, bos);
  const Complex lam = drive_value(drive, t, cfg.omega_mech);
  if (lam != 0.0) {
    h += lam * bos.b_dag;
    h += std::conj(lam) * bos.b;
  }
  return h;
}

GroundState exact_ground_state(const HilbertSpace& space, const CavityConfig& cfg) {
  if (space.dim() > kDenseLimit) {
    throw DimensionLimitExceeded("exact_ground_state: dense diagonalization limited to " +
                                 std::to_string(kDenseLimit));
  }
  const Eigen::MatrixXcd h(build_hamiltonian(space, cfg, DriveSpec::off(), 0.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw EigensolverFailure("exact_ground_state: eigensolver did not converge");
  }
  GroundState out;
  out.energy = solver.eigenvalues()(0);
  out.state = solver.eigenvectors().col(0);
  Eigen::Index top = 0;
  out.state.cwiseAbs().maxCoeff(&top);
  out.state *= std::polar(1.0, -std::arg(out.state(top)));
  return out;
}

// ---------------------------------------------------------------------------
// Propagation

Propagator::Propagator(const HilbertSpace& space, const CavityConfig& cfg, DriveSpec drive)
    : space_(space), cfg_(cfg), drive_(std::move(drive)) {
  if (space.dim() > kDenseLimit) {
    throw DimensionLimitExceeded("Propagator: dense step exponentials limited to " +
                                 std::to_string(kDenseLimit));
  }
  const auto f = fermion_operators(space);
  const auto bos = boson_operators(space);
  h_static_ = assemble_static(space, cfg, f, bos);
  b_ = bos.b;
  b_dag_ = bos.b_dag;
  static_norm_ = max_row_sum(h_static_);
  drive_operator_norm_ = max_row_sum(OperatorMatrix(b_ + b_dag_));
}

StateVector Propagator::run(const StateVector& psi0, double t_final, int n_steps,
                            const Observer& observer) const {
  if (psi0.size() != space_.dim()) throw InvalidArgument("propagate: state dimension mismatch");
  if (!(std::isfinite(t_final) && t_final >= 0.0)) {
    throw InvalidArgument("propagate: t_final must be >= 0");
  }
  if (n_steps < 1) throw InvalidArgument("propagate: n_steps must be >= 1");

  const double dt = t_final / n_steps;
  const double norm0 = psi0.norm();
  StateVector psi = psi0;
  if (observer) observer(0, 0.0, psi);

  if (drive_.is_off()) {
    if (static_norm_ * dt >= 0.5) {
      throw StepSizeViolation("propagate: ||H|| dt = " + std::to_string(static_norm_ * dt) +
                              " >= 0.5; increase n_steps");
    }
    const detail::HermitianExponential expo{Eigen::MatrixXcd(h_static_)};
    const Eigen::MatrixXcd step = expo.unitary(dt);
    for (int s = 0; s < n_steps; ++s) {
      psi = step * psi;
      if (observer) observer(s + 1, (s + 1) * dt, psi);
    }
  } else {
    const Eigen::MatrixXcd h_static(h_static_);
    const Eigen::MatrixXcd b(b_);
    const Eigen::MatrixXcd b_dag(b_dag_);
    for (int s = 0; s < n_steps; ++s) {
      const double t_mid = (s + 0.5) * dt;
      const Complex lam = drive_value(drive_, t_mid, cfg_.omega_mech);
      const Eigen::MatrixXcd h = h_static + lam * b_dag + std::conj(lam) * b;
      const double bound = max_row_sum(h) * dt;
      if (bound >= 0.5) {
        throw StepSizeViolation("propagate: ||H(t)|| dt = " + std::to_string(bound) +
                                " >= 0.5 at t = " + std::to_string(t_mid));
      }
      psi = detail::HermitianExponential(h).apply(dt, psi);
      if (observer) observer(s + 1, (s + 1) * dt, psi);
    }
  }

  const double drift = std::abs(psi.norm() - norm0);
  if (drift > 1e-9) {
    throw NormDriftViolation("propagate: norm drifted by " + std::to_string(drift));
  }
  return psi;
}

StateVector propagate(const HilbertSpace& space, const CavityConfig& cfg, const DriveSpec& drive,
                      const StateVector& psi0, double t_final, int n_steps) {
  return Propagator(space, cfg, drive).run(psi0, t_final, n_steps);
}

// ---------------------------------------------------------------------------
// First-order Dyson amplitude

Complex effective_displacement(const DriveSpec& drive, double t, double omega_mech, int n_quad) {
  if (!(std::isfinite(t) && t >= 0.0)) throw InvalidArgument("time must be >= 0");
  if (n_quad < 16) throw InvalidArgument("effective_displacement: n_quad must be >= 16");
  if (t == 0.0 || std::holds_alternative<DriveOff>(drive.variant())) return 0.0;
  return detail::refine_until_converged(
      [&](int cells) {
        return detail::cumulative_integral(
                   [&](double s) { return alpha_integrand(drive, omega_mech, s); }, t, cells)
            .back();
      },
      n_quad, 1e-10, 1 << 22, "effective_displacement");
}

Complex dyson1_amplitude(const TransitionSpec& spec, double t, int n_quad) {
  spec.validate();
  if (!(std::isfinite(t) && t >= 0.0)) throw InvalidArgument("time must be >= 0");
  if (n_quad < 64) throw InvalidArgument("dyson1_amplitude: n_quad must be >= 64");
  const CavityConfig& cfg = spec.cfg;
  const double coupling = pair_coupling(spec.k, spec.k_prime, cfg);
  if (cfg.epsilon == 0.0 || coupling == 0.0 || t == 0.0) return 0.0;

  const double omega = cfg.omega_mech;
  const double wsum = mode_frequency(spec.k, cfg.length) + mode_frequency(spec.k_prime, cfg.length);
  const HilbertSpace fermions(0, cfg.n_fermion_modes);
  const double sign = fermions.pair_creation_sign(spec.k, spec.k_prime);

  const auto psi_i = phonon_vector(spec.initial);
  const auto psi_f = phonon_vector(spec.final);
  const bool driven = !std::holds_alternative<DriveOff>(spec.drive.variant());
  const Complex alpha_t = driven ? effective_displacement(spec.drive, t, omega) : Complex(0.0);

  const Complex m_raise = displaced_overlap(psi_f, raise(psi_i), alpha_t, omega * t);
  const Complex m_lower = displaced_overlap(psi_f, lower(psi_i), alpha_t, omega * t);
  const Complex m_keep = driven ? displaced_overlap(psi_f, psi_i, alpha_t, omega * t) : Complex(0.0);

  auto integral_on_grid = [&](int cells) {
    const double h = t / cells;
    std::vector<Complex> alpha_nodes;
    if (driven && m_keep != 0.0) {
      alpha_nodes = detail::cumulative_integral(
          [&](double s) { return alpha_integrand(spec.drive, omega, s); }, t, cells);
    }
    std::vector<Complex> values(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
      const double s = i * h;
      Complex wall = std::polar(1.0, omega * s) * m_raise + std::polar(1.0, -omega * s) * m_lower;
      if (!alpha_nodes.empty()) {
        const double x = (alpha_nodes[i] * std::polar(1.0, -omega * s)).real();
        wall += 2.0 * x * m_keep;
      }
      values[i] = std::polar(1.0, wsum * s) * wall;
    }
    return detail::simpson(values, h);
  };
  const Complex integral =
      detail::refine_until_converged(integral_on_grid, n_quad, 1e-11, 1 << 22, "dyson1_amplitude");

  const double phase = driven ? drive_phase(spec.drive, omega, t) : 0.0;
  return Complex(0.0, -1.0) * cfg.epsilon * coupling * sign * std::polar(1.0, phase - wsum * t) *
         integral;
}

TransitionResult probability_dyson1(const TransitionSpec& spec, double t, int n_quad) {
  const Complex amp = dyson1_amplitude(spec, t, n_quad);
  TransitionResult out;
  out.time = t;
  out.formula = FormulaTag::Dyson1;
  out.resonant = is_resonant(spec.cfg, spec.k, spec.k_prime);
  out.probability = std::norm(amp);
  if (out.probability > 1.0) {
    out.probability = 1.0;
    out.clamped = true;
  }
  return out;
}

}  // namespace fermibag
