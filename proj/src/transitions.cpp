#include "fermibag/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "fermibag/errors.hpp"
#include "quadrature.hpp"

namespace fermibag {

namespace {

constexpr double kQuadTolerance = 1e-9;
constexpr int kMaxCells = 1 << 22;
constexpr int kDefaultQuad = 64;

struct Gaussian {
  Complex beta;
  SqueezeParams sq;
};

double delta_omega(const CavityConfig& cfg, int k, int kp) {
  return mode_frequency(k, cfg.length) - mode_frequency(kp, cfg.length);
}

double omega_sum(const CavityConfig& cfg, int k, int kp) {
  return mode_frequency(k, cfg.length) + mode_frequency(kp, cfg.length);
}

double prefactor(const TransitionSpec& spec) {
  const double dw = delta_omega(spec.cfg, spec.k, spec.k_prime);
  return 4.0 * spec.cfg.epsilon * spec.cfg.epsilon * dw * dw;
}

TransitionResult finish(double raw, double t, FormulaTag tag, bool resonant) {
  TransitionResult out;
  out.time = t;
  out.formula = tag;
  out.resonant = resonant;
  out.probability = std::max(0.0, raw);
  if (out.probability > 1.0) {
    out.probability = 1.0;
    out.clamped = true;
  }
  return out;
}

void require_time(double t) {
  if (!(std::isfinite(t) && t >= 0.0)) throw InvalidArgument("time must be finite and >= 0");
}

void require_resonance(const TransitionSpec& spec, const char* what) {
  if (!is_resonant(spec.cfg, spec.k, spec.k_prime)) {
    throw OffResonance(std::string(what) +
                       ": requires Omega = omega_k + omega_k' (resonance)");
  }
}

std::pair<int, int> fock_pair(const TransitionSpec& spec, const char* what) {
  const auto j = spec.initial.fock_number();
  const auto l = spec.final.fock_number();
  if (!j || !l) {
    throw UnsupportedStatePair(std::string(what) + ": requires Fock initial and final states");
  }
  return {*j, *l};
}

// Integrand of Lambda(t) as written in terms of the drive quadratures.
Complex lambda_integrand(const DriveSpec& drive, double omega, double t) {
  const Complex lam = drive_value(drive, t, omega);
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  return {lam.real() * s - lam.imag() * c, lam.real() * c + lam.imag() * s};
}

Complex xi_integral_on_grid(const DriveSpec& drive, double t, double omega, double freq,
                            int cells) {
  const auto primitive = detail::cumulative_integral(
      [&](double s) { return lambda_integrand(drive, omega, s); }, t, cells);
  const double h = t / cells;
  std::vector<Complex> values(primitive.size());
  for (std::size_t i = 0; i < primitive.size(); ++i) {
    const double ti = i * h;
    const double x = primitive[i].real() * std::cos(omega * ti) -
                     primitive[i].imag() * std::sin(omega * ti);
    values[i] = x * std::polar(1.0, freq * ti);
  }
  return detail::simpson(values, h);
}

}  // namespace

// ---------------------------------------------------------------------------
// BosonState

BosonState BosonState::fock(int j) {
  if (j < 0) throw InvalidArgument("Fock number must be >= 0");
  return BosonState(FockState{j});
}

BosonState BosonState::normalized() const {
  return std::visit(
      [](const auto& s) -> BosonState {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, VacuumState>) {
          return vacuum();
        } else if constexpr (std::is_same_v<T, FockState>) {
          return s.j == 0 ? vacuum() : fock(s.j);
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          return s.coh.beta_abs() == 0.0 ? vacuum() : coherent(s.coh);
        } else if constexpr (std::is_same_v<T, SqueezedState>) {
          return s.sq.r() == 0.0 ? vacuum() : squeezed(s.sq);
        } else {
          if (s.sq.r() == 0.0) return coherent(s.coh).normalized();
          if (s.coh.beta_abs() == 0.0) return squeezed(s.sq).normalized();
          return squeezed_coherent(s.coh, s.sq);
        }
      },
      variant_);
}

std::optional<int> BosonState::fock_number() const {
  const BosonState n = normalized();
  if (std::holds_alternative<VacuumState>(n.variant_)) return 0;
  if (const auto* f = std::get_if<FockState>(&n.variant_)) return f->j;
  return std::nullopt;
}

bool BosonState::is_gaussian() const {
  return !std::holds_alternative<FockState>(normalized().variant_);
}

Complex BosonState::beta() const {
  if (const auto* c = std::get_if<CoherentState>(&variant_)) return c->coh.beta();
  if (const auto* sc = std::get_if<SqueezedCoherentState>(&variant_)) return sc->coh.beta();
  return 0.0;
}

SqueezeParams BosonState::squeeze() const {
  if (const auto* s = std::get_if<SqueezedState>(&variant_)) return s->sq;
  if (const auto* sc = std::get_if<SqueezedCoherentState>(&variant_)) return sc->sq;
  return {};
}

std::vector<Complex> BosonState::fock_coefficients(int n_max) const {
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  if (const auto j = fock_number()) {
    std::vector<Complex> out(n_max + 1, 0.0);
    if (*j <= n_max) out[*j] = 1.0;
    return out;
  }
  return squeezed_coherent_coefficients(beta(), squeeze(), n_max);
}

std::string BosonState::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, VacuumState>) {
          os << "vacuum";
        } else if constexpr (std::is_same_v<T, FockState>) {
          os << "fock(j=" << s.j << ")";
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          os << "coherent(beta_abs=" << s.coh.beta_abs() << ",theta=" << s.coh.theta() << ")";
        } else if constexpr (std::is_same_v<T, SqueezedState>) {
          os << "squeezed(r=" << s.sq.r() << ",phi=" << s.sq.phi() << ")";
        } else {
          os << "squeezed_coherent(beta_abs=" << s.coh.beta_abs() << ",theta=" << s.coh.theta()
             << ",r=" << s.sq.r() << ",phi=" << s.sq.phi() << ")";
        }
      },
      variant_);
  return os.str();
}

void TransitionSpec::validate() const {
  cfg.validate();
  if (k < 0 || k_prime < 0 || k >= cfg.n_fermion_modes || k_prime >= cfg.n_fermion_modes) {
    throw InvalidArgument("transition: k and k' must lie below the fermion cutoff");
  }
}

std::string to_string(FormulaTag tag) {
  switch (tag) {
    case FormulaTag::General: return "general";
    case FormulaTag::Resonant: return "resonant";
    case FormulaTag::Fock: return "fock";
    case FormulaTag::FockNoDrive: return "fock_nodrive";
    case FormulaTag::VacuumDrive: return "vacuum_drive";
    case FormulaTag::ScNoDrive: return "sc_nodrive";
    case FormulaTag::CompactF: return "compact_F";
    case FormulaTag::CompactC: return "compact_C";
    case FormulaTag::CompactS: return "compact_S";
    case FormulaTag::CompactSC: return "compact_SC";
    case FormulaTag::Oracle: return "oracle";
    case FormulaTag::Dyson1: return "dyson1";
  }
  return "unknown";
}

FormulaTag formula_tag_from_string(const std::string& name) {
  for (auto tag : {FormulaTag::General, FormulaTag::Resonant, FormulaTag::Fock,
                   FormulaTag::FockNoDrive, FormulaTag::VacuumDrive, FormulaTag::ScNoDrive,
                   FormulaTag::CompactF, FormulaTag::CompactC, FormulaTag::CompactS,
                   FormulaTag::CompactSC, FormulaTag::Oracle, FormulaTag::Dyson1}) {
    if (to_string(tag) == name) return tag;
  }
  throw InvalidArgument("unknown formula tag '" + name + "'");
}

bool is_resonant(const CavityConfig& cfg, int k, int k_prime) {
  return std::abs(cfg.omega_mech - omega_sum(cfg, k, k_prime)) <= 1e-9 * cfg.omega_mech;
}

// ---------------------------------------------------------------------------
// Drive integrals

Complex displacement_parameter(const DriveSpec& drive, double t, double omega_mech,
                               int n_quad) {
  require_time(t);
  if (n_quad < 16) throw InvalidArgument("displacement_parameter: n_quad must be >= 16");
  if (t == 0.0 || std::holds_alternative<DriveOff>(drive.variant())) return 0.0;
  return detail::refine_until_converged(
      [&](int cells) {
        return detail::cumulative_integral(
                   [&](double s) { return lambda_integrand(drive, omega_mech, s); }, t, cells)
            .back();
      },
      n_quad, kQuadTolerance, kMaxCells, "displacement_parameter");
}

double xi(const DriveSpec& drive, double t, double omega_mech) {
  const Complex lam = displacement_parameter(drive, t, omega_mech, kDefaultQuad);
  return lam.real() * std::cos(omega_mech * t) - lam.imag() * std::sin(omega_mech * t);
}

Complex xi_phase_integral(const DriveSpec& drive, double t, double omega_mech, double freq,
                          int n_quad) {
  require_time(t);
  if (n_quad < 16) throw InvalidArgument("xi_phase_integral: n_quad must be >= 16");
  if (t == 0.0 || std::holds_alternative<DriveOff>(drive.variant())) return 0.0;
  return detail::refine_until_converged(
      [&](int cells) { return xi_integral_on_grid(drive, t, omega_mech, freq, cells); },
      n_quad, kQuadTolerance, kMaxCells, "xi_phase_integral");
}

// ---------------------------------------------------------------------------
// Transition probabilities

std::array<Complex, 3> chi_functions(const TransitionSpec& spec, double t) {
  spec.validate();
  require_time(t);
  const double omega = spec.cfg.omega_mech;
  const Complex lam = displacement_parameter(spec.drive, t, omega);

  const auto j = spec.initial.fock_number();
  const auto l = spec.final.fock_number();
  if (j && l) {
    const Complex phase = std::polar(1.0, -(*l) * omega * t);
    const Complex chi1 = std::sqrt(*j + 1.0) * phase * displacement_element(*l, *j + 1, lam);
    const Complex chi2 =
        *j > 0 ? std::sqrt(double(*j)) * phase * displacement_element(*l, *j - 1, lam) : 0.0;
    const Complex chi3 = phase * displacement_element(*l, *j, lam);
    return {chi1, chi2, chi3};
  }

  if (l && *l == 0 && spec.initial.is_gaussian()) {
    const Complex beta = spec.initial.beta();
    const auto c = squeezed_coherent_coefficients(beta + lam, spec.initial.squeeze(), 1);
    const Complex phase = std::exp(0.5 * (lam * std::conj(beta) - std::conj(lam) * beta));
    return {-std::conj(lam) * c[0] * phase, (c[1] - lam * c[0]) * phase, c[0] * phase};
  }

  throw UnsupportedStatePair("chi_functions: no closed form for " +
                             spec.initial.describe() + " -> " + spec.final.describe());
}

TransitionResult probability_general(const TransitionSpec& spec, double t) {
  const auto [chi1, chi2, chi3] = chi_functions(spec, t);
  const double wsum = omega_sum(spec.cfg, spec.k, spec.k_prime);
  const double omega = spec.cfg.omega_mech;

  auto oscillating = [t](double a) { return t * sinc_u(0.5 * a * t) * std::polar(1.0, 0.5 * a * t); };
  Complex amp = chi1 * oscillating(wsum + omega) + chi2 * oscillating(wsum - omega);
  if (chi3 != 0.0) amp += chi3 * xi_phase_integral(spec.drive, t, omega, wsum);

  return finish(prefactor(spec) * std::norm(amp), t, FormulaTag::General,
                is_resonant(spec.cfg, spec.k, spec.k_prime));
}

TransitionResult probability_resonant(const TransitionSpec& spec, double t) {
  spec.validate();
  require_resonance(spec, "probability_resonant");
  const auto chi = chi_functions(spec, t);
  const double omega = spec.cfg.omega_mech;
  Complex amp = chi[1] * t;
  if (chi[2] != 0.0) amp += chi[2] * xi_phase_integral(spec.drive, t, omega, omega);
  return finish(prefactor(spec) * std::norm(amp), t, FormulaTag::Resonant, true);
}

TransitionResult probability_fock(const TransitionSpec& spec, double t) {
  spec.validate();
  require_time(t);
  require_resonance(spec, "probability_fock");
  const auto [j, l] = fock_pair(spec, "probability_fock");
  const double omega = spec.cfg.omega_mech;
  const Complex lam = displacement_parameter(spec.drive, t, omega);

  Complex amp = 0.0;
  if (j > 0) amp += t * std::sqrt(double(j)) * displacement_element(l, j - 1, lam);
  if (!spec.drive.is_off()) {
    amp += displacement_element(l, j, lam) *
           xi_phase_integral(spec.drive, t, omega, omega_sum(spec.cfg, spec.k, spec.k_prime));
  }
  return finish(prefactor(spec) * std::norm(amp), t, FormulaTag::Fock, true);
}

TransitionResult probability_fock_nodrive(const TransitionSpec& spec, double t) {
  spec.validate();
  require_time(t);
  require_resonance(spec, "probability_fock_nodrive");
  if (!spec.drive.is_off()) throw InvalidArgument("probability_fock_nodrive: drive must be off");
  const auto [j, l] = fock_pair(spec, "probability_fock_nodrive");
  const double raw = (j >= 1 && l == j - 1) ? j * prefactor(spec) * t * t : 0.0;
  return finish(raw, t, FormulaTag::FockNoDrive, true);
}

TransitionResult probability_vacuum_drive(const TransitionSpec& spec, double t) {
  spec.validate();
  require_time(t);
  require_resonance(spec, "probability_vacuum_drive");
  const auto [j, l] = fock_pair(spec, "probability_vacuum_drive");
  if (j != 0 || l != 0) {
    throw UnsupportedStatePair("probability_vacuum_drive: requires vacuum -> vacuum");
  }
  const double omega = spec.cfg.omega_mech;
  const Complex lam = displacement_parameter(spec.drive, t, omega);
  const Complex integral =
      xi_phase_integral(spec.drive, t, omega, omega_sum(spec.cfg, spec.k, spec.k_prime));
  return finish(prefactor(spec) * std::exp(-std::norm(lam)) * std::norm(integral), t,
                FormulaTag::VacuumDrive, true);
}

TransitionResult probability_sc_nodrive(const TransitionSpec& spec, double t) {
  spec.validate();
  require_time(t);
  require_resonance(spec, "probability_sc_nodrive");
  if (!spec.drive.is_off()) throw InvalidArgument("probability_sc_nodrive: drive must be off");
  if (!spec.initial.is_gaussian() || spec.final.fock_number() != std::optional<int>(0)) {
    throw UnsupportedStatePair("probability_sc_nodrive: requires Gaussian -> vacuum");
  }
  const Complex beta = spec.initial.beta();
  const SqueezeParams sq = spec.initial.squeeze();
  const double r = sq.r();
  const double b2 = std::norm(beta);
  const double theta = std::arg(beta);
  const Complex gamma = beta * std::cosh(r) + std::conj(beta) * std::polar(1.0, sq.phi()) * std::sinh(r);
  const double c1_sq = std::norm(gamma) *
                       std::exp(-b2 * (1.0 + std::cos(2.0 * theta - sq.phi()) * std::tanh(r))) /
                       std::pow(std::cosh(r), 3);
  return finish(prefactor(spec) * t * t * c1_sq, t, FormulaTag::ScNoDrive, true);
}

// ---------------------------------------------------------------------------
// Gamma functions

double gamma_fock(int j, double g) {
  if (j < 1) throw InvalidArgument("gamma_fock: j must be >= 1");
  if (!(std::isfinite(g) && g >= 0.0)) throw InvalidArgument("gamma_fock: g must be >= 0");
  if (g == 0.0) return j == 1 ? 1.0 : 0.0;  // (g/2)^0 = 1 at j = 1
  const double log_value = (2.0 * j - 2.0) * std::log(0.5 * g) - 0.25 * g * g +
                           2.0 * std::log(g * g + 8.0 * j) - std::log(64.0) - log_factorial(j);
  return std::exp(log_value);
}

double gamma_coherent(const CoherentParams& coh, double g) {
  const double b = coh.beta_abs();
  const double bs = b * std::sin(coh.theta());
  return std::exp(-0.25 * g * g - b * b + g * bs) * (0.25 * g * g + 4.0 * b * b + 2.0 * g * bs);
}

double gamma_squeezed(const SqueezeParams& sq, double g) {
  const double r = sq.r();
  const double cphi = std::cos(sq.phi());
  return g * g * std::exp(-0.25 * g * g * (1.0 - cphi * std::tanh(r))) /
         (8.0 * std::pow(std::cosh(r), 3)) *
         (5.0 * std::cosh(2.0 * r) + 4.0 * std::sinh(2.0 * r) * cphi - 3.0);
}

double gamma_sc(const CoherentParams& coh, const SqueezeParams& sq, double g) {
  const double b = coh.beta_abs();
  const double th = coh.theta();
  const double r = sq.r();
  const double phi = sq.phi();
  const double g2 = g * g;
  const double th_r = std::tanh(r);
  const double sech = 1.0 / std::cosh(r);

  const double exponent =
      -0.25 * g2 - b * b + g * b * std::sin(th) +
      0.25 * th_r *
          (g2 * std::cos(phi) - 4.0 * b * b * std::cos(2.0 * th - phi) -
           4.0 * g * b * std::sin(th - phi));
  const double bracket =
      sech * sech *
          (3.0 * g * b * std::sin(th) - 0.375 * g2 +
           std::cosh(2.0 * r) * (0.625 * g2 + 4.0 * b * b - g * b * std::sin(th))) +
      (8.0 * b * b * std::cos(2.0 * th - phi) + g2 * std::cos(phi) +
       2.0 * g * b * std::sin(th - phi)) *
          th_r;
  return std::exp(exponent) * sech * bracket;
}

TransitionResult compact_probability(CompactKind kind, const BosonState& state, double g,
                                     double t, const CavityConfig& cfg, int k, int k_prime) {
  TransitionSpec spec{k, k_prime, state, BosonState::vacuum(), cfg, DriveSpec::off()};
  spec.validate();
  require_time(t);
  require_resonance(spec, "compact_probability");

  const BosonState s = state.normalized();
  const bool vacuum = std::holds_alternative<VacuumState>(s.variant());
  double gamma = 0.0;
  FormulaTag tag = FormulaTag::CompactF;
  switch (kind) {
    case CompactKind::F: {
      const auto* f = std::get_if<FockState>(&s.variant());
      if (!f) throw UnsupportedStatePair("compact_probability(F): requires Fock j >= 1");
      gamma = gamma_fock(f->j, g);
      tag = FormulaTag::CompactF;
      break;
    }
    case CompactKind::C:
      if (!vacuum && !std::holds_alternative<CoherentState>(s.variant())) {
        throw UnsupportedStatePair("compact_probability(C): requires a coherent state");
      }
      gamma = gamma_coherent(CoherentParams(std::abs(s.beta()), std::arg(s.beta())), g);
      tag = FormulaTag::CompactC;
      break;
    case CompactKind::S:
      if (!vacuum && !std::holds_alternative<SqueezedState>(s.variant())) {
        throw UnsupportedStatePair("compact_probability(S): requires a squeezed state");
      }
      gamma = gamma_squeezed(s.squeeze(), g);
      tag = FormulaTag::CompactS;
      break;
    case CompactKind::SC:
      if (!s.is_gaussian()) {
        throw UnsupportedStatePair("compact_probability(SC): requires a Gaussian state");
      }
      gamma = gamma_sc(CoherentParams(std::abs(s.beta()), std::arg(s.beta())), s.squeeze(), g);
      tag = FormulaTag::CompactSC;
      break;
  }
  const double dw = delta_omega(cfg, k, k_prime);
  return finish(cfg.epsilon * cfg.epsilon * dw * dw * t * t * gamma, t, tag, true);
}

std::vector<Figure1Row> sweep_figure1(double g, const std::vector<double>& n_grid,
                                      std::size_t threads) {
  if (!(std::isfinite(g) && g >= 0.0)) throw InvalidArgument("sweep_figure1: g must be >= 0");
  for (double n : n_grid) {
    if (!(std::isfinite(n) && n >= 0.0)) {
      throw InvalidArgument("sweep_figure1: phonon numbers must be >= 0");
    }
  }

  std::vector<Figure1Row> rows(n_grid.size());
  auto fill = [&](std::size_t i) {
    const double n = n_grid[i];
    Figure1Row row;
    row.n_phon = n;
    const double nearest = std::round(n);
    if (nearest >= 1.0 && std::abs(n - nearest) < 1e-9) {
      row.gamma_f = gamma_fock(static_cast<int>(nearest), g);
    }
    row.gamma_c = gamma_coherent(CoherentParams(std::sqrt(n), 0.0), g);
    row.gamma_s = gamma_squeezed(SqueezeParams(std::asinh(std::sqrt(n)), 0.0), g);
    row.gamma_sc = gamma_sc(CoherentParams(std::sqrt(0.5 * n), 0.0),
                            SqueezeParams(std::asinh(std::sqrt(0.5 * n)), 0.0), g);
    rows[i] = row;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, rows.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) fill(i);
    return rows;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < rows.size(); i += threads) fill(i);
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace fermibag
