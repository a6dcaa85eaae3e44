#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fermibag/errors.hpp"
#include "fermibag/transitions.hpp"
#include "oracles.hpp"

using namespace fermibag;
constexpr double pi = std::numbers::pi;

namespace {

// L = pi, Omega = omega_0 + omega_1 = 2: resonant for (k, k') = (0, 1), dw = 1.
CavityConfig resonant_cavity(double eps = 0.01) {
  CavityConfig cfg;
  cfg.length = pi;
  cfg.epsilon = eps;
  cfg.omega_mech = 2.0;
  cfg.n_fermion_modes = 3;
  return cfg;
}

TransitionSpec spec(BosonState initial, BosonState final, DriveSpec drive = DriveSpec::off(),
                    double eps = 0.01) {
  return TransitionSpec{0, 1, std::move(initial), std::move(final), resonant_cavity(eps),
                        std::move(drive)};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("BosonState: normalization, equality, coefficients") {
  CHECK(BosonState::fock(0) == BosonState::vacuum());
  CHECK(BosonState::coherent(CoherentParams(0.0, 1.0)) == BosonState::vacuum());
  CHECK(BosonState::squeezed(SqueezeParams(0.0, 2.0)) == BosonState::vacuum());
  CHECK(BosonState::squeezed_coherent(CoherentParams(0.5, 0.1), SqueezeParams()) ==
        BosonState::coherent(CoherentParams(0.5, 0.1)));
  CHECK(BosonState::squeezed_coherent(CoherentParams(), SqueezeParams(0.3, 0.2)) ==
        BosonState::squeezed(SqueezeParams(0.3, 0.2)));
  CHECK_FALSE(BosonState::fock(1) == BosonState::vacuum());
  CHECK(BosonState::fock(3).fock_number() == 3);
  CHECK_FALSE(BosonState::coherent(CoherentParams(1.0, 0.0)).fock_number().has_value());
  CHECK_FALSE(BosonState::fock(2).is_gaussian());
  CHECK_THROWS_AS(BosonState::fock(-1), InvalidArgument);

  const auto c = BosonState::fock(2).fock_coefficients(4);
  CHECK(c == std::vector<Complex>{0.0, 0.0, 1.0, 0.0, 0.0});
  const auto coh = BosonState::coherent(CoherentParams(0.7, 0.3)).fock_coefficients(6);
  for (int n = 0; n <= 6; ++n) {
    CHECK(std::abs(coh[n] - oracle::coherent_coefficient(std::polar(0.7, 0.3), n)) < 1e-12);
  }
}

TEST_CASE("formula tags round-trip") {
  for (FormulaTag tag : {FormulaTag::General, FormulaTag::Resonant, FormulaTag::Fock,
                         FormulaTag::FockNoDrive, FormulaTag::VacuumDrive, FormulaTag::ScNoDrive,
                         FormulaTag::CompactF, FormulaTag::CompactC, FormulaTag::CompactS,
                         FormulaTag::CompactSC, FormulaTag::Oracle, FormulaTag::Dyson1}) {
    CHECK(formula_tag_from_string(to_string(tag)) == tag);
  }
  CHECK_THROWS_AS(formula_tag_from_string("eq20"), InvalidArgument);
}

TEST_CASE("resonance check") {
  const auto cfg = resonant_cavity();
  CHECK(is_resonant(cfg, 0, 1));
  CHECK(is_resonant(cfg, 1, 0));
  CHECK_FALSE(is_resonant(cfg, 1, 1));
  auto off = cfg;
  off.omega_mech = 2.0 + 1e-6;
  CHECK_FALSE(is_resonant(off, 0, 1));
  CHECK_THROWS_AS(probability_resonant(TransitionSpec{0, 1, BosonState::fock(1),
                                                      BosonState::vacuum(), off, {}},
                                       1.0),
                  OffResonance);
}

TEST_CASE("displacement_parameter: impulsive drive against the closed form") {
  CHECK(displacement_parameter(DriveSpec::off(), 3.0, 2.0) == Complex(0.0));
  CHECK(xi(DriveSpec::off(), 3.0, 2.0) == 0.0);
  const double omega = 2.0;
  for (double g : {0.1, 0.5, 1.0}) {
    for (double nu : {2.0, 200.0}) {
      const auto drive = DriveSpec::impulsive(g, nu);
      for (double t : {0.003, 0.05, 0.5, 3.0}) {
        const Complex lam = displacement_parameter(drive, t, omega);
        CHECK(std::abs(lam - oracle::impulsive_lambda(g, nu, t)) < 1e-8);
        const Complex ref = oracle::impulsive_lambda(g, nu, t);
        CHECK(xi(drive, t, omega) == doctest::Approx(ref.real() * std::cos(omega * t) -
                                                     ref.imag() * std::sin(omega * t))
                                         .epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("xi_phase_integral: independent trapezoid with the closed-form xi") {
  const double g = 0.5;
  const double nu = 200.0;
  const double omega = 2.0;
  const double t = 4.0;
  const auto drive = DriveSpec::impulsive(g, nu);
  const Complex ref = oracle::trapezoid(
      [&](double s) {
        const Complex lam = oracle::impulsive_lambda(g, nu, s);
        const double x = lam.real() * std::cos(omega * s) - lam.imag() * std::sin(omega * s);
        return x * std::polar(1.0, omega * s);
      },
      0.0, t, 400000);
  const Complex got = xi_phase_integral(drive, t, omega, omega);
  CHECK(std::abs(got - ref) < 1e-7 * std::abs(ref));
}

TEST_CASE("chi_functions: trivial cases") {
  const auto fock = chi_functions(spec(BosonState::fock(1), BosonState::vacuum()), 2.0);
  CHECK(std::abs(fock[0]) < 1e-15);
  CHECK(fock[1] == Complex(1.0));
  CHECK(std::abs(fock[2]) < 1e-15);

  const auto vac = chi_functions(spec(BosonState::vacuum(), BosonState::vacuum()), 2.0);
  CHECK(vac[0] == Complex(0.0));
  CHECK(vac[1] == Complex(0.0));
  CHECK(vac[2] == Complex(1.0));

  CHECK_THROWS_AS(chi_functions(spec(BosonState::coherent(CoherentParams(1.0, 0.0)),
                                     BosonState::fock(1)),
                                1.0),
                  UnsupportedStatePair);
}

TEST_CASE("chi_functions: squeezed-coherent to vacuum chi_3") {
  const CoherentParams coh(0.8, 0.4);
  const SqueezeParams sq(0.3, -0.7);
  const auto drive = DriveSpec::impulsive(0.5, 200.0);
  const double t = 1.0;
  const auto s = spec(BosonState::squeezed_coherent(coh, sq), BosonState::vacuum(), drive);
  const auto chi = chi_functions(s, t);
  const Complex lam = oracle::impulsive_lambda(0.5, 200.0, t);
  const Complex beta = coh.beta();
  // <0| D(beta + Lambda) S(zeta) |0> through dense exponentials
  const Eigen::MatrixXcd d = oracle::truncated_displacement(beta + lam, 80);
  const Eigen::MatrixXcd sqz = oracle::truncated_squeeze(sq.zeta(), 80);
  const Complex c0 = (d * sqz.col(0))(0);
  const Complex expected = c0 * std::exp(0.5 * (lam * std::conj(beta) - std::conj(lam) * beta));
  CHECK(std::abs(chi[2] - expected) < 1e-8);
}

TEST_CASE("probability examples: vanishing cases") {
  const auto drive = DriveSpec::impulsive(0.5, 200.0);
  CHECK(probability_general(spec(BosonState::fock(1), BosonState::vacuum(), drive, 0.0), 3.0)
            .probability == 0.0);
  TransitionSpec same = spec(BosonState::fock(1), BosonState::vacuum());
  same.k = same.k_prime = 1;
  CHECK(probability_general(same, 3.0).probability == 0.0);
  CHECK(probability_resonant(spec(BosonState::vacuum(), BosonState::vacuum()), 5.0).probability ==
        0.0);
  CHECK(probability_fock(spec(BosonState::fock(0), BosonState::fock(0)), 5.0).probability == 0.0);
  const auto sc0 = spec(BosonState::squeezed(SqueezeParams(0.6, 0.3)), BosonState::vacuum());
  CHECK(probability_sc_nodrive(sc0, 5.0).probability == 0.0);
}

TEST_CASE("undriven Fock law 4 j eps^2 dw^2 t^2") {
  for (int j = 1; j <= 4; ++j) {
    const auto s = spec(BosonState::fock(j), BosonState::fock(j - 1));
    for (double t : {0.5, 2.0, 10.0}) {
      const double law = 4.0 * j * 1e-4 * t * t;
      CHECK(probability_fock_nodrive(s, t).probability == doctest::Approx(law).epsilon(1e-14));
      CHECK(probability_fock(s, t).probability == doctest::Approx(law).epsilon(1e-14));
      CHECK(probability_resonant(s, t).probability == doctest::Approx(law).epsilon(1e-14));
    }
  }
  CHECK(probability_fock_nodrive(spec(BosonState::fock(2), BosonState::vacuum()), 1.0)
            .probability == 0.0);
  const auto general = probability_general(spec(BosonState::fock(1), BosonState::vacuum()), 0.05);
  CHECK(rel(general.probability, 4.0 * 1e-4 * 0.05 * 0.05) < 2e-3);
}

TEST_CASE("probability_sc_nodrive: coherent reduction") {
  const CoherentParams coh(1.2, 0.9);
  const double t = 7.0;
  const auto p = probability_sc_nodrive(spec(BosonState::coherent(coh), BosonState::vacuum()), t);
  CHECK(p.probability ==
        doctest::Approx(4.0 * 1e-4 * 1.44 * t * t * std::exp(-1.44)).epsilon(1e-13));
  const auto general =
      probability_resonant(spec(BosonState::coherent(coh), BosonState::vacuum()), t);
  CHECK(general.probability == doctest::Approx(p.probability).epsilon(1e-10));

  // squeezed-coherent: closed form against the chi-function route
  const auto sc = spec(BosonState::squeezed_coherent(coh, SqueezeParams(0.7, 1.3)),
                       BosonState::vacuum());
  CHECK(probability_sc_nodrive(sc, t).probability ==
        doctest::Approx(probability_resonant(sc, t).probability).epsilon(1e-8));
}

TEST_CASE("vacuum under an impulsive drive") {
  const double g = 0.5;
  const double nu = 200.0;
  const auto s = spec(BosonState::vacuum(), BosonState::vacuum(), DriveSpec::impulsive(g, nu));
  for (double t : {1.0, 5.0, 20.0}) {
    const double direct = probability_vacuum_drive(s, t).probability;
    CHECK(direct > 0.0);
    CHECK(probability_resonant(s, t).probability == doctest::Approx(direct).epsilon(1e-10));
    CHECK(probability_fock(s, t).probability == doctest::Approx(direct).epsilon(1e-10));

    const Complex lam = oracle::impulsive_lambda(g, nu, t);
    const Complex integral = oracle::trapezoid(
        [&](double u) {
          const Complex l = oracle::impulsive_lambda(g, nu, u);
          return (l.real() * std::cos(2.0 * u) - l.imag() * std::sin(2.0 * u)) *
                 std::polar(1.0, 2.0 * u);
        },
        0.0, t, 200000 * static_cast<int>(t));
    const double eq = 4.0 * 1e-4 * std::exp(-std::norm(lam)) * std::norm(integral);
    CHECK(rel(direct, eq) < 1e-6);
  }
}

TEST_CASE("Fock input under a drive: Eq. 24 form equals the resonant chi form") {
  const auto drive = DriveSpec::impulsive(0.5, 200.0);
  for (int j : {1, 2, 3}) {
    for (int l = 0; l <= j + 1; ++l) {
      const auto s = spec(BosonState::fock(j), BosonState::fock(l), drive);
      const double t = 6.0;
      const double fock = probability_fock(s, t).probability;
      const double res = probability_resonant(s, t).probability;
      CHECK(std::abs(fock - res) <= 1e-10 * std::max(res, 1e-20));
    }
  }
}

TEST_CASE("general tends to resonant at long times") {
  for (double g : {0.0, 0.5, 1.0}) {
    const auto drive = g == 0.0 ? DriveSpec::off() : DriveSpec::impulsive(g, 200.0);
    for (const auto& initial : {BosonState::fock(1), BosonState::coherent(CoherentParams(1.0, 0.0)),
                                BosonState::squeezed(SqueezeParams(std::asinh(1.0), 0.0))}) {
      const auto s = spec(initial, BosonState::vacuum(), drive);
      for (double t : {25.0, 60.0}) {
        const double res = probability_resonant(s, t).probability;
        if (res == 0.0) continue;
        CHECK(rel(probability_general(s, t).probability, res) < 0.05);
      }
    }
  }
}

TEST_CASE("probabilities are even in the frequency difference") {
  const auto drive = DriveSpec::impulsive(0.5, 200.0);
  auto a = spec(BosonState::fock(2), BosonState::fock(1), drive);
  auto b = a;
  std::swap(b.k, b.k_prime);
  for (double t : {0.7, 8.0}) {
    CHECK(probability_general(a, t).probability ==
          doctest::Approx(probability_general(b, t).probability).epsilon(1e-14));
    CHECK(probability_resonant(a, t).probability ==
          doctest::Approx(probability_resonant(b, t).probability).epsilon(1e-14));
  }
}

TEST_CASE("clamping flags perturbation-theory breakdown") {
  const auto s = spec(BosonState::fock(1), BosonState::vacuum(), DriveSpec::off(), 0.09);
  const auto p = probability_fock_nodrive(s, 100.0);
  CHECK(p.probability == 1.0);
  CHECK(p.clamped);
  CHECK_FALSE(probability_fock_nodrive(s, 1.0).clamped);
}

TEST_CASE("gamma functions: examples") {
  CHECK(gamma_fock(1, 0.0) == 1.0);
  CHECK(gamma_fock(2, 0.0) == 0.0);
  CHECK(gamma_fock(1, 1.0) == doctest::Approx(0.9856697410747468).epsilon(1e-14));
  CHECK(gamma_fock(1, 1.0) == doctest::Approx(std::exp(-0.25) * 81.0 / 64.0).epsilon(1e-14));
  CHECK(gamma_coherent(CoherentParams(0.0, 0.0), 0.0) == 0.0);
  CHECK(gamma_coherent(CoherentParams(1.0, 0.0), 0.0) ==
        doctest::Approx(1.4715177646857693).epsilon(1e-14));
  CHECK(gamma_squeezed(SqueezeParams(0.0, 0.0), 1.0) ==
        doctest::Approx(0.19470019576785122).epsilon(1e-14));
  CHECK(gamma_sc(CoherentParams(1.0, 0.0), SqueezeParams(0.5, 0.0), 0.5) ==
        doctest::Approx(1.74528700391087).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_fock(0, 1.0), InvalidArgument);
  for (double r : {0.0, 0.4, 1.2}) {
    for (double phi : {0.0, 1.0, pi}) {
      CHECK(gamma_squeezed(SqueezeParams(r, phi), 0.0) == 0.0);
    }
  }
}

TEST_CASE("gamma_sc: reductions on a random grid") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> babs(0.0, 2.0);
  std::uniform_real_distribution<double> rr(0.0, 1.5);
  std::uniform_real_distribution<double> gg(0.0, 2.0);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int trial = 0; trial < 100; ++trial) {
    const CoherentParams coh(babs(rng), ang(rng));
    const SqueezeParams sq(rr(rng), ang(rng));
    const double g = gg(rng);
    const double c = gamma_coherent(coh, g);
    const double s = gamma_squeezed(sq, g);
    CHECK(std::abs(gamma_sc(coh, SqueezeParams(), g) - c) <= 1e-10 * std::abs(c));
    CHECK(std::abs(gamma_sc(CoherentParams(), sq, g) - s) <= 1e-10 * std::abs(s));
  }
}

TEST_CASE("gamma functions are non-negative") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> babs(0.0, 3.0);
  std::uniform_real_distribution<double> rr(0.0, 2.0);
  std::uniform_real_distribution<double> gg(0.0, 3.0);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int trial = 0; trial < 500; ++trial) {
    const CoherentParams coh(babs(rng), ang(rng));
    const SqueezeParams sq(rr(rng), ang(rng));
    const double g = gg(rng);
    CHECK(gamma_fock(1 + trial % 6, g) >= 0.0);
    CHECK(gamma_coherent(coh, g) >= 0.0);
    CHECK(gamma_squeezed(sq, g) >= 0.0);
    CHECK(gamma_sc(coh, sq, g) >= -1e-14);
  }
}

TEST_CASE("compact_probability") {
  const auto cfg = resonant_cavity();
  const auto coh = BosonState::coherent(CoherentParams(1.0, 0.0));
  const auto p = compact_probability(CompactKind::C, coh, 0.0, 10.0, cfg, 0, 1);
  CHECK(p.probability == doctest::Approx(0.014715177646857693).epsilon(1e-13));
  CHECK(p.formula == FormulaTag::CompactC);
  CHECK(compact_probability(CompactKind::C, coh, 0.0, 20.0, cfg, 0, 1).probability ==
        doctest::Approx(4.0 * p.probability).epsilon(1e-14));
  CHECK(compact_probability(CompactKind::S, BosonState::vacuum(), 0.0, 10.0, cfg, 0, 1)
            .probability == 0.0);

  // compact C and the undriven squeezed-coherent closed form coincide at r = 0, g = 0
  for (double b : {0.3, 1.0, 1.7}) {
    const auto state = BosonState::coherent(CoherentParams(b, 0.4));
    CHECK(compact_probability(CompactKind::C, state, 0.0, 3.0, cfg, 0, 1).probability ==
          doctest::Approx(probability_sc_nodrive(spec(state, BosonState::vacuum()), 3.0)
                              .probability)
              .epsilon(1e-14));
  }

  // the published Fock normalization is a quarter of the undriven law
  const double f = compact_probability(CompactKind::F, BosonState::fock(1), 0.0, 4.0, cfg, 0, 1)
                       .probability;
  CHECK(f == doctest::Approx(
                 0.25 * probability_fock_nodrive(spec(BosonState::fock(1), BosonState::vacuum()), 4.0)
                            .probability)
                 .epsilon(1e-14));

  CHECK_THROWS_AS(compact_probability(CompactKind::F, coh, 0.0, 1.0, cfg, 0, 1),
                  UnsupportedStatePair);
  CHECK_THROWS_AS(compact_probability(CompactKind::S, coh, 0.0, 1.0, cfg, 0, 1),
                  UnsupportedStatePair);
  CHECK_THROWS_AS(compact_probability(CompactKind::C, coh, 0.0, 1.0, cfg, 1, 1), OffResonance);
}

TEST_CASE("sweep_figure1: shape of the curves") {
  std::vector<double> grid;
  for (int i = 0; i <= 120; ++i) grid.push_back(0.05 * i);
  const auto g0 = sweep_figure1(0.0, grid);
  REQUIRE(g0.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(g0[i].n_phon == grid[i]);
    CHECK(g0[i].gamma_s == 0.0);
    const double n = grid[i];
    CHECK(g0[i].gamma_f.has_value() == (n >= 1.0 && std::abs(n - std::round(n)) < 1e-12));
  }
  const auto argmax = [&](auto get) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < g0.size(); ++i)
      if (get(g0[i]) > get(g0[best])) best = i;
    return g0[best].n_phon;
  };
  CHECK(argmax([](const Figure1Row& r) { return r.gamma_c; }) == doctest::Approx(1.0));
  CHECK(argmax([](const Figure1Row& r) { return r.gamma_f.value_or(-1.0); }) ==
        doctest::Approx(1.0));
  CHECK(argmax([](const Figure1Row& r) { return r.gamma_sc; }) != doctest::Approx(1.0));
  CHECK(g0[20].gamma_c == doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-14));

  for (double g : {0.5, 1.0}) {
    const auto rows = sweep_figure1(g, grid);
    CHECK(rows[0].gamma_c > 0.0);
    CHECK(rows[0].gamma_s > 0.0);
    CHECK(rows[0].gamma_sc > 0.0);
  }
}

TEST_CASE("sweep_figure1: output independent of thread count") {
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.1 * i);
  const auto one = sweep_figure1(0.5, grid, 1);
  for (std::size_t threads : {2u, 3u, 8u}) {
    const auto many = sweep_figure1(0.5, grid, threads);
    REQUIRE(many.size() == one.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      CHECK(many[i].gamma_c == one[i].gamma_c);
      CHECK(many[i].gamma_s == one[i].gamma_s);
      CHECK(many[i].gamma_sc == one[i].gamma_sc);
      CHECK(many[i].gamma_f == one[i].gamma_f);
    }
  }
  CHECK_THROWS_AS(sweep_figure1(-1.0, grid), InvalidArgument);
  CHECK_THROWS_AS(sweep_figure1(0.5, {-0.1}), InvalidArgument);
}
