#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fermibag/errors.hpp"
#include "fermibag/perturbation.hpp"

using namespace fermibag;

namespace {

CavityConfig cavity(double eps, int nf = 2, double omega = 2.0) {
  CavityConfig cfg;
  cfg.length = std::numbers::pi;
  cfg.epsilon = eps;
  cfg.omega_mech = omega;
  cfg.n_fermion_modes = nf;
  return cfg;
}

MultiBagConfig walls(const CavityConfig& base, const std::vector<double>& omegas) {
  MultiBagConfig multi;
  multi.base = base;
  multi.n_spikes = static_cast<int>(omegas.size()) + 1;
  for (std::size_t l = 0; l < omegas.size(); ++l) {
    multi.fluctuating.push_back(static_cast<int>(l));
    multi.omegas.push_back(omegas[l]);
    multi.drives.push_back(DriveSpec::off());
  }
  return multi;
}

}  // namespace

TEST_CASE("ground_state_correction: examples") {
  const auto gsc = ground_state_correction(cavity(0.01));
  REQUIRE(gsc.cutoff == 2);
  CHECK(gsc.amplitude(0, 0) == 0.0);
  CHECK(gsc.amplitude(1, 1) == 0.0);
  CHECK(gsc.amplitude(1, 0) == doctest::Approx(-0.005).epsilon(1e-14));
  CHECK(gsc.amplitude(0, 1) == doctest::Approx(0.005).epsilon(1e-14));
  CHECK(gsc.norm_z == doctest::Approx(1.00005).epsilon(1e-14));

  const auto zero = ground_state_correction(cavity(0.0, 5));
  for (double a : zero.amplitudes) CHECK(a == 0.0);
  CHECK(zero.norm_z == 1.0);
}

TEST_CASE("ground_state_correction: antisymmetry and linear scaling in epsilon") {
  const auto a = ground_state_correction(cavity(0.01, 6, 3.3));
  const auto b = ground_state_correction(cavity(0.02, 6, 3.3));
  for (int n = 0; n < 6; ++n) {
    for (int m = 0; m < 6; ++m) {
      CHECK(a.amplitude(n, m) == -a.amplitude(m, n));
      CHECK(b.amplitude(n, m) == doctest::Approx(2.0 * a.amplitude(n, m)).epsilon(1e-13));
    }
  }
}

TEST_CASE("vacuum_energy_shift: examples and properties") {
  CHECK(vacuum_energy_shift(cavity(0.05, 1)).delta_e == 0.0);
  const auto shift = vacuum_energy_shift(cavity(0.01));
  CHECK(shift.delta_e == doctest::Approx(-2e-4).epsilon(1e-13));
  CHECK(shift.cutoff == 2);
  REQUIRE(shift.per_oscillator.size() == 1);
  CHECK(shift.per_oscillator[0] == shift.delta_e);

  // epsilon^2 scaling and monotone growth with the cutoff
  const double base = vacuum_energy_shift(cavity(0.01, 5)).delta_e;
  CHECK(vacuum_energy_shift(cavity(0.03, 5)).delta_e == doctest::Approx(9.0 * base).epsilon(1e-13));
  double previous = 0.0;
  for (int nf = 1; nf <= 12; ++nf) {
    const double de = vacuum_energy_shift(cavity(0.01, nf)).delta_e;
    CHECK(de <= previous);
    previous = de;
  }
}

TEST_CASE("vacuum_energy_shift: never positive on random configs") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> len(0.2, 5.0);
  std::uniform_real_distribution<double> om(0.1, 10.0);
  std::uniform_real_distribution<double> ep(0.0, 0.1);
  for (int trial = 0; trial < 40; ++trial) {
    CavityConfig cfg;
    cfg.length = len(rng);
    cfg.omega_mech = om(rng);
    cfg.epsilon = ep(rng);
    cfg.n_fermion_modes = 1 + trial % 8;
    CHECK(vacuum_energy_shift(cfg).delta_e <= 0.0);
  }
}

TEST_CASE("boson_reduced_purity") {
  CHECK(boson_reduced_purity(ground_state_correction(cavity(0.0, 4))) == 1.0);
  CHECK(boson_reduced_purity(ground_state_correction(cavity(0.01))) ==
        doctest::Approx(0.9999000099992505).epsilon(1e-14));
  CHECK(boson_reduced_purity(ground_state_correction(cavity(0.001, 3))) < 1.0);
}

TEST_CASE("multi-bag: one wall reduces to the single bag") {
  const auto base = cavity(0.01, 4, 2.5);
  const auto multi = walls(base, {2.5});
  const auto tables = ground_state_correction_multi(multi);
  REQUIRE(tables.size() == 1);
  const auto single = ground_state_correction(base);
  CHECK(tables[0].amplitudes == single.amplitudes);
  CHECK(tables[0].norm_z == single.norm_z);
  CHECK(vacuum_energy_shift_multi(multi).delta_e == vacuum_energy_shift(base).delta_e);
}

TEST_CASE("multi-bag: identical walls add, distinct walls use their own frequency") {
  const auto base = cavity(0.01, 3, 2.0);
  const double single = vacuum_energy_shift(base).delta_e;
  const auto three = walls(base, {2.0, 2.0, 2.0});
  const auto tables = ground_state_correction_multi(three);
  CHECK(tables[0].amplitudes == tables[1].amplitudes);
  CHECK(tables[1].amplitudes == tables[2].amplitudes);
  CHECK(vacuum_energy_shift_multi(three).delta_e == doctest::Approx(3.0 * single).epsilon(1e-14));

  const auto mixed = walls(base, {2.0, 5.0});
  const auto shift = vacuum_energy_shift_multi(mixed);
  REQUIRE(shift.per_oscillator.size() == 2);
  CHECK(shift.per_oscillator[0] == single);
  CHECK(shift.per_oscillator[1] == vacuum_energy_shift(cavity(0.01, 3, 5.0)).delta_e);
  CHECK(shift.delta_e == doctest::Approx(shift.per_oscillator[0] + shift.per_oscillator[1]));
}

TEST_CASE("perturbation: invalid configs are rejected") {
  auto bad = cavity(0.01);
  bad.length = 0.0;
  CHECK_THROWS_AS(ground_state_correction(bad), InvalidArgument);
  CHECK_THROWS_AS(vacuum_energy_shift(bad), InvalidArgument);
  auto multi = walls(cavity(0.01), {2.0});
  multi.omegas.clear();
  CHECK_THROWS_AS(vacuum_energy_shift_multi(multi), InvalidArgument);
}
