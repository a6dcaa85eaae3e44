#include "fermibag/perturbation.hpp"

#include <algorithm>

namespace fermibag {

GroundStateCorrection ground_state_correction(const CavityConfig& cfg) {
  cfg.validate();
  const int nf = cfg.n_fermion_modes;
  GroundStateCorrection out;
  out.cutoff = nf;
  out.amplitudes.assign(static_cast<std::size_t>(nf) * nf, 0.0);

  double weight = 0.0;
  for (int n = 0; n < nf; ++n) {
    const double wn = mode_frequency(n, cfg.length);
    for (int m = 0; m < nf; ++m) {
      if (n == m) continue;
      const double wm = mode_frequency(m, cfg.length);
      // -eps * pair_coupling / (E_excited - E_vac)
      const double a = -cfg.epsilon * pair_coupling(n, m, cfg) / (wn + wm + cfg.omega_mech);
      out.amplitudes[n * nf + m] = a;
      weight += a * a;
    }
  }
  out.norm_z = 1.0 + weight;
  return out;
}

EnergyShift vacuum_energy_shift(const CavityConfig& cfg) {
  cfg.validate();
  const int nf = cfg.n_fermion_modes;
  const double eps2 = cfg.epsilon * cfg.epsilon;
  double sum = 0.0;
  for (int n = 0; n < nf; ++n) {
    const double wn = mode_frequency(n, cfg.length);
    for (int m = 0; m < nf; ++m) {
      const double wm = mode_frequency(m, cfg.length);
      const double dw = wn - wm;
      sum -= 4.0 * eps2 * dw * dw / (wn + wm + cfg.omega_mech);
    }
  }
  return EnergyShift{sum, nf, {sum}};
}

std::vector<GroundStateCorrection> ground_state_correction_multi(const MultiBagConfig& cfg) {
  cfg.validate();
  std::vector<GroundStateCorrection> out;
  out.reserve(cfg.omegas.size());
  for (std::size_t l = 0; l < cfg.omegas.size(); ++l) {
    out.push_back(ground_state_correction(cfg.wall_config(l)));
  }
  return out;
}

EnergyShift vacuum_energy_shift_multi(const MultiBagConfig& cfg) {
  cfg.validate();
  EnergyShift out;
  out.cutoff = cfg.base.n_fermion_modes;
  for (std::size_t l = 0; l < cfg.omegas.size(); ++l) {
    const double shift = vacuum_energy_shift(cfg.wall_config(l)).delta_e;
    out.per_oscillator.push_back(shift);
    out.delta_e += shift;
  }
  return out;
}

double boson_reduced_purity(const GroundStateCorrection& gsc) {
  double s = 0.0;
  for (double a : gsc.amplitudes) s += a * a;
  if (s == 0.0) return 1.0;
  const double z = 1.0 + s;
  return (1.0 + s * s) / (z * z);
}

}  // namespace fermibag
