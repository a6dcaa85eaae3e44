#pragma once

#include <vector>

#include "fermibag/model.hpp"

namespace fermibag {

/// First-order dressing of the vacuum:
///   |Psi_0> = |0; 0, 0bar> + sum_{nm} a_{nm} |1; 1_n, 1bar_m>,
/// with Z = <Psi_0|Psi_0> the normalization.
struct GroundStateCorrection {
  int cutoff = 0;
  std::vector<double> amplitudes;  // row-major cutoff x cutoff, [n * cutoff + m]
  double norm_z = 1.0;

  double amplitude(int n, int m) const { return amplitudes[n * cutoff + m]; }
};

struct EnergyShift {
  double delta_e = 0.0;
  int cutoff = 0;
  std::vector<double> per_oscillator;  // one entry per vibrating wall
};

GroundStateCorrection ground_state_correction(const CavityConfig& cfg);

/// Second-order vacuum energy shift, summed over ordered mode pairs (n, m)
/// below the cutoff. Always <= 0.
EnergyShift vacuum_energy_shift(const CavityConfig& cfg);

/// One correction table per fluctuating wall; at this order the walls do not
/// talk to each other, so wall l only sees Omega_l.
std::vector<GroundStateCorrection> ground_state_correction_multi(const MultiBagConfig& cfg);

EnergyShift vacuum_energy_shift_multi(const MultiBagConfig& cfg);

/// Purity Tr(rho_B^2) of the wall's reduced state in the normalized dressed
/// vacuum. The dressed components all carry one phonon and distinct fermion
/// pairs, so rho_B = (|0><0| + S |1><1|) / Z with S = sum a_nm^2.
double boson_reduced_purity(const GroundStateCorrection& gsc);

}  // namespace fermibag
