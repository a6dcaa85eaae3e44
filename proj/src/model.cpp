#include "fermibag/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "fermibag/errors.hpp"

namespace fermibag {

namespace {

double parity_sign(int n, int m) { return (n + m) % 2 == 0 ? 1.0 : -1.0; }

void check_modes(int n, int m, const CavityConfig& cfg) {
  if (n < 0 || m < 0 || n >= cfg.n_fermion_modes || m >= cfg.n_fermion_modes) {
    throw InvalidArgument("mode index outside the fermion cutoff");
  }
}

}  // namespace

void CavityConfig::validate() const {
  if (!(std::isfinite(length) && length > 0.0)) {
    throw InvalidArgument("cavity length must be > 0");
  }
  if (!(std::isfinite(epsilon) && epsilon >= 0.0)) {
    throw InvalidArgument("epsilon must be >= 0");
  }
  if (!(std::isfinite(omega_mech) && omega_mech > 0.0)) {
    throw InvalidArgument("omega_mech must be > 0");
  }
  if (n_fermion_modes < 1) throw InvalidArgument("n_fermion_modes must be >= 1");
}

std::vector<std::string> config_warnings(const CavityConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.epsilon > 0.1) {
    out.push_back("epsilon = " + std::to_string(cfg.epsilon) +
                  " is above 0.1; perturbative results may not apply");
  }
  return out;
}

DriveSpec DriveSpec::impulsive(double g, double nu) {
  if (!(std::isfinite(g) && g >= 0.0)) throw InvalidArgument("impulsive drive: g must be >= 0");
  if (!(std::isfinite(nu) && nu > 0.0)) throw InvalidArgument("impulsive drive: nu must be > 0");
  return DriveSpec(ImpulsiveDrive{g, nu});
}

DriveSpec DriveSpec::sampled(std::vector<double> times, std::vector<Complex> values) {
  if (times.size() != values.size()) {
    throw InvalidArgument("sampled drive: times and values differ in length");
  }
  if (times.size() < 2) throw InvalidArgument("sampled drive: need at least two samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i].real()) ||
        !std::isfinite(values[i].imag())) {
      throw InvalidArgument("sampled drive: non-finite sample");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw InvalidArgument("sampled drive: times must be strictly increasing");
    }
  }
  return DriveSpec(SampledDrive{std::move(times), std::move(values)});
}

bool DriveSpec::is_off() const {
  if (std::holds_alternative<DriveOff>(variant_)) return true;
  if (const auto* imp = std::get_if<ImpulsiveDrive>(&variant_)) return imp->g == 0.0;
  const auto& s = std::get<SampledDrive>(variant_);
  return std::all_of(s.values.begin(), s.values.end(), [](Complex v) { return v == 0.0; });
}

void MultiBagConfig::validate() const {
  base.validate();
  if (n_spikes < 1) throw InvalidArgument("multi-bag: n_spikes must be >= 1");
  if (fluctuating.empty()) throw InvalidArgument("multi-bag: no fluctuating spikes");
  std::set<int> seen;
  for (int q : fluctuating) {
    if (q < 0 || q >= n_spikes) throw InvalidArgument("multi-bag: spike index out of range");
    if (!seen.insert(q).second) throw InvalidArgument("multi-bag: duplicate spike index");
  }
  if (omegas.size() != fluctuating.size() || drives.size() != fluctuating.size()) {
    throw InvalidArgument("multi-bag: omegas/drives must match fluctuating spikes");
  }
  for (double w : omegas) {
    if (!(std::isfinite(w) && w > 0.0)) throw InvalidArgument("multi-bag: omegas must be > 0");
  }
}

CavityConfig MultiBagConfig::wall_config(std::size_t wall) const {
  if (wall >= omegas.size()) throw InvalidArgument("multi-bag: wall index out of range");
  CavityConfig cfg = base;
  cfg.omega_mech = omegas[wall];
  return cfg;
}

double mode_frequency(int n, double length) {
  if (n < 0) throw InvalidArgument("mode index must be >= 0");
  if (!(std::isfinite(length) && length > 0.0)) throw InvalidArgument("length must be > 0");
  return (n + 0.5) * std::numbers::pi / length;
}

std::array<double, 2> mode_spinor(int n, double x, double length, Branch branch) {
  const double k = mode_frequency(n, length);
  if (!(x >= 0.0 && x <= length)) throw InvalidArgument("mode_spinor: x outside [0, L]");
  const double norm = 1.0 / std::sqrt(length);
  const double upper = std::sin(k * x) * norm;
  return {branch == Branch::Particle ? upper : -upper, std::cos(k * x) * norm};
}

double pair_coupling(int n, int m, const CavityConfig& cfg) {
  check_modes(n, m, cfg);
  return -2.0 * parity_sign(n, m) *
         (mode_frequency(n, cfg.length) - mode_frequency(m, cfg.length));
}

double scatter_coupling(int n, int m, const CavityConfig& cfg) {
  check_modes(n, m, cfg);
  return -2.0 * parity_sign(n, m) *
         (mode_frequency(n, cfg.length) + mode_frequency(m, cfg.length));
}

Complex drive_value(const DriveSpec& drive, double t, double omega_mech) {
  if (!(t >= 0.0)) throw InvalidArgument("drive_value: t must be >= 0");
  return std::visit(
      [&](const auto& d) -> Complex {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DriveOff>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ImpulsiveDrive>) {
          return -std::polar(0.5 * d.g * d.nu * std::exp(-d.nu * t), omega_mech * t);
        } else {
          const auto& ts = d.times;
          if (t < ts.front() || t > ts.back()) {
            throw InvalidArgument("drive_value: t outside sampled drive range");
          }
          auto it = std::upper_bound(ts.begin(), ts.end(), t);
          if (it == ts.end()) return d.values.back();
          const auto hi = static_cast<std::size_t>(it - ts.begin());
          const auto lo = hi - 1;
          const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
          return (1.0 - w) * d.values[lo] + w * d.values[hi];
        }
      },
      drive.variant());
}

}  // namespace fermibag
