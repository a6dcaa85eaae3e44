#pragma once

#include <complex>
#include <vector>

namespace fermibag {

using Complex = std::complex<double>;

/// Reduces an angle to the half-open interval (-pi, pi].
double wrap_phase(double angle);

/// Squeezing parameter zeta = r e^{i phi}.
class SqueezeParams {
 public:
  SqueezeParams() = default;
  SqueezeParams(double r, double phi);

  double r() const { return r_; }
  double phi() const { return phi_; }
  Complex zeta() const { return std::polar(r_, phi_); }

  friend bool operator==(const SqueezeParams&, const SqueezeParams&) = default;

 private:
  double r_ = 0.0;
  double phi_ = 0.0;
};

/// Coherent amplitude beta = |beta| e^{i theta}.
class CoherentParams {
 public:
  CoherentParams() = default;
  CoherentParams(double beta_abs, double theta);

  double beta_abs() const { return beta_abs_; }
  double theta() const { return theta_; }
  Complex beta() const { return std::polar(beta_abs_, theta_); }

  friend bool operator==(const CoherentParams&, const CoherentParams&) = default;

 private:
  double beta_abs_ = 0.0;
  double theta_ = 0.0;
};

/// log(n!) for n >= 0.
double log_factorial(int n);

/// Associated Laguerre polynomial L_n^k(x) by upward three-term recurrence.
double laguerre(int n, int k, double x);

/// Fock-basis matrix element <l| D(lambda) |j> of the displacement operator
/// D(lambda) = exp(lambda b^dag - lambda^* b).
///
/// The prefactor sqrt(min!/max!) |lambda|^{|l-j|} e^{-|lambda|^2/2} is
/// assembled in log space, so indices well past 170 stay finite.
Complex displacement_element(int l, int j, Complex lambda);

/// Fock coefficients c_0..c_{n_max} of D(beta) S(zeta) |0>, where
/// S(zeta) = exp((zeta^* b^2 - zeta b^dag^2) / 2).
///
/// Evaluated by applying truncated squeeze and displacement exponentials to
/// the vacuum. The working cutoff grows until the population in the top
/// quarter of the truncated space is below 1e-10; throws CutoffTooSmall
/// once `max_cutoff` is reached without meeting that bound.
std::vector<Complex> squeezed_coherent_coefficients(const CoherentParams& coh,
                                                    const SqueezeParams& sq,
                                                    int n_max,
                                                    int max_cutoff = 1024);

/// Overload taking the complex displacement directly (beta + Lambda_t shows
/// up in the transition formulas).
std::vector<Complex> squeezed_coherent_coefficients(Complex beta,
                                                    const SqueezeParams& sq,
                                                    int n_max,
                                                    int max_cutoff = 1024);

/// Unnormalized sinc: sin(x)/x with sinc_u(0) = 1.
double sinc_u(double x);

}  // namespace fermibag
