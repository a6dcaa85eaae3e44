#include "fermibag/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fermibag/errors.hpp"

namespace fermibag {

namespace {

constexpr double kTailTolerance = 1e-10;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw InvalidArgument(std::string(what) + " must be finite");
  }
}

// Truncated Fock-space vector and the two generators we need. Operators are
// applied matrix-free; every generator here is anti-Hermitian on the
// truncated space, so exp(G) v is norm preserving.
using FockVector = std::vector<Complex>;

double norm(const FockVector& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

// (zeta^* b^2 - zeta b^dag^2) / 2
FockVector apply_squeeze_generator(Complex zeta, const FockVector& v) {
  const int m = static_cast<int>(v.size());
  FockVector out(v.size());
  for (int n = 0; n < m; ++n) {
    Complex acc = 0.0;
    if (n + 2 < m) {
      acc += std::conj(zeta) * std::sqrt(double(n + 1) * double(n + 2)) * v[n + 2];
    }
    if (n >= 2) {
      acc -= zeta * std::sqrt(double(n) * double(n - 1)) * v[n - 2];
    }
    out[n] = 0.5 * acc;
  }
  return out;
}

// beta b^dag - beta^* b
FockVector apply_displacement_generator(Complex beta, const FockVector& v) {
  const int m = static_cast<int>(v.size());
  FockVector out(v.size());
  for (int n = 0; n < m; ++n) {
    Complex acc = 0.0;
    if (n >= 1) acc += beta * std::sqrt(double(n)) * v[n - 1];
    if (n + 1 < m) acc -= std::conj(beta) * std::sqrt(double(n + 1)) * v[n + 1];
    out[n] = acc;
  }
  return out;
}

// exp(G) v by substepped Taylor series; `g_norm` bounds ||G||.
template <typename Generator>
FockVector expv(const Generator& apply, double g_norm, FockVector v) {
  const int substeps = std::max(1, static_cast<int>(std::ceil(g_norm)));
  const double h = 1.0 / substeps;
  for (int s = 0; s < substeps; ++s) {
    FockVector term = v;
    FockVector acc = v;
    for (int k = 1; k < 80; ++k) {
      term = apply(term);
      for (auto& x : term) x *= h / k;
      for (size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
      if (norm(term) < 1e-18 * norm(acc)) break;
    }
    v = std::move(acc);
  }
  return v;
}

int initial_cutoff(Complex beta, const SqueezeParams& sq, int n_max) {
  const double sinh_r = std::sinh(sq.r());
  const double mean = std::norm(beta) + sinh_r * sinh_r;
  int cutoff = n_max + 20 + static_cast<int>(std::ceil(4.0 * mean));
  // Squeezed vacuum populations decay like tanh(r)^n; make room for that
  // tail before displacement spreads it further.
  const double t = std::tanh(sq.r());
  if (t > 1e-3) {
    cutoff += static_cast<int>(std::ceil(std::log(1e-13) / std::log(t)));
  }
  cutoff += static_cast<int>(std::ceil(8.0 * std::abs(beta)));
  return cutoff;
}

}  // namespace

double wrap_phase(double angle) {
  require_finite(angle, "phase");
  constexpr double pi = std::numbers::pi;
  double a = std::remainder(angle, 2.0 * pi);  // in [-pi, pi]
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

SqueezeParams::SqueezeParams(double r, double phi) : r_(r), phi_(wrap_phase(phi)) {
  require_finite(r, "squeeze magnitude");
  if (r < 0.0) throw InvalidArgument("squeeze magnitude r must be >= 0");
}

CoherentParams::CoherentParams(double beta_abs, double theta)
    : beta_abs_(beta_abs), theta_(wrap_phase(theta)) {
  require_finite(beta_abs, "coherent amplitude");
  if (beta_abs < 0.0) throw InvalidArgument("coherent |beta| must be >= 0");
}

double log_factorial(int n) {
  if (n < 0) throw InvalidArgument("log_factorial: n must be >= 0");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double laguerre(int n, int k, double x) {
  if (n < 0 || k < 0) {
    throw InvalidArgument("laguerre: n and k must be non-negative");
  }
  require_finite(x, "laguerre argument");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = 1.0 + k - x;
  for (int i = 1; i < n; ++i) {
    const double next = ((2.0 * i + 1.0 + k - x) * curr - (i + k) * prev) / (i + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

Complex displacement_element(int l, int j, Complex lambda) {
  if (l < 0 || j < 0) {
    throw InvalidArgument("displacement_element: indices must be non-negative");
  }
  require_finite(lambda.real(), "displacement parameter");
  require_finite(lambda.imag(), "displacement parameter");

  const double mod2 = std::norm(lambda);
  if (mod2 == 0.0) return l == j ? 1.0 : 0.0;

  const int lo = std::min(l, j);
  const int diff = std::abs(l - j);
  // l >= j carries lambda^{l-j}; j > l carries (-lambda^*)^{j-l}.
  const Complex base = l >= j ? lambda : -std::conj(lambda);
  const double log_mag = 0.5 * (log_factorial(lo) - log_factorial(lo + diff)) +
                         diff * std::log(std::sqrt(mod2)) - 0.5 * mod2;
  const double phase = diff * std::arg(base);
  return std::polar(std::exp(log_mag), phase) * laguerre(lo, diff, mod2);
}

std::vector<Complex> squeezed_coherent_coefficients(Complex beta, const SqueezeParams& sq,
                                                    int n_max, int max_cutoff) {
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  require_finite(beta.real(), "coherent amplitude");
  require_finite(beta.imag(), "coherent amplitude");

  int cutoff = std::min(initial_cutoff(beta, sq, n_max), max_cutoff);
  if (cutoff <= n_max) {
    throw CutoffTooSmall("squeezed_coherent_coefficients: n_max exceeds max_cutoff");
  }
  const Complex zeta = sq.zeta();

  while (true) {
    FockVector v(cutoff + 1, 0.0);
    v[0] = 1.0;
    const double top = std::sqrt(double(cutoff) * double(cutoff + 1));
    if (sq.r() > 0.0) {
      v = expv([&](const FockVector& x) { return apply_squeeze_generator(zeta, x); },
               sq.r() * top, std::move(v));
    }
    if (beta != 0.0) {
      v = expv([&](const FockVector& x) { return apply_displacement_generator(beta, x); },
               2.0 * std::abs(beta) * std::sqrt(double(cutoff + 1)), std::move(v));
    }

    double tail = 0.0;
    for (int n = (3 * cutoff) / 4; n <= cutoff; ++n) tail += std::norm(v[n]);
    if (tail < kTailTolerance) {
      v.resize(n_max + 1);
      return v;
    }
    if (cutoff >= max_cutoff) {
      throw CutoffTooSmall("squeezed_coherent_coefficients: tail mass " +
                           std::to_string(tail) + " above tolerance at cutoff " +
                           std::to_string(cutoff));
    }
    cutoff = std::min(2 * cutoff, max_cutoff);
  }
}

std::vector<Complex> squeezed_coherent_coefficients(const CoherentParams& coh,
                                                    const SqueezeParams& sq, int n_max,
                                                    int max_cutoff) {
  return squeezed_coherent_coefficients(coh.beta(), sq, n_max, max_cutoff);
}

double sinc_u(double x) {
  require_finite(x, "sinc argument");
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace fermibag
