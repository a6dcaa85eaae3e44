#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fermibag/errors.hpp"

namespace fermibag::detail {

std::vector<Complex> cumulative_integral(const ComplexIntegrand& f, double t, int cells) {
  std::vector<Complex> out(static_cast<std::size_t>(cells) + 1, 0.0);
  if (t == 0.0) return out;
  const double h = t / cells;
  Complex left = f(0.0);
  for (int i = 0; i < cells; ++i) {
    const double a = i * h;
    const Complex mid = f(a + 0.5 * h);
    const Complex right = f(i + 1 == cells ? t : a + h);
    out[i + 1] = out[i] + (h / 6.0) * (left + 4.0 * mid + right);
    left = right;
  }
  return out;
}

Complex simpson(const std::vector<Complex>& values, double h) {
  const std::size_t cells = values.size() - 1;
  if (cells == 0) return 0.0;
  Complex acc = values.front() + values.back();
  for (std::size_t i = 1; i < cells; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  return acc * (h / 3.0);
}

Complex refine_until_converged(const std::function<Complex(int)>& evaluate, int start,
                               double tol, int max_cells, const char* what) {
  int cells = std::max(2, start + start % 2);
  Complex prev = evaluate(cells);
  double last_diff = 0.0;
  while (cells <= max_cells / 2) {
    cells *= 2;
    const Complex next = evaluate(cells);
    last_diff = std::abs(next - prev);
    if (last_diff < tol * std::max(1.0, std::abs(next))) return next;
    prev = next;
  }
  throw QuadratureNotConverged(std::string(what) + ": not converged at " +
                               std::to_string(cells) + " cells (last change " +
                               std::to_string(last_diff) + ")");
}

}  // namespace fermibag::detail
