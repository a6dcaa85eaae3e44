#pragma once

#include <functional>
#include <vector>

#include "fermibag/specfun.hpp"

namespace fermibag::detail {

using ComplexIntegrand = std::function<Complex(double)>;

/// F(t_i) = int_0^{t_i} f on the uniform grid t_i = i * t / cells, each cell
/// integrated with Simpson's rule through its midpoint.
std::vector<Complex> cumulative_integral(const ComplexIntegrand& f, double t, int cells);

/// Composite Simpson over uniform nodes (cells must be even).
Complex simpson(const std::vector<Complex>& values, double h);

/// Runs `evaluate(cells)` with cells = start, 2 start, 4 start, ... until two
/// successive results differ by less than tol * max(1, |result|). Throws
/// QuadratureNotConverged past `max_cells`.
Complex refine_until_converged(const std::function<Complex(int)>& evaluate, int start,
                               double tol, int max_cells, const char* what);

}  // namespace fermibag::detail
