#pragma once

#include <functional>

namespace odetree {

// Adaptive Simpson quadrature on [a,b] to absolute tolerance `abs_tol`.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

// Quadrature on [a, +inf) via the substitution t = a + u/(1-u).
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double abs_tol = 1e-12);

// Bisection on [lo, hi] to absolute tolerance `tol`; f(lo) and f(hi) must
// have opposite signs.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-10);

}  // namespace odetree
