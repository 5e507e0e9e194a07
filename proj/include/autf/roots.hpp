#pragma once

#include "autf/expr.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace autf {

// Axis-aligned search rectangle with a per-axis seed resolution. A
// transcendental f' may have infinitely many zeros; the search is
// localized to the box and makes no completeness claim there.
struct SearchBox {
    std::complex<double> lo; // lower-left corner
    std::complex<double> hi; // upper-right corner
    int grid = 16;           // seeds per axis, >= 2

    bool contains(std::complex<double> z, double slack = 0.0) const {
        return z.real() >= lo.real() - slack && z.real() <= hi.real() + slack &&
               z.imag() >= lo.imag() - slack && z.imag() <= hi.imag() + slack;
    }
};

// A zero of f'. multiplicity is the order of the zero of f' at location,
// measured from the series expansion (a hint, exact for polynomials).
struct CriticalPoint {
    std::complex<double> location;
    double residual; // |f'(location)|
    int multiplicity;
};

// Sum of coefficient magnitudes; the residual scale used by the
// convergence test |p(root)| <= tol * scale.
double coefficient_scale(const PolyForm& p);

// All degree-many roots (with multiplicity, as repeated entries), by
// simultaneous Ehrlich-Aberth iteration from perturbed-circle starting
// points. Clusters closer than 1e3*tol are merged to a refined common
// root reported with multiplicity. Output is sorted by (re, im).
// Throws NoConvergence with the best iterates when residuals stay above
// tol * coefficient_scale(p).
std::vector<std::complex<double>> polynomial_roots(const PolyForm& p,
                                                   double tol = 1e-10,
                                                   int max_iterations = 300);

// Zeros of f'. Polynomial f delegates to polynomial_roots; otherwise a
// box is required and Newton iteration runs from every grid node, keeping
// deduplicated converged points inside the box. Sorted by (re, im).
std::vector<CriticalPoint> critical_points(
    const ExprPtr& f, const std::optional<SearchBox>& box = std::nullopt);

} // namespace autf
