#pragma once

#include "autf/expr.hpp"

#include <complex>
#include <vector>

namespace autf {

// Truncated Taylor expansion about an arbitrary center. coeffs holds
// a_0..a_N; arithmetic between two series requires equal centers and
// equal truncation orders.
struct TaylorSeries {
    std::complex<double> center;
    std::vector<std::complex<double>> coeffs;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }

    // Horner evaluation in powers of (z - center).
    std::complex<double> eval(std::complex<double> z) const;
};

// a_j = f^(j)(center)/j! for j <= N, computed by structural recursion on
// the AST (series add/mul and power-series substitution for primitives),
// never by repeated numerical differentiation. Throws OverflowError on
// coefficient blow-up.
TaylorSeries expand(const ExprPtr& f, std::complex<double> center, int order);

TaylorSeries add(const TaylorSeries& a, const TaylorSeries& b);
TaylorSeries mul(const TaylorSeries& a, const TaylorSeries& b);
TaylorSeries scale(const TaylorSeries& a, std::complex<double> factor);

// Series of z -> s(lambda*z + b) about out_center; requires
// lambda*out_center + b = s.center within 1e-12 (relative). The j-th
// output coefficient is a_j * lambda^j.
TaylorSeries compose_affine(const TaylorSeries& s, std::complex<double> lambda,
                            std::complex<double> b,
                            std::complex<double> out_center);

// outer series about w0 substituted with inner; requires the inner's
// constant term to equal w0 (vanishing constant term after recentering),
// which is the only regime where truncated substitution is sound.
TaylorSeries compose(const TaylorSeries& outer, const TaylorSeries& inner);

// Order N-1 series with coefficients (j+1)*a_{j+1}; requires N >= 1.
TaylorSeries derivative(const TaylorSeries& s);

// Smallest m with |a_m| > tol * max_j |a_j|. The threshold is relative so
// that series of different scales are comparable. Throws
// AllCoefficientsVanish when every coefficient is below threshold (raise N,
// or the function is locally constant to this depth).
int zero_order(const TaylorSeries& s, double tol = 1e-9);

} // namespace autf
