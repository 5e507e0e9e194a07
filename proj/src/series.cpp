#include "autf/series.hpp"

#include "autf/errors.hpp"

#include <cmath>
#include <cstdlib>

namespace autf {

namespace {

bool finite(std::complex<double> v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

void require_compatible(const TaylorSeries& a, const TaylorSeries& b) {
    if (a.center != b.center)
        throw CenterMismatch("series centers differ");
    if (a.coeffs.size() != b.coeffs.size())
        throw OrderMismatch("series truncation orders differ");
}

// Coefficient tables of the entire primitives about 0, generated by the
// exact rational recurrence 1/j! and rounded to double once.
struct PrimitiveTables {
    std::vector<double> inv_fact;   // 1/j!
    std::vector<double> cos_c;      // cos h
    std::vector<double> sin_c;      // sin h
    std::vector<double> cosh_c;     // cosh h
    std::vector<double> sinh_c;     // sinh h
};

PrimitiveTables make_tables(int order) {
    PrimitiveTables t;
    int n = order + 1;
    t.inv_fact.resize(n);
    t.cos_c.assign(n, 0.0);
    t.sin_c.assign(n, 0.0);
    t.cosh_c.assign(n, 0.0);
    t.sinh_c.assign(n, 0.0);
    BigRational f(1);
    for (int j = 0; j < n; ++j) {
        if (j > 0) f /= j;
        double d = f.convert_to<double>();
        t.inv_fact[j] = d;
        if (j % 2 == 0) {
            t.cos_c[j] = (j % 4 == 0) ? d : -d;
            t.cosh_c[j] = d;
        } else {
            t.sin_c[j] = (j % 4 == 1) ? d : -d;
            t.sinh_c[j] = d;
        }
    }
    return t;
}

// Series about g0 of the primitive, as a "coefficients only" vector;
// combined with the shifted inner series by Horner substitution.
std::vector<std::complex<double>> primitive_coeffs(PrimitiveKind kind,
                                                   std::complex<double> g0,
                                                   int order) {
    PrimitiveTables t = make_tables(order);
    std::vector<std::complex<double>> p(order + 1);
    switch (kind) {
        case PrimitiveKind::Exp: {
            std::complex<double> e = std::exp(g0);
            for (int j = 0; j <= order; ++j) p[j] = e * t.inv_fact[j];
            break;
        }
        case PrimitiveKind::Sin: {
            std::complex<double> s = std::sin(g0), c = std::cos(g0);
            for (int j = 0; j <= order; ++j)
                p[j] = s * t.cos_c[j] + c * t.sin_c[j];
            break;
        }
        case PrimitiveKind::Cos: {
            std::complex<double> s = std::sin(g0), c = std::cos(g0);
            for (int j = 0; j <= order; ++j)
                p[j] = c * t.cos_c[j] - s * t.sin_c[j];
            break;
        }
        case PrimitiveKind::Sinh: {
            std::complex<double> s = std::sinh(g0), c = std::cosh(g0);
            for (int j = 0; j <= order; ++j)
                p[j] = s * t.cosh_c[j] + c * t.sinh_c[j];
            break;
        }
        case PrimitiveKind::Cosh: {
            std::complex<double> s = std::sinh(g0), c = std::cosh(g0);
            for (int j = 0; j <= order; ++j)
                p[j] = c * t.cosh_c[j] + s * t.sinh_c[j];
            break;
        }
    }
    return p;
}

TaylorSeries constant_series(std::complex<double> v,
                             std::complex<double> center, int order) {
    TaylorSeries s{center, std::vector<std::complex<double>>(order + 1)};
    s.coeffs[0] = v;
    return s;
}

TaylorSeries pow_series(TaylorSeries base, unsigned e) {
    TaylorSeries r = constant_series({1, 0}, base.center, base.order());
    while (e) {
        if (e & 1u) r = mul(r, base);
        e >>= 1u;
        if (e) base = mul(base, base);
    }
    return r;
}

TaylorSeries expand_impl(const ExprPtr& f, std::complex<double> center,
                         int order) {
    return std::visit(
        [&](const auto& n) -> TaylorSeries {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>)
                return constant_series(n.value, center, order);
            if constexpr (std::is_same_v<T, Variable>) {
                TaylorSeries s = constant_series(center, center, order);
                if (order >= 1) s.coeffs[1] = {1, 0};
                return s;
            }
            if constexpr (std::is_same_v<T, Sum>) {
                TaylorSeries acc = expand_impl(n.terms[0], center, order);
                for (std::size_t k = 1; k < n.terms.size(); ++k)
                    acc = add(acc, expand_impl(n.terms[k], center, order));
                return acc;
            }
            if constexpr (std::is_same_v<T, Product>) {
                TaylorSeries acc = expand_impl(n.factors[0], center, order);
                for (std::size_t k = 1; k < n.factors.size(); ++k)
                    acc = mul(acc, expand_impl(n.factors[k], center, order));
                return acc;
            }
            if constexpr (std::is_same_v<T, IntegerPower>)
                return pow_series(expand_impl(n.base, center, order),
                                  n.exponent);
            if constexpr (std::is_same_v<T, Negate>)
                return scale(expand_impl(n.arg, center, order), {-1, 0});
            if constexpr (std::is_same_v<T, Primitive>) {
                TaylorSeries inner = expand_impl(n.arg, center, order);
                std::complex<double> g0 = inner.coeffs[0];
                TaylorSeries outer{g0,
                                   primitive_coeffs(n.kind, g0, order)};
                return compose(outer, inner);
            }
        },
        f->node);
}

} // namespace

std::complex<double> TaylorSeries::eval(std::complex<double> z) const {
    std::complex<double> h = z - center;
    std::complex<double> acc(0, 0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * h + *it;
    return acc;
}

TaylorSeries expand(const ExprPtr& f, std::complex<double> center, int order) {
    if (order < 1) throw Error("expansion order must be >= 1");
    TaylorSeries s = expand_impl(f, center, order);
    for (const auto& c : s.coeffs)
        if (!finite(c))
            throw OverflowError("series coefficients overflowed");
    return s;
}

TaylorSeries add(const TaylorSeries& a, const TaylorSeries& b) {
    require_compatible(a, b);
    TaylorSeries r = a;
    for (std::size_t k = 0; k < r.coeffs.size(); ++k) r.coeffs[k] += b.coeffs[k];
    return r;
}

TaylorSeries mul(const TaylorSeries& a, const TaylorSeries& b) {
    require_compatible(a, b);
    TaylorSeries r{a.center,
                   std::vector<std::complex<double>>(a.coeffs.size())};
    for (std::size_t j = 0; j < a.coeffs.size(); ++j) {
        if (a.coeffs[j] == std::complex<double>(0, 0)) continue;
        for (std::size_t k = 0; j + k < b.coeffs.size(); ++k)
            r.coeffs[j + k] += a.coeffs[j] * b.coeffs[k];
    }
    return r;
}

TaylorSeries scale(const TaylorSeries& a, std::complex<double> factor) {
    TaylorSeries r = a;
    for (auto& c : r.coeffs) c *= factor;
    return r;
}

TaylorSeries compose_affine(const TaylorSeries& s, std::complex<double> lambda,
                            std::complex<double> b,
                            std::complex<double> out_center) {
    std::complex<double> mapped = lambda * out_center + b;
    double tol = 1e-12 * (1.0 + std::abs(s.center));
    if (std::abs(mapped - s.center) > tol)
        throw CenterMismatch(
            "lambda*z0 + b does not map the output center to the series "
            "center");
    TaylorSeries r{out_center,
                   std::vector<std::complex<double>>(s.coeffs.size())};
    std::complex<double> lp(1, 0);
    for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
        r.coeffs[j] = s.coeffs[j] * lp;
        lp *= lambda;
    }
    return r;
}

TaylorSeries compose(const TaylorSeries& outer, const TaylorSeries& inner) {
    double scale0 = 0.0;
    for (const auto& c : inner.coeffs) scale0 = std::max(scale0, std::abs(c));
    if (std::abs(inner.coeffs[0] - outer.center) >
        1e-12 * (1.0 + scale0 + std::abs(outer.center)))
        throw CenterMismatch(
            "inner constant term must equal the outer center for truncated "
            "substitution");
    // h = inner - outer.center has vanishing constant term; substitute by
    // Horner so each step is an exact truncated ring operation.
    TaylorSeries h = inner;
    h.coeffs[0] = {0, 0};
    int n = outer.order();
    TaylorSeries r =
        constant_series(outer.coeffs[n], inner.center, inner.order());
    for (int j = n - 1; j >= 0; --j) {
        r = mul(r, h);
        r.coeffs[0] += outer.coeffs[j];
    }
    return r;
}

TaylorSeries derivative(const TaylorSeries& s) {
    if (s.order() < 1)
        throw Error("derivative requires truncation order >= 1");
    TaylorSeries r{s.center,
                   std::vector<std::complex<double>>(s.coeffs.size() - 1)};
    for (std::size_t k = 1; k < s.coeffs.size(); ++k)
        r.coeffs[k - 1] = static_cast<double>(k) * s.coeffs[k];
    return r;
}

int zero_order(const TaylorSeries& s, double tol) {
    double max_mag = 0.0;
    for (const auto& c : s.coeffs) max_mag = std::max(max_mag, std::abs(c));
    if (max_mag > 0.0) {
        for (std::size_t m = 0; m < s.coeffs.size(); ++m)
            if (std::abs(s.coeffs[m]) > tol * max_mag)
                return static_cast<int>(m);
    }
    throw AllCoefficientsVanish(
        "all series coefficients vanish to tolerance; raise the truncation "
        "order, or the function is locally constant to this depth");
}

} // namespace autf
