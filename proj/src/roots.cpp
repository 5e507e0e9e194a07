#include "autf/roots.hpp"

#include "autf/errors.hpp"
#include "autf/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace autf {

namespace {

using cplx = std::complex<double>;

// Deterministic per-index perturbation for the starting circle.
double unit_noise(std::uint64_t k) {
    std::uint64_t x = k + 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    x = x ^ (x >> 31);
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

struct HornerResult {
    cplx value;
    cplx derivative;
};

HornerResult horner_with_derivative(const std::vector<cplx>& c, cplx z) {
    cplx p(0, 0), dp(0, 0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp};
}

std::vector<cplx> trimmed_coeffs(const PolyForm& p) {
    std::vector<cplx> c = p.coeffs;
    while (c.size() > 1 && c.back() == cplx(0, 0)) c.pop_back();
    return c;
}

std::vector<cplx> poly_derivative(const std::vector<cplx>& c) {
    std::vector<cplx> d;
    for (std::size_t k = 1; k < c.size(); ++k)
        d.push_back(static_cast<double>(k) * c[k]);
    if (d.empty()) d.push_back({0, 0});
    return d;
}

// Merge-by-proximity: single-linkage clusters with the given threshold.
std::vector<std::vector<std::size_t>> cluster(const std::vector<cplx>& pts,
                                              double threshold) {
    std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (std::abs(pts[a] - pts[b]) < threshold)
                parent[find(a)] = find(b);
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t a = 0; a < n; ++a) groups[find(a)].push_back(a);
    std::erase_if(groups, [](const auto& g) { return g.empty(); });
    return groups;
}

bool before(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Newton refinement of a multiplicity-m cluster: the common root is a
// simple zero of the (m-1)-th derivative. Polishing continues until the
// step vanishes outright, so roots that are exactly representable (the
// origin in particular) come out exact rather than carrying rounding
// dust into the exact verification tier.
std::optional<cplx> refine_multiple_root(const std::vector<cplx>& coeffs,
                                         cplx start, int multiplicity) {
    std::vector<cplx> d = coeffs;
    for (int k = 1; k < multiplicity; ++k) d = poly_derivative(d);
    cplx z = start;
    double prev_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 80; ++it) {
        auto h = horner_with_derivative(d, z);
        if (h.derivative == cplx(0, 0)) return std::nullopt;
        cplx step = h.value / h.derivative;
        if (step == cplx(0, 0)) return z;
        z -= step;
        double s = std::abs(step);
        if (s >= prev_step && s <= 1e-12 * (1.0 + std::abs(z)))
            return z; // stalled at the rounding-noise level
        prev_step = s;
    }
    return z;
}

} // namespace

double coefficient_scale(const PolyForm& p) {
    double s = 0.0;
    for (const auto& c : p.coeffs) s += std::abs(c);
    return s;
}

std::vector<cplx> polynomial_roots(const PolyForm& p, double tol,
                                   int max_iterations) {
    std::vector<cplx> c = trimmed_coeffs(p);
    int degree = static_cast<int>(c.size()) - 1;
    if (degree < 1)
        throw Error("polynomial_roots requires degree >= 1");
    double scale = 0.0;
    for (const auto& a : c) scale += std::abs(a);

    if (degree == 1) return {-c[0] / c[1]};

    // Cauchy-style bound on root magnitudes gives the starting circle.
    double lead = std::abs(c.back());
    double radius = 0.0;
    for (int k = 0; k < degree; ++k)
        radius = std::max(radius, std::abs(c[k]) / lead);
    radius = 0.5 * (1.0 + radius);

    std::vector<cplx> z(degree);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (int k = 0; k < degree; ++k) {
        double angle = two_pi * (static_cast<double>(k) + 0.25) / degree +
                       0.5 / degree +
                       1e-2 * (unit_noise(k) - 0.5);
        double r = radius * (1.0 + 1e-2 * (unit_noise(k + 7919) - 0.5));
        z[k] = std::polar(r, angle);
    }

    for (int it = 0; it < max_iterations; ++it) {
        double worst_step = 0.0;
        for (int i = 0; i < degree; ++i) {
            auto h = horner_with_derivative(c, z[i]);
            if (h.value == cplx(0, 0)) continue;
            cplx newton;
            if (h.derivative == cplx(0, 0)) {
                // Sitting on a critical point of p: nudge off it.
                z[i] += (1.0 + std::abs(z[i])) * cplx(1e-8, 1e-8);
                worst_step = std::max(worst_step, 1e-8);
                continue;
            }
            newton = h.value / h.derivative;
            cplx repulsion(0, 0);
            for (int j = 0; j < degree; ++j) {
                if (j == i) continue;
                cplx d = z[i] - z[j];
                if (d == cplx(0, 0))
                    d = cplx(1e-12, 1e-12) * (1.0 + std::abs(z[i]));
                repulsion += 1.0 / d;
            }
            cplx denom = 1.0 - newton * repulsion;
            cplx step = std::abs(denom) < 1e-290 ? newton : newton / denom;
            z[i] -= step;
            worst_step =
                std::max(worst_step, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (worst_step <= 1e-15) break;
    }

    for (int i = 0; i < degree; ++i) {
        if (std::abs(horner_with_derivative(c, z[i]).value) > tol * scale) {
            std::sort(z.begin(), z.end(), before);
            throw NoConvergence(max_iterations, z);
        }
    }

    // Merge clusters into multiple roots.
    std::vector<cplx> out;
    for (const auto& group : cluster(z, 1e3 * tol)) {
        cplx centroid(0, 0);
        for (std::size_t idx : group) centroid += z[idx];
        centroid /= static_cast<double>(group.size());
        int m = static_cast<int>(group.size());
        cplx root = centroid;
        if (m > 1) {
            auto refined = refine_multiple_root(c, centroid, m);
            if (refined &&
                std::abs(horner_with_derivative(c, *refined).value) <=
                    tol * scale)
                root = *refined;
        }
        for (int k = 0; k < m; ++k) out.push_back(root);
    }
    std::sort(out.begin(), out.end(), before);
    return out;
}

std::vector<CriticalPoint> critical_points(
    const ExprPtr& f, const std::optional<SearchBox>& box) {
    ExprPtr df = differentiate(f);
    auto poly = to_polynomial(f);
    std::vector<CriticalPoint> out;

    if (poly) {
        PolyForm dp = poly->derivative();
        std::vector<cplx> dc = trimmed_coeffs(dp);
        if (dc.size() == 1) {
            if (dc[0] == cplx(0, 0))
                throw Error(
                    "f is constant: every point is a zero of f'; the "
                    "critical-point search is meaningless");
            return out; // nonzero constant derivative: no critical points
        }
        PolyForm trimmed{dc, std::nullopt};
        std::vector<cplx> roots = polynomial_roots(trimmed, 1e-10, 400);
        int series_order = std::max<int>(2, static_cast<int>(dc.size()) - 1);
        std::size_t k = 0;
        while (k < roots.size()) {
            std::size_t j = k;
            while (j < roots.size() && roots[j] == roots[k]) ++j;
            cplx loc = roots[k];
            double resid = std::abs(evaluate(df, loc));
            int mult = zero_order(expand(df, loc, series_order));
            out.push_back({loc, resid, mult});
            k = j;
        }
    } else {
        if (!box)
            throw BoxRequired(
                "critical-point search for a transcendental function needs a "
                "search box");
        if (box->grid < 2) throw Error("search box grid must be >= 2");
        ExprPtr ddf = differentiate(df);
        double slack =
            1e-9 * (1.0 + std::abs(box->hi - box->lo));
        double span_re = box->hi.real() - box->lo.real();
        double span_im = box->hi.imag() - box->lo.imag();
        if (span_re < 0 || span_im < 0)
            throw Error("search box corners are not ordered");
        for (int a = 0; a < box->grid; ++a) {
            for (int b = 0; b < box->grid; ++b) {
                cplx seed(box->lo.real() + span_re * a / (box->grid - 1),
                          box->lo.imag() + span_im * b / (box->grid - 1));
                cplx zc = seed;
                bool converged = false;
                try {
                    for (int it = 0; it < 60; ++it) {
                        cplx num = evaluate(df, zc);
                        cplx den = evaluate(ddf, zc);
                        if (den == cplx(0, 0)) break;
                        cplx step = num / den;
                        zc -= step;
                        if (std::abs(step) <= 1e-13 * (1.0 + std::abs(zc))) {
                            converged = true;
                            break;
                        }
                    }
                } catch (const OverflowError&) {
                    continue; // iteration escaped; drop this seed
                }
                if (!converged || !box->contains(zc, slack)) continue;
                double resid = std::abs(evaluate(df, zc));
                double local_scale = std::abs(evaluate(f, zc));
                if (resid > 1e-9 * (1.0 + local_scale)) continue;
                bool merged = false;
                for (auto& cp : out) {
                    if (std::abs(cp.location - zc) < 1e-8) {
                        if (resid < cp.residual) {
                            cp.location = zc;
                            cp.residual = resid;
                        }
                        merged = true;
                        break;
                    }
                }
                if (!merged) out.push_back({zc, resid, 0});
            }
        }
        for (auto& cp : out)
            cp.multiplicity = zero_order(expand(df, cp.location, 16));
    }

    std::sort(out.begin(), out.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) {
                  return before(a.location, b.location);
              });
    return out;
}

} // namespace autf
