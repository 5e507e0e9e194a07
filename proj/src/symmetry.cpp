#include "autf/symmetry.hpp"

#include "autf/errors.hpp"
#include "autf/series.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace autf {

namespace {

using cplx = std::complex<double>;

// Small deterministic generator (splitmix64); identical streams on every
// platform, so reports are reproducible bit for bit.
class SampleStream {
public:
    explicit SampleStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t x = (state_ += 0x9e3779b97f4a7c15ull);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    cplx in_disk(cplx center, double radius) {
        double r = radius * std::sqrt(unit());
        double a = 6.283185307179586476925286766559 * unit();
        return center + std::polar(r, a);
    }

private:
    std::uint64_t state_;
};

std::uint64_t candidate_seed(const VerificationPolicy& policy,
                             const RationalAngle& angle) {
    std::uint64_t s = policy.seed * 0x9e3779b97f4a7c15ull;
    s += static_cast<std::uint64_t>(angle.p()) * 1000003ull;
    s += static_cast<std::uint64_t>(angle.q()) * 10007ull;
    return s;
}

// The point verification samples around: the candidate's origin when
// known, its fixed point otherwise, the origin for translations.
cplx sampling_anchor(const AffineMap& phi) {
    if (phi.provenance) return *phi.provenance;
    if (!phi.angle.is_zero()) return fixed_point(phi);
    return {0, 0};
}

// Exact coefficients of p(lambda z + b) by Horner over Q(i).
std::vector<GaussianRational> compose_exact(
    const std::vector<GaussianRational>& a, const GaussianRational& lambda,
    const GaussianRational& b) {
    std::vector<GaussianRational> q{a.back()};
    for (int j = static_cast<int>(a.size()) - 2; j >= 0; --j) {
        std::vector<GaussianRational> next(q.size() + 1,
                                           GaussianRational::from_int(0));
        for (std::size_t k = 0; k < q.size(); ++k) {
            next[k + 1] = next[k + 1] + lambda * q[k];
            next[k] = next[k] + b * q[k];
        }
        next[0] = next[0] + a[j];
        q = std::move(next);
    }
    return q;
}

bool exact_equal(const std::vector<GaussianRational>& a,
                 const std::vector<GaussianRational>& b) {
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        GaussianRational x =
            k < a.size() ? a[k] : GaussianRational::from_int(0);
        GaussianRational y =
            k < b.size() ? b[k] : GaussianRational::from_int(0);
        if (x != y) return false;
    }
    return true;
}

struct SampleSweep {
    double worst = 0.0;
    cplx worst_point{0, 0};
    double max_residual = 0.0;
    int completed = 0;
    bool incomplete = false;
};

SampleSweep sweep_samples(const ExprPtr& f, const AffineMap& phi, cplx z0,
                          double radius, int count, SampleStream& rng) {
    SampleSweep sweep;
    for (int s = 0; s < count; ++s) {
        cplx z = rng.in_disk(z0, radius);
        try {
            cplx fv = evaluate(f, z);
            cplx fw = evaluate(f, phi.apply(z));
            double r = std::abs(fw - fv) / (1.0 + std::abs(fv));
            if (r > sweep.worst) {
                sweep.worst = r;
                sweep.worst_point = z;
            }
            sweep.max_residual = std::max(sweep.max_residual, r);
            ++sweep.completed;
        } catch (const OverflowError&) {
            sweep.incomplete = true;
        }
    }
    return sweep;
}

bool same_element(const AffineMap& a, const AffineMap& b, double b_tol) {
    return a.angle == b.angle && std::abs(a.b - b.b) <= b_tol;
}

} // namespace

const char* verify_status_name(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::VerifiedExact: return "VerifiedExact";
        case VerifyStatus::VerifiedNumeric: return "VerifiedNumeric";
        case VerifyStatus::Refuted: return "Refuted";
        case VerifyStatus::Indeterminate: return "Indeterminate";
    }
    return "?";
}

AffineMap compose(const AffineMap& f, const AffineMap& g) {
    AffineMap r;
    r.angle = f.angle + g.angle;
    r.b = f.multiplier() * g.b + f.b;
    return r;
}

AffineMap invert(const AffineMap& f) {
    AffineMap r;
    r.angle = -f.angle;
    r.b = -(r.angle.unit_multiplier() * f.b);
    return r;
}

std::complex<double> fixed_point(const AffineMap& f) {
    if (f.angle.is_zero()) {
        if (f.b == cplx(0, 0))
            throw EveryPointFixed("the identity fixes every point");
        throw TranslationHasNoFixedPoint(
            "a translation has no fixed point in the plane");
    }
    return f.b / (1.0 - f.angle.unit_multiplier());
}

long long theta_height(const RationalAngle& angle) {
    return std::max(angle.p(), angle.q());
}

int zero_order_at(const ExprPtr& f, cplx z0, int order, double tol) {
    TaylorSeries s = expand(f, z0, order);
    s.coeffs[0] = {0, 0};
    int m = zero_order(s, tol);
    if (m == 1)
        throw OrderOne(
            "f - f(z0) has a simple zero at z0: not a critical point");
    return m;
}

std::vector<AffineMap> candidates(cplx z0, int n) {
    if (n < 2) throw Error("candidate enumeration requires n >= 2");
    std::vector<AffineMap> out;
    out.reserve(n - 1);
    for (int k = 1; k < n; ++k) {
        AffineMap phi;
        phi.angle = RationalAngle(2 * k, n);
        phi.b = z0 * (1.0 - phi.angle.unit_multiplier());
        phi.provenance = z0;
        out.push_back(std::move(phi));
    }
    return out;
}

VerificationReport verify(const ExprPtr& f, const AffineMap& phi,
                          const VerificationPolicy& policy) {
    VerificationReport report;
    report.map = phi;
    report.seed = candidate_seed(policy, phi.angle);
    SampleStream rng(report.seed);

    cplx z0 = sampling_anchor(phi);
    double radius = policy.radius_factor * (1.0 + std::abs(z0));

    // Exact tier: Gaussian-rational coefficients against a quarter-turn
    // multiplier decide equality outright.
    auto poly = to_polynomial(f);
    if (poly && poly->is_exact() && phi.angle.is_gaussian()) {
        report.exact_tier = true;
        std::vector<GaussianRational> composed =
            compose_exact(*poly->exact, phi.angle.exact_multiplier(),
                          GaussianRational::from_complex(phi.b));
        if (exact_equal(*poly->exact, composed)) {
            report.status = VerifyStatus::VerifiedExact;
            return report;
        }
        // Exact refutation; find a concrete witness for the report.
        SampleSweep sweep = sweep_samples(f, phi, z0, radius, policy.samples,
                                          rng);
        report.status = VerifyStatus::Refuted;
        report.samples = sweep.completed;
        report.max_residual = sweep.max_residual;
        report.witness = sweep.worst_point;
        report.witness_residual = sweep.worst;
        return report;
    }

    // Numeric tier (a): coefficient comparison of f(Phi(.)) against f about
    // the anchor and two random centers.
    report.compare_order = policy.compare_order;
    double max_residual = 0.0;
    bool incomplete = false;
    std::vector<cplx> centers{z0, rng.in_disk(z0, radius),
                              rng.in_disk(z0, radius)};
    for (cplx c : centers) {
        try {
            TaylorSeries about_image =
                expand(f, phi.apply(c), policy.compare_order);
            TaylorSeries pulled_back =
                compose_affine(about_image, phi.multiplier(), phi.b, c);
            TaylorSeries direct = expand(f, c, policy.compare_order);
            double diff = 0.0, mag = 0.0;
            for (std::size_t j = 0; j < direct.coeffs.size(); ++j) {
                diff = std::max(diff, std::abs(pulled_back.coeffs[j] -
                                               direct.coeffs[j]));
                mag = std::max(
                    {mag, std::abs(pulled_back.coeffs[j]),
                     std::abs(direct.coeffs[j])});
            }
            max_residual = std::max(max_residual, diff / (1.0 + mag));
        } catch (const OverflowError&) {
            incomplete = true;
        }
    }

    // Numeric tier (b): pointwise samples in the disk around the anchor.
    SampleSweep sweep =
        sweep_samples(f, phi, z0, radius, policy.samples, rng);
    report.samples = sweep.completed;
    incomplete = incomplete || sweep.incomplete || sweep.completed == 0;
    max_residual = std::max(max_residual, sweep.max_residual);
    report.max_residual = max_residual;

    if (sweep.worst > policy.eps_reject) {
        report.status = VerifyStatus::Refuted;
        report.witness = sweep.worst_point;
        report.witness_residual = sweep.worst;
    } else if (!incomplete && max_residual <= policy.eps_accept) {
        report.status = VerifyStatus::VerifiedNumeric;
    } else {
        report.status = VerifyStatus::Indeterminate;
    }
    return report;
}

PointScan scan_point(const ExprPtr& f, cplx z0,
                     const VerificationPolicy& policy) {
    double gradient = std::abs(evaluate(differentiate(f), z0));
    if (gradient > policy.critical_point_tol)
        throw NotACriticalPoint(
            "|f'(z0)| = " + std::to_string(gradient) +
            " exceeds the critical-point tolerance; anchors must be zeros "
            "of f'");
    PointScan scan;
    scan.anchor = z0;
    scan.order =
        zero_order_at(f, z0, policy.series_depth, policy.zero_order_tol);
    for (const AffineMap& phi : candidates(z0, scan.order))
        scan.reports.push_back(verify(f, phi, policy));
    return scan;
}

std::vector<std::pair<AffineMap, VerificationReport>> find_symmetries_at(
    const ExprPtr& f, cplx z0, const VerificationPolicy& policy) {
    PointScan scan = scan_point(f, z0, policy);
    std::vector<std::pair<AffineMap, VerificationReport>> out;
    for (const VerificationReport& r : scan.reports)
        if (r.verified()) out.emplace_back(r.map, r);
    return out;
}

DerivativeCheck fixed_point_derivative_check(const ExprPtr& f,
                                             const AffineMap& phi, int order,
                                             double tol) {
    cplx z0 = fixed_point(phi);
    int n = zero_order_at(f, z0, order, tol);
    cplx lambda = phi.multiplier();
    for (int k = 0; k < n; ++k) {
        cplx root = RationalAngle(2 * k, n).unit_multiplier();
        if (std::abs(lambda - root) <= 1e-10) return {n, k};
    }
    throw NoMatchingRoot(
        "multiplier is not an n-th root of unity for n = " +
        std::to_string(n) +
        "; the fixed-point derivative law failed (unverified map or bug)");
}

GroupClosure group_closure(const std::vector<AffineMap>& generators, int cap) {
    if (cap < 1) throw Error("closure cap must be >= 1");
    GroupClosure out;
    AffineMap identity;
    out.elements.push_back(identity);
    std::vector<AffineMap> steps;
    for (const AffineMap& g : generators) {
        steps.push_back(g);
        steps.push_back(invert(g));
    }
    std::deque<AffineMap> queue{identity};
    while (!queue.empty() && !out.truncated) {
        AffineMap e = queue.front();
        queue.pop_front();
        for (const AffineMap& g : steps) {
            AffineMap w = compose(g, e);
            bool known = false;
            for (const AffineMap& have : out.elements)
                if (same_element(have, w, 1e-10)) {
                    known = true;
                    break;
                }
            if (known) continue;
            if (static_cast<int>(out.elements.size()) >= cap) {
                out.truncated = true;
                break;
            }
            out.elements.push_back(w);
            queue.push_back(w);
        }
    }
    std::sort(out.elements.begin(), out.elements.end(),
              [](const AffineMap& a, const AffineMap& b) {
                  double ta = static_cast<double>(a.angle.p()) / a.angle.q();
                  double tb = static_cast<double>(b.angle.p()) / b.angle.q();
                  if (ta != tb) return ta < tb;
                  if (a.b.real() != b.b.real()) return a.b.real() < b.b.real();
                  return a.b.imag() < b.b.imag();
              });
    return out;
}

OrbitReport orbit(cplx base, const std::vector<AffineMap>& generators,
                  int depth) {
    if (depth < 1) throw Error("orbit depth must be >= 1");
    OrbitReport report;
    report.base = base;
    report.generators = generators;
    report.depth = depth;
    report.points.push_back(base);
    std::vector<AffineMap> steps;
    for (const AffineMap& g : generators) {
        steps.push_back(g);
        steps.push_back(invert(g));
    }
    std::vector<cplx> frontier{base};
    for (int d = 0; d < depth && !frontier.empty(); ++d) {
        std::vector<cplx> next;
        for (cplx z : frontier) {
            for (const AffineMap& g : steps) {
                cplx w = g.apply(z);
                bool known = false;
                for (cplx have : report.points)
                    if (std::abs(have - w) <= 1e-10) {
                        known = true;
                        break;
                    }
                if (!known) {
                    report.points.push_back(w);
                    next.push_back(w);
                }
            }
        }
        frontier = std::move(next);
    }
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < report.points.size(); ++a)
        for (std::size_t b = a + 1; b < report.points.size(); ++b)
            min_dist = std::min(min_dist,
                                std::abs(report.points[a] - report.points[b]));
    report.min_pairwise_distance = min_dist;
    return report;
}

IntersectionReport check_intersection_translation(
    const ExprPtr& f, const AffineMap& phi, const VerificationPolicy& policy) {
    IntersectionReport report;
    report.on_f = verify(f, phi, policy);
    report.on_derivative = verify(differentiate(f), phi, policy);
    report.both_verified =
        report.on_f.verified() && report.on_derivative.verified();
    if (report.both_verified && !phi.angle.is_zero())
        throw PropositionViolation(
            "a non-translation verified for both f and f': "
            "Aut(f) n Aut(f') must contain only translations");
    return report;
}

VerificationReport check_translation(const ExprPtr& f, cplx b,
                                     const VerificationPolicy& policy) {
    AffineMap phi;
    phi.angle = RationalAngle(0, 1);
    phi.b = b;
    return verify(f, phi, policy);
}

} // namespace autf
