#pragma once

#include "autf/expr.hpp"
#include "autf/rational.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace autf {

// Phi(z) = e^{i pi theta} z + b with theta = p/q exact. The multiplier is
// always realized from the rational angle, never stored as a rounded
// complex alone.
struct AffineMap {
    RationalAngle angle;
    std::complex<double> b{0, 0};
    // Critical point this candidate was derived from, when any.
    std::optional<std::complex<double>> provenance;

    std::complex<double> multiplier() const { return angle.unit_multiplier(); }

    std::complex<double> apply(std::complex<double> z) const {
        return multiplier() * z + b;
    }

    bool is_identity() const { return angle.is_zero() && b == std::complex<double>(0, 0); }
};

// (f o g): angle arithmetic is exact rational; b = e^{i pi theta_f} b_g + b_f.
AffineMap compose(const AffineMap& f, const AffineMap& g);
AffineMap invert(const AffineMap& f);

// b / (1 - e^{i pi theta}). Throws TranslationHasNoFixedPoint /
// EveryPointFixed for the angle-zero cases.
std::complex<double> fixed_point(const AffineMap& f);

// max(|p|, q) of the reduced, normalized angle; height(0) = 1.
long long theta_height(const RationalAngle& angle);

struct VerificationPolicy {
    int series_depth = 64;      // N: truncation for zero-order queries
    int compare_order = 32;     // M: series-comparison truncation
    int samples = 32;           // S: random sample count
    double eps_accept = 1e-10;
    double eps_reject = 1e-6;
    double zero_order_tol = 1e-9;
    double critical_point_tol = 1e-8;
    double radius_factor = 2.0; // sampling disk R = factor * (1 + |z0|)
    std::uint64_t seed = 0;
};

enum class VerifyStatus { VerifiedExact, VerifiedNumeric, Refuted, Indeterminate };

const char* verify_status_name(VerifyStatus s);

// Outcome of testing f(Phi(z)) = f(z). Numeric verification of a
// functional identity is a semi-decision: a gap between eps_accept and
// eps_reject separates Verified from Refuted, with Indeterminate between.
struct VerificationReport {
    VerifyStatus status;
    AffineMap map;
    bool exact_tier = false;      // decided by exact Gaussian-rational algebra
    int compare_order = 0;        // M used by the numeric tier
    int samples = 0;              // S used by the numeric tier
    std::uint64_t seed = 0;       // generator seed for reproduction
    double max_residual = 0.0;    // worst normalized residual observed
    std::complex<double> witness{0, 0}; // Refuted: concrete counterexample
    double witness_residual = 0.0;      // Refuted: |f(Phi(w))-f(w)|/(1+|f(w)|)

    bool verified() const {
        return status == VerifyStatus::VerifiedExact ||
               status == VerifyStatus::VerifiedNumeric;
    }
};

// Order n of the zero of f(z) - f(z0) at z0. Throws OrderOne when n = 1
// (z0 is not a critical point) and propagates AllCoefficientsVanish when
// the function is constant to depth N.
int zero_order_at(const ExprPtr& f, std::complex<double> z0, int order = 64,
                  double tol = 1e-9);

// The n-1 candidate maps at z0: angle 2k/n reduced, b = z0 (1 - e^{2 pi i k/n}).
// Every candidate fixes z0 by construction.
std::vector<AffineMap> candidates(std::complex<double> z0, int n);

VerificationReport verify(const ExprPtr& f, const AffineMap& phi,
                          const VerificationPolicy& policy = {});

// Full record of one anchor: the zero order and every candidate's report.
struct PointScan {
    std::complex<double> anchor;
    int order; // n from zero_order_at
    std::vector<VerificationReport> reports;
};

PointScan scan_point(const ExprPtr& f, std::complex<double> z0,
                     const VerificationPolicy& policy = {});

// zero_order_at, candidates, verify on each; returns every verified map
// (not only the first). An empty result is the "no such automorphic
// function exists" outcome.
std::vector<std::pair<AffineMap, VerificationReport>> find_symmetries_at(
    const ExprPtr& f, std::complex<double> z0,
    const VerificationPolicy& policy = {});

// Checks that the multiplier at the fixed point is one of the n-th roots
// of unity e^{2 pi i k / n}; returns (n, k). Throws NoMatchingRoot when no
// k fits, which flags a violation of the derivative law.
struct DerivativeCheck {
    int order;   // n
    int root_k;  // k with multiplier = e^{2 pi i k / n}
};

DerivativeCheck fixed_point_derivative_check(const ExprPtr& f,
                                             const AffineMap& phi,
                                             int order = 64,
                                             double tol = 1e-9);

struct GroupClosure {
    std::vector<AffineMap> elements;
    bool truncated = false; // cap hit (translations generate infinite groups)
};

GroupClosure group_closure(const std::vector<AffineMap>& generators,
                           int cap = 256);

struct OrbitReport {
    std::complex<double> base;
    std::vector<std::complex<double>> points; // pairwise distinct
    std::vector<AffineMap> generators;
    int depth;
    double min_pairwise_distance; // +infinity for fewer than two points
};

// Breadth-first application of generators and their inverses up to depth
// compositions, deduplicated at 1e-10.
OrbitReport orbit(std::complex<double> base,
                  const std::vector<AffineMap>& generators, int depth);

// Runs verify on f and on f'. When both verify, the map must be a
// translation; a verified non-translation raises PropositionViolation.
struct IntersectionReport {
    VerificationReport on_f;
    VerificationReport on_derivative;
    bool both_verified = false;
};

IntersectionReport check_intersection_translation(
    const ExprPtr& f, const AffineMap& phi,
    const VerificationPolicy& policy = {});

// Verification of a user-supplied translation z + b (period discovery is
// out of scope).
VerificationReport check_translation(const ExprPtr& f, std::complex<double> b,
                                     const VerificationPolicy& policy = {});

} // namespace autf
