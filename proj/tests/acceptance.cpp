// Acceptance suite: one test case per criterion, each printing a
// single PASS/FAIL line so a run reads as a checklist.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "autf/errors.hpp"
#include "autf/roots.hpp"
#include "autf/series.hpp"
#include "autf/symmetry.hpp"

#include "helpers.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

using namespace autf;
using json = nlohmann::json;
using testutil::close;
using testutil::cplx;
using testutil::run_cli;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kSqrt2 = 1.4142135623730951;

class Criterion {
public:
    Criterion(int number, std::string label)
        : number_(number), label_(std::move(label)) {}

    void expect(bool condition, const std::string& what) {
        if (!condition) failures_.push_back(what);
    }

    ~Criterion() {
        std::cout << "[acceptance] criterion " << number_ << " (" << label_
                  << "): " << (failures_.empty() ? "PASS" : "FAIL")
                  << std::endl;
        for (const auto& f : failures_)
            std::cout << "             - " << f << std::endl;
        CHECK_MESSAGE(failures_.empty(),
                      "criterion " << number_ << " failed");
    }

private:
    int number_;
    std::string label_;
    std::vector<std::string> failures_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// All corpus functions whose verified generators feed criteria 5-7.
struct CorpusEntry {
    std::string text;
    cplx anchor;
};

std::vector<CorpusEntry> symmetry_corpus() {
    std::vector<CorpusEntry> out;
    for (int n = 2; n <= 8; ++n)
        out.push_back({"z^" + std::to_string(n), {0, 0}});
    out.push_back({"z^4 + z^2", {0, 0}});
    out.push_back({"cos(z)", {kPi, 0}});
    return out;
}

} // namespace

TEST_CASE("criterion 1: monomial family") {
    Criterion c(1, "monomial family z^n, n = 2..8");
    for (int n = 2; n <= 8; ++n) {
        auto start = std::chrono::steady_clock::now();
        auto run = run_cli("symmetries --f \"z^" + std::to_string(n) + "\"");
        double elapsed = seconds_since(start);
        c.expect(run.exit_code == 0, "n=" + std::to_string(n) + " exit code");
        c.expect(elapsed <= 1.0,
                 "n=" + std::to_string(n) + " runtime " + fmt(elapsed) + "s");
        json d = json::parse(run.output, nullptr, false);
        if (d.is_discarded()) {
            c.expect(false, "n=" + std::to_string(n) + " bad JSON");
            continue;
        }
        c.expect(d["verified"].size() == static_cast<std::size_t>(n - 1),
                 "n=" + std::to_string(n) + " verified count " +
                     std::to_string(d["verified"].size()));
        std::set<std::string> want, got;
        for (int k = 1; k < n; ++k)
            want.insert(RationalAngle(2 * k, n).str());
        for (const auto& v : d["verified"]) {
            got.insert(v["theta"].get<std::string>());
            double bmag = std::hypot(v["b"]["re"].get<double>(),
                                     v["b"]["im"].get<double>());
            c.expect(bmag <= 1e-10,
                     "n=" + std::to_string(n) + " |b| = " + fmt(bmag));
        }
        c.expect(want == got, "n=" + std::to_string(n) + " angle set");
        for (const auto& a : d["anchors"])
            for (const auto& r : a["candidates"]) {
                std::string status = r["status"].get<std::string>();
                c.expect(status == "VerifiedExact" ||
                             status == "VerifiedNumeric",
                         "n=" + std::to_string(n) + " status " + status);
                if (n == 2 || n == 4)
                    c.expect(status == "VerifiedExact",
                             "n=" + std::to_string(n) +
                                 " should be Gaussian-exact, got " + status);
                c.expect(r["max_residual"].get<double>() <= 1e-10,
                         "n=" + std::to_string(n) + " residual " +
                             fmt(r["max_residual"].get<double>()));
            }
        c.expect(d["closure"]["order"].get<int>() == n,
                 "n=" + std::to_string(n) + " closure order " +
                     std::to_string(d["closure"]["order"].get<int>()));
    }
}

TEST_CASE("criterion 2: refutation at i/sqrt2") {
    Criterion c(2, "negative branch for z^4 + z^2");
    // Independent symbolic-expansion oracle for f(-z + i sqrt2).
    auto p = to_polynomial(parse("z^4 + z^2"));
    cplx shift(0, kSqrt2);
    std::vector<cplx> composed{p->coeffs.back()};
    for (int j = static_cast<int>(p->coeffs.size()) - 2; j >= 0; --j) {
        std::vector<cplx> next(composed.size() + 1);
        for (std::size_t k = 0; k < composed.size(); ++k) {
            next[k + 1] += -composed[k];
            next[k] += shift * composed[k];
        }
        next[0] += p->coeffs[j];
        composed = std::move(next);
    }
    c.expect(close(composed[3], {0, -4 * kSqrt2}, 1e-12) &&
                 close(composed[2], {-11, 0}, 1e-12) &&
                 close(composed[1], {0, 6 * kSqrt2}, 1e-12) &&
                 close(composed[0], {2, 0}, 1e-12),
             "oracle expansion z^4 - 4sqrt2 i z^3 - 11 z^2 + 6 sqrt2 i z + 2");
    bool differs = false;
    for (std::size_t k = 0; k < composed.size(); ++k)
        if (std::abs(composed[k] - p->coeffs[k]) > 1e-9) differs = true;
    c.expect(differs, "oracle says the coefficients differ");

    auto start = std::chrono::steady_clock::now();
    auto run = run_cli(
        "symmetries --f \"z^4+z^2\" --at \"0.7071067811865476i\"");
    double elapsed = seconds_since(start);
    c.expect(elapsed <= 1.0, "runtime " + fmt(elapsed) + "s");
    c.expect(run.exit_code == 0, "exit code");
    json d = json::parse(run.output, nullptr, false);
    if (!d.is_discarded()) {
        c.expect(d["verified"].empty(), "no verified maps");
        c.expect(d["message"] ==
                     "no entire automorphic function related to this point",
                 "step-3 message");
        const auto& cand = d["anchors"][0]["candidates"][0];
        c.expect(cand["status"] == "Refuted", "candidate refuted");
        c.expect(cand["exact_tier"].get<bool>(), "refuted by the exact tier");
        c.expect(cand["map"]["theta"] == "1/1", "candidate is a half turn");
    } else {
        c.expect(false, "bad JSON");
    }
}

TEST_CASE("criterion 3: even-function case") {
    Criterion c(3, "z^4 + z^2 at the origin");
    auto start = std::chrono::steady_clock::now();
    auto found = find_symmetries_at(parse("z^4 + z^2"), {0, 0});
    double elapsed = seconds_since(start);
    c.expect(elapsed <= 1.0, "runtime " + fmt(elapsed) + "s");
    c.expect(found.size() == 1, "exactly one verified map");
    if (!found.empty()) {
        c.expect(found[0].first.angle == RationalAngle(1, 1), "theta = 1/1");
        c.expect(std::abs(found[0].first.b) == 0.0, "b = 0");
        c.expect(found[0].second.status == VerifyStatus::VerifiedExact,
                 "VerifiedExact");
    }
}

TEST_CASE("criterion 4: transcendental case") {
    Criterion c(4, "cos z at pi");
    VerificationPolicy policy; // defaults: N = 64, M = 32, S = 32
    auto start = std::chrono::steady_clock::now();
    auto scan = scan_point(parse("cos(z)"), {kPi, 0}, policy);
    double elapsed = seconds_since(start);
    c.expect(elapsed <= 2.0, "runtime " + fmt(elapsed) + "s");
    c.expect(scan.order == 2, "zero order n = 2");
    c.expect(scan.reports.size() == 1, "one candidate");
    if (!scan.reports.empty()) {
        const auto& r = scan.reports[0];
        c.expect(r.status == VerifyStatus::VerifiedNumeric, "VerifiedNumeric");
        c.expect(close(r.map.b, {2 * kPi, 0}, 1e-12), "b = 2 pi");
        c.expect(r.max_residual <= 1e-10,
                 "max residual " + fmt(r.max_residual));
        c.expect(r.compare_order == 32 && r.samples == 32,
                 "default policy M = 32, S = 32 recorded");
    }
}

TEST_CASE("criterion 5: fixed-point derivative theorem") {
    Criterion c(5, "multiplier is an n-th root of unity, and the "
                   "differentiated identity holds");
    testutil::Rng rng(505);
    for (const auto& entry : symmetry_corpus()) {
        ExprPtr f = parse(entry.text);
        ExprPtr df = differentiate(f);
        auto found = find_symmetries_at(f, entry.anchor);
        c.expect(!found.empty(), entry.text + ": no verified maps");
        for (const auto& [m, r] : found) {
            try {
                auto check = fixed_point_derivative_check(f, m);
                cplx expected =
                    RationalAngle(2 * check.root_k, check.order)
                        .unit_multiplier();
                c.expect(std::abs(m.multiplier() - expected) <= 1e-10,
                         entry.text + ": multiplier mismatch");
            } catch (const Error& e) {
                c.expect(false, entry.text + ": " + e.what());
            }
            for (int k = 0; k < 50; ++k) {
                cplx z = rng.in_disk(entry.anchor, 2.0);
                cplx lhs = m.multiplier() * evaluate(df, m.apply(z));
                cplx rhs = evaluate(df, z);
                if (std::abs(lhs - rhs) > 1e-8 * (1.0 + std::abs(rhs))) {
                    c.expect(false, entry.text + ": derivative identity at " +
                                        fmt(z.real()) + "+" + fmt(z.imag()) +
                                        "i");
                    break;
                }
            }
        }
    }
}

TEST_CASE("criterion 6: intersection proposition") {
    Criterion c(6, "Aut(f) n Aut(f') contains only translations");
    auto a = check_intersection_translation(parse("z^2"),
                                            AffineMap{RationalAngle(1, 1)});
    c.expect(a.on_f.verified(), "(z^2, -z): f verifies");
    c.expect(a.on_derivative.status == VerifyStatus::Refuted,
             "(z^2, -z): f' refutes");

    auto b = check_intersection_translation(
        parse("exp(z)"), AffineMap{RationalAngle(0, 1), {0, 2 * kPi}});
    c.expect(b.on_f.verified() && b.on_derivative.verified(),
             "(exp, z + 2 pi i): both verify");
    c.expect(b.both_verified, "(exp, z + 2 pi i): recorded as translation");

    for (const auto& entry : symmetry_corpus()) {
        ExprPtr f = parse(entry.text);
        for (const auto& [m, r] : find_symmetries_at(f, entry.anchor)) {
            try {
                check_intersection_translation(f, m);
            } catch (const PropositionViolation& e) {
                c.expect(false, entry.text + ": proposition violation fired");
            }
        }
    }
}

TEST_CASE("criterion 7: orbit discreteness") {
    Criterion c(7, "orbits stay discrete at desk scale");
    testutil::Rng rng(707);
    for (const auto& entry : symmetry_corpus()) {
        ExprPtr f = parse(entry.text);
        std::vector<AffineMap> generators;
        for (const auto& [m, r] : find_symmetries_at(f, entry.anchor))
            generators.push_back(m);
        for (int trial = 0; trial < 10; ++trial) {
            auto report = orbit(rng.in_disk({0, 0}, 3.0), generators, 6);
            if (report.points.size() >= 2 &&
                report.min_pairwise_distance <= 1e-6) {
                c.expect(false, entry.text + ": min distance " +
                                    fmt(report.min_pairwise_distance));
                break;
            }
        }
    }
    // exp with its period as the supplied translation generator.
    std::vector<AffineMap> exp_gens{
        AffineMap{RationalAngle(0, 1), {0, 2 * kPi}}};
    for (int trial = 0; trial < 10; ++trial) {
        auto report = orbit(rng.in_disk({0, 0}, 3.0), exp_gens, 6);
        c.expect(report.min_pairwise_distance > 1e-6,
                 "exp orbit min distance");
    }
    auto cube = orbit({1, 0}, {AffineMap{RationalAngle(2, 3)}}, 6);
    c.expect(std::abs(cube.min_pairwise_distance - std::sqrt(3.0)) <= 1e-9,
             "z^3 orbit from 1 has min distance sqrt(3), got " +
                 fmt(cube.min_pairwise_distance));
}

TEST_CASE("criterion 8: candidate arithmetic") {
    Criterion c(8, "200 random (z0, n) candidate checks");
    testutil::Rng rng(808);
    for (int trial = 0; trial < 200; ++trial) {
        cplx z0 = rng.in_disk({0, 0}, 2.0);
        int n = 2 + static_cast<int>(rng.next() % 11);
        auto maps = candidates(z0, n);
        if (static_cast<int>(maps.size()) != n - 1) {
            c.expect(false, "count != n-1");
            break;
        }
        for (const auto& m : maps) {
            if (std::abs(m.apply(z0) - z0) > 1e-12) {
                c.expect(false, "candidate does not fix z0");
                break;
            }
            if (n % m.angle.q() != 0) {
                c.expect(false, "denominator does not divide n");
                break;
            }
            if ((m.angle.p() * n) % (2 * m.angle.q()) != 0) {
                c.expect(false, "exact multiplier order does not divide n");
                break;
            }
            cplx power(1, 0);
            for (int j = 0; j < n; ++j) power *= m.multiplier();
            if (std::abs(power - cplx(1, 0)) > 1e-12) {
                c.expect(false, "lambda^n != 1 numerically");
                break;
            }
        }
    }
}

TEST_CASE("criterion 9: series engine") {
    Criterion c(9, "compose_affine vs direct expansion; truncation halving");
    testutil::Rng rng(909);
    for (int trial = 0; trial < 100; ++trial) {
        int degree = 1 + static_cast<int>(rng.next() % 8);
        std::vector<ExprPtr> terms;
        for (int d = 0; d <= degree; ++d)
            terms.push_back(
                make_product({make_constant(rng.in_disk({0, 0}, 1.0)),
                              make_power(make_variable(), d)}));
        ExprPtr f = make_sum(std::move(terms));
        cplx lambda = std::polar(1.0, rng.range(0, 2 * kPi));
        cplx b = rng.in_disk({0, 0}, 0.5);
        cplx z0 = rng.in_disk({0, 0}, 0.5);
        TaylorSeries composed =
            compose_affine(expand(f, lambda * z0 + b, 10), lambda, b, z0);
        TaylorSeries direct =
            expand(testutil::substitute(f, testutil::affine_expr(lambda, b)),
                   z0, 10);
        double mag = 0.0;
        for (const auto& v : direct.coeffs) mag = std::max(mag, std::abs(v));
        for (std::size_t j = 0; j < composed.coeffs.size(); ++j)
            if (std::abs(composed.coeffs[j] - direct.coeffs[j]) >
                1e-10 * (1.0 + mag)) {
                c.expect(false, "coefficient mismatch in trial " +
                                    std::to_string(trial));
                break;
            }
    }
    const int order = 6;
    for (const char* text : {"exp(z)", "sin(z)", "cos(z)"}) {
        ExprPtr f = parse(text);
        TaylorSeries s = expand(f, {0.3, 0}, order);
        cplx z1 = cplx(0.3, 0) + 0.8;
        cplx z2 = cplx(0.3, 0) + 0.4;
        double e1 = std::abs(s.eval(z1) - evaluate(f, z1));
        double e2 = std::abs(s.eval(z2) - evaluate(f, z2));
        c.expect(e2 > 0 && e1 / e2 >= std::pow(2.0, order - 1),
                 std::string(text) + ": halving ratio " + fmt(e1 / e2));
    }
}

TEST_CASE("criterion 10: roots") {
    Criterion c(10, "polynomial and transcendental critical points");
    auto start = std::chrono::steady_clock::now();
    auto roots = polynomial_roots(*to_polynomial(parse("4*z^3 + 2*z")));
    c.expect(roots.size() == 3, "root count");
    if (roots.size() == 3) {
        c.expect(close(roots[0], {0, -kInvSqrt2}, 1e-10), "root -i/sqrt2");
        c.expect(close(roots[1], {0, 0}, 1e-10), "root 0");
        c.expect(close(roots[2], {0, kInvSqrt2}, 1e-10), "root +i/sqrt2");
    }
    SearchBox box{{-7, -1}, {7, 1}, 40};
    auto cps = critical_points(parse("cos(z)"), box);
    c.expect(cps.size() == 5, "cos critical point count " +
                                  std::to_string(cps.size()));
    double expected[5] = {-2 * kPi, -kPi, 0, kPi, 2 * kPi};
    for (std::size_t k = 0; k < cps.size() && k < 5; ++k)
        c.expect(close(cps[k].location, {expected[k], 0}, 1e-9),
                 "cos critical point " + std::to_string(k));
    double elapsed = seconds_since(start);
    c.expect(elapsed <= 2.0, "runtime " + fmt(elapsed) + "s");
}

TEST_CASE("criterion 11: determinism") {
    Criterion c(11, "identical flags and seed give identical bytes");
    const char* commands[] = {
        "symmetries --f \"z^5\" --seed 11",
        "symmetries --f \"z^4+z^2\" --at \"0.7071067811865476i\" --seed 3",
        "verify --f \"cos(z)\" --map \"1/1\" --b \"6.283185307179586\"",
        "roots --f \"cos(z)\" --box \"-7,-1,7,1\" --grid 25",
        "orbit --f \"z^3\" --at \"1\" --depth 4",
    };
    for (const char* cmd : commands) {
        auto first = run_cli(cmd);
        auto second = run_cli(cmd);
        c.expect(first.exit_code == 0, std::string(cmd) + ": exit code");
        c.expect(first.output == second.output,
                 std::string(cmd) + ": outputs differ");
    }
}
