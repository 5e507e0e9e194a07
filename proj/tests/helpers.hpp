#pragma once

#include "autf/expr.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace testutil {

using cplx = std::complex<double>;

// Deterministic generator for property tests (splitmix64).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t x = (state_ += 0x9e3779b97f4a7c15ull);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    cplx in_disk(cplx center, double radius) {
        double r = radius * std::sqrt(unit());
        double a = 6.283185307179586476925286766559 * unit();
        return center + std::polar(r, a);
    }

private:
    std::uint64_t state_;
};

inline bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

// Expressions touching every node kind; shared across the suites.
inline const std::vector<std::string>& corpus() {
    static const std::vector<std::string> exprs = {
        "z^2 + 1",
        "z^3",
        "z^4 + z^2",
        "(z+1)^2",
        "exp(z)",
        "cos(z)",
        "sin(z)",
        "exp(z)*sin(z)",
        "sinh(z) + cosh(z)",
        "z^5 - i*z^2 + 2",
        "cos(2*z) + z^2",
        "exp(z^2)",
        "2*pi*z^3",
        "z/2 + 1/3",
        "-z^5 + (1+i)*z^2",
    };
    return exprs;
}

// Central finite difference along the real direction; the independent
// oracle for derivative checks on entire functions.
inline cplx central_diff(const autf::ExprPtr& f, cplx z, double h) {
    return (autf::evaluate(f, z + h) - autf::evaluate(f, z - h)) / (2.0 * h);
}

// Test-side substitution of the variable by another expression; used to
// build f(lambda*z + b) as an AST independently of compose_affine.
inline autf::ExprPtr substitute(const autf::ExprPtr& f,
                                const autf::ExprPtr& replacement) {
    using namespace autf;
    return std::visit(
        [&](const auto& n) -> ExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>)
                return std::make_shared<Expr>(Expr{n});
            else if constexpr (std::is_same_v<T, Variable>)
                return replacement;
            else if constexpr (std::is_same_v<T, Sum>) {
                std::vector<ExprPtr> out;
                for (const auto& t : n.terms)
                    out.push_back(substitute(t, replacement));
                return make_sum(std::move(out));
            } else if constexpr (std::is_same_v<T, Product>) {
                std::vector<ExprPtr> out;
                for (const auto& t : n.factors)
                    out.push_back(substitute(t, replacement));
                return make_product(std::move(out));
            } else if constexpr (std::is_same_v<T, IntegerPower>)
                return make_power(substitute(n.base, replacement), n.exponent);
            else if constexpr (std::is_same_v<T, Negate>)
                return make_negate(substitute(n.arg, replacement));
            else
                return make_primitive(n.kind, substitute(n.arg, replacement));
        },
        f->node);
}

// AST for lambda*z + b.
inline autf::ExprPtr affine_expr(cplx lambda, cplx b) {
    using namespace autf;
    return make_sum({make_product({make_constant(lambda), make_variable()}),
                     make_constant(b)});
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

inline std::string cli_path() {
#ifdef AUTF_CLI_PATH
    return AUTF_CLI_PATH;
#else
    return "./autf";
#endif
}

// Run the CLI and capture stdout; stderr is left alone.
inline RunResult run_cli(const std::string& args) {
    RunResult result;
    std::string cmd = cli_path() + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return result;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0)
        result.output.append(buf, got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

} // namespace testutil
