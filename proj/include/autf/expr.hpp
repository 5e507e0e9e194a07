#pragma once

#include "autf/rational.hpp"

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace autf {

// AST of a closed-form entire function. The grammar admits only entire
// primitives, so every tree denotes a function holomorphic on all of C:
// no poles or branch cuts can be expressed.
//
// Trees are immutable after construction and shared by pointer; all
// operations on them are pure.

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

enum class PrimitiveKind { Exp, Sin, Cos, Sinh, Cosh };

const char* primitive_name(PrimitiveKind kind);

struct Constant {
    std::complex<double> value;
    // Set iff the value is known exactly as an element of Q(i).
    std::optional<GaussianRational> exact;
    // True for the literal "pi": kept symbolic so it formats back as "pi"
    // and is never mistaken for an exact rational.
    bool symbolic_pi = false;
};

struct Variable {};

struct Sum {
    std::vector<ExprPtr> terms; // non-empty
};

struct Product {
    std::vector<ExprPtr> factors; // non-empty
};

struct IntegerPower {
    ExprPtr base;
    unsigned exponent; // >= 0
};

struct Negate {
    ExprPtr arg;
};

struct Primitive {
    PrimitiveKind kind;
    ExprPtr arg;
};

struct Expr {
    std::variant<Constant, Variable, Sum, Product, IntegerPower, Negate,
                 Primitive>
        node;
};

// Smart constructors. Sum/Product/Negate/IntegerPower over constant
// operands fold to a single Constant (exactness tracked; "pi" blocks
// folding), and trivial algebraic units are dropped so that derivative
// trees stay readable. No general simplification happens anywhere else.
ExprPtr make_constant(std::complex<double> value);
ExprPtr make_constant(GaussianRational exact);
ExprPtr make_pi();
ExprPtr make_variable();
ExprPtr make_sum(std::vector<ExprPtr> terms);
ExprPtr make_product(std::vector<ExprPtr> factors);
ExprPtr make_power(ExprPtr base, unsigned exponent);
ExprPtr make_negate(ExprPtr arg);
ExprPtr make_primitive(PrimitiveKind kind, ExprPtr arg);

// Recursive-descent parser for the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' nonneg_int)?
//   atom   := number | 'i' | 'pi' | 'z' | func '(' expr ')'
//           | '(' expr ')' | '-' atom
//   func   := 'exp'|'sin'|'cos'|'sinh'|'cosh'
// Division is legal only when the divisor subexpression is a nonzero
// constant; it is folded into multiplication by the reciprocal.
// Throws SyntaxError or NotEntireError.
ExprPtr parse(const std::string& text);

// Canonical text form; parse(format(parse(t))) is structurally equal to
// parse(t).
std::string format(const ExprPtr& f);

// Structural comparison on tags and numeric values. Exactness metadata is
// not compared: a decimal literal and the pi-tainted constant with the same
// double value are structurally equal.
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// True when the tree contains no Variable node.
bool is_constant_expr(const ExprPtr& f);

std::complex<double> evaluate(const ExprPtr& f, std::complex<double> z);

ExprPtr differentiate(const ExprPtr& f);

// Dense polynomial with coefficients indexed by degree. The exact
// coefficient list is present iff every literal constant in the source
// expression was a Gaussian rational.
struct PolyForm {
    std::vector<std::complex<double>> coeffs;
    std::optional<std::vector<GaussianRational>> exact;

    bool is_exact() const { return exact.has_value(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    std::complex<double> horner(std::complex<double> z) const;

    // Coefficients of the derivative polynomial.
    PolyForm derivative() const;
};

// Expanded coefficients when f contains no Primitive node, empty otherwise.
std::optional<PolyForm> to_polynomial(const ExprPtr& f);

} // namespace autf
