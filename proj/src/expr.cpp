#include "autf/expr.hpp"

#include "autf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace autf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr std::size_t kMaxPolyDegree = 1u << 16;

bool finite(std::complex<double> v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

std::complex<double> powi(std::complex<double> base, unsigned e) {
    std::complex<double> r(1, 0);
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

GaussianRational powi(GaussianRational base, unsigned e) {
    GaussianRational r = GaussianRational::from_int(1);
    while (e) {
        if (e & 1u) r = r * base;
        base = base * base;
        e >>= 1u;
    }
    return r;
}

const Constant* as_constant(const ExprPtr& e) {
    return std::get_if<Constant>(&e->node);
}

// Constants may be folded through arithmetic; "pi" stays symbolic.
bool foldable(const ExprPtr& e) {
    const auto* c = as_constant(e);
    return c && !c->symbolic_pi;
}

ExprPtr wrap(Expr e) { return std::make_shared<Expr>(std::move(e)); }

ExprPtr constant_node(std::complex<double> v,
                      std::optional<GaussianRational> exact) {
    return wrap(Expr{Constant{v, std::move(exact), false}});
}

} // namespace

const char* primitive_name(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::Exp: return "exp";
        case PrimitiveKind::Sin: return "sin";
        case PrimitiveKind::Cos: return "cos";
        case PrimitiveKind::Sinh: return "sinh";
        case PrimitiveKind::Cosh: return "cosh";
    }
    return "?";
}

ExprPtr make_constant(std::complex<double> value) {
    return constant_node(value, GaussianRational::from_complex(value));
}

ExprPtr make_constant(GaussianRational exact) {
    std::complex<double> v = exact.to_complex();
    return constant_node(v, std::move(exact));
}

ExprPtr make_pi() {
    return wrap(Expr{Constant{{kPi, 0.0}, std::nullopt, true}});
}

ExprPtr make_variable() { return wrap(Expr{Variable{}}); }

ExprPtr make_sum(std::vector<ExprPtr> terms) {
    if (terms.empty()) throw Error("Sum requires at least one term");
    std::erase_if(terms, [](const ExprPtr& t) {
        const auto* c = as_constant(t);
        return c && !c->symbolic_pi && c->value == std::complex<double>(0, 0);
    });
    if (terms.empty()) return make_constant(GaussianRational::from_int(0));
    if (terms.size() == 1) return terms.front();
    if (std::all_of(terms.begin(), terms.end(), foldable)) {
        std::complex<double> v(0, 0);
        std::optional<GaussianRational> ex = GaussianRational::from_int(0);
        for (const auto& t : terms) {
            const auto* c = as_constant(t);
            v += c->value;
            if (ex && c->exact)
                ex = *ex + *c->exact;
            else
                ex.reset();
        }
        return constant_node(v, std::move(ex));
    }
    return wrap(Expr{Sum{std::move(terms)}});
}

ExprPtr make_product(std::vector<ExprPtr> factors) {
    if (factors.empty()) throw Error("Product requires at least one factor");
    for (const auto& f : factors) {
        const auto* c = as_constant(f);
        if (c && !c->symbolic_pi && c->value == std::complex<double>(0, 0))
            return make_constant(GaussianRational::from_int(0));
    }
    std::erase_if(factors, [](const ExprPtr& f) {
        const auto* c = as_constant(f);
        return c && !c->symbolic_pi && c->value == std::complex<double>(1, 0);
    });
    if (factors.empty()) return make_constant(GaussianRational::from_int(1));
    // Merge adjacent runs of foldable constants so that forms like
    // "1/3*i" collapse to the single constant they denote.
    std::vector<ExprPtr> merged;
    for (auto& f : factors) {
        if (!merged.empty() && foldable(merged.back()) && foldable(f)) {
            const auto* a = as_constant(merged.back());
            const auto* b = as_constant(f);
            std::optional<GaussianRational> ex;
            if (a->exact && b->exact) ex = *a->exact * *b->exact;
            std::complex<double> v =
                ex ? ex->to_complex() : a->value * b->value;
            merged.back() = constant_node(v, std::move(ex));
        } else {
            merged.push_back(std::move(f));
        }
    }
    if (merged.size() == 1) return merged.front();
    return wrap(Expr{Product{std::move(merged)}});
}

ExprPtr make_power(ExprPtr base, unsigned exponent) {
    if (exponent == 0) return make_constant(GaussianRational::from_int(1));
    if (exponent == 1) return base;
    if (foldable(base)) {
        const auto* c = as_constant(base);
        if (c->exact) return make_constant(powi(*c->exact, exponent));
        return constant_node(powi(c->value, exponent), std::nullopt);
    }
    return wrap(Expr{IntegerPower{std::move(base), exponent}});
}

ExprPtr make_negate(ExprPtr arg) {
    if (foldable(arg)) {
        const auto* c = as_constant(arg);
        std::optional<GaussianRational> ex;
        if (c->exact) ex = -*c->exact;
        return constant_node(-c->value, std::move(ex));
    }
    if (const auto* n = std::get_if<Negate>(&arg->node)) return n->arg;
    return wrap(Expr{Negate{std::move(arg)}});
}

ExprPtr make_primitive(PrimitiveKind kind, ExprPtr arg) {
    return wrap(Expr{Primitive{kind, std::move(arg)}});
}

bool is_constant_expr(const ExprPtr& f) {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) return true;
            if constexpr (std::is_same_v<T, Variable>) return false;
            if constexpr (std::is_same_v<T, Sum>) {
                for (const auto& t : n.terms)
                    if (!is_constant_expr(t)) return false;
                return true;
            }
            if constexpr (std::is_same_v<T, Product>) {
                for (const auto& t : n.factors)
                    if (!is_constant_expr(t)) return false;
                return true;
            }
            if constexpr (std::is_same_v<T, IntegerPower>)
                return is_constant_expr(n.base);
            if constexpr (std::is_same_v<T, Negate>)
                return is_constant_expr(n.arg);
            if constexpr (std::is_same_v<T, Primitive>)
                return is_constant_expr(n.arg);
        },
        f->node);
}

namespace {

// Exact value of a constant subtree, when every leaf admits one.
std::optional<GaussianRational> exact_fold(const ExprPtr& f) {
    return std::visit(
        [](const auto& n) -> std::optional<GaussianRational> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) return n.exact;
            if constexpr (std::is_same_v<T, Variable>) return std::nullopt;
            if constexpr (std::is_same_v<T, Sum>) {
                GaussianRational acc = GaussianRational::from_int(0);
                for (const auto& t : n.terms) {
                    auto v = exact_fold(t);
                    if (!v) return std::nullopt;
                    acc = acc + *v;
                }
                return acc;
            }
            if constexpr (std::is_same_v<T, Product>) {
                GaussianRational acc = GaussianRational::from_int(1);
                for (const auto& t : n.factors) {
                    auto v = exact_fold(t);
                    if (!v) return std::nullopt;
                    acc = acc * *v;
                }
                return acc;
            }
            if constexpr (std::is_same_v<T, IntegerPower>) {
                auto v = exact_fold(n.base);
                if (!v) return std::nullopt;
                return powi(*v, n.exponent);
            }
            if constexpr (std::is_same_v<T, Negate>) {
                auto v = exact_fold(n.arg);
                if (!v) return std::nullopt;
                return -*v;
            }
            if constexpr (std::is_same_v<T, Primitive>) return std::nullopt;
        },
        f->node);
}

// ---------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------

struct Token {
    enum class Kind {
        Number,
        Ident,
        Plus,
        Minus,
        Star,
        Slash,
        Caret,
        LParen,
        RParen,
        End
    };
    Kind kind;
    std::size_t pos;
    std::string text;
    BigRational value; // Number only
    bool is_integer = false;
};

class Parser {
public:
    explicit Parser(std::string text) : text_(std::move(text)) { advance(); }

    ExprPtr run() {
        ExprPtr e = parse_expr();
        if (tok_.kind != Token::Kind::End)
            fail("an operator or end of input");
        return e;
    }

private:
    std::string text_;
    std::size_t i_ = 0;
    Token tok_;

    [[noreturn]] void fail(const std::string& expected) {
        std::string found = tok_.kind == Token::Kind::End
                                ? "end of input"
                                : "'" + tok_.text + "'";
        throw SyntaxError(tok_.pos, expected, found);
    }

    void advance() { tok_ = lex(); }

    Token lex() {
        while (i_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[i_])))
            ++i_;
        std::size_t start = i_;
        if (i_ >= text_.size()) return {Token::Kind::End, start, "", {}, false};
        char c = text_[i_];
        auto single = [&](Token::Kind k) -> Token {
            ++i_;
            return {k, start, std::string(1, c), {}, false};
        };
        switch (c) {
            case '+': return single(Token::Kind::Plus);
            case '-': return single(Token::Kind::Minus);
            case '*': return single(Token::Kind::Star);
            case '/': return single(Token::Kind::Slash);
            case '^': return single(Token::Kind::Caret);
            case '(': return single(Token::Kind::LParen);
            case ')': return single(Token::Kind::RParen);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (i_ < text_.size() &&
                   std::isalpha(static_cast<unsigned char>(text_[i_])))
                ++i_;
            return {Token::Kind::Ident, start, text_.substr(start, i_ - start),
                    {}, false};
        }
        throw SyntaxError(start, "a token", "'" + std::string(1, c) + "'");
    }

    Token lex_number() {
        std::size_t start = i_;
        boost::multiprecision::cpp_int mantissa = 0;
        bool integral = true;
        long frac_digits = 0;
        while (i_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[i_]))) {
            mantissa = mantissa * 10 + (text_[i_] - '0');
            ++i_;
        }
        if (i_ < text_.size() && text_[i_] == '.') {
            ++i_;
            if (i_ >= text_.size() ||
                !std::isdigit(static_cast<unsigned char>(text_[i_])))
                throw SyntaxError(i_, "a digit after the decimal point",
                                  i_ < text_.size()
                                      ? "'" + std::string(1, text_[i_]) + "'"
                                      : "end of input");
            while (i_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[i_]))) {
                mantissa = mantissa * 10 + (text_[i_] - '0');
                ++frac_digits;
                ++i_;
            }
        }
        long exponent = 0;
        if (i_ < text_.size() && (text_[i_] == 'e' || text_[i_] == 'E')) {
            std::size_t save = i_;
            ++i_;
            bool neg = false;
            if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) {
                neg = text_[i_] == '-';
                ++i_;
            }
            if (i_ < text_.size() &&
                std::isdigit(static_cast<unsigned char>(text_[i_]))) {
                while (i_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[i_]))) {
                    exponent = exponent * 10 + (text_[i_] - '0');
                    if (exponent > 10000)
                        throw OverflowError("numeric exponent too large");
                    ++i_;
                }
                if (neg) exponent = -exponent;
            } else {
                i_ = save; // "e" belongs to a following identifier
            }
        }
        boost::multiprecision::cpp_int num = mantissa;
        boost::multiprecision::cpp_int den = 1;
        long net = exponent - frac_digits;
        for (long k = 0; k < (net < 0 ? -net : net); ++k) {
            if (net > 0)
                num *= 10;
            else
                den *= 10;
        }
        BigRational value(num, den);
        integral = net >= 0 || boost::multiprecision::denominator(value) == 1;
        return {Token::Kind::Number, start, text_.substr(start, i_ - start),
                value, integral};
    }

    ExprPtr parse_expr() {
        std::vector<ExprPtr> terms;
        terms.push_back(parse_term());
        while (tok_.kind == Token::Kind::Plus ||
               tok_.kind == Token::Kind::Minus) {
            bool minus = tok_.kind == Token::Kind::Minus;
            advance();
            ExprPtr t = parse_term();
            terms.push_back(minus ? make_negate(std::move(t)) : std::move(t));
        }
        return terms.size() == 1 ? terms.front() : make_sum(std::move(terms));
    }

    ExprPtr parse_term() {
        std::vector<ExprPtr> factors;
        factors.push_back(parse_factor());
        while (tok_.kind == Token::Kind::Star ||
               tok_.kind == Token::Kind::Slash) {
            bool divide = tok_.kind == Token::Kind::Slash;
            std::size_t op_pos = tok_.pos;
            advance();
            ExprPtr f = parse_factor();
            if (divide)
                factors.push_back(reciprocal_of(std::move(f), op_pos));
            else
                factors.push_back(std::move(f));
        }
        return factors.size() == 1 ? factors.front()
                                   : make_product(std::move(factors));
    }

    ExprPtr reciprocal_of(ExprPtr divisor, std::size_t op_pos) {
        if (!is_constant_expr(divisor))
            throw NotEntireError(
                "division by a non-constant expression at position " +
                std::to_string(op_pos) + " is not entire");
        auto ex = exact_fold(divisor);
        if (ex) {
            if (ex->is_zero())
                throw NotEntireError("division by zero at position " +
                                     std::to_string(op_pos));
            GaussianRational r = ex->reciprocal();
            std::complex<double> v = r.to_complex();
            return constant_node(v, std::move(r));
        }
        std::complex<double> v = evaluate(divisor, {0, 0});
        if (v == std::complex<double>(0, 0))
            throw NotEntireError("division by zero at position " +
                                 std::to_string(op_pos));
        return constant_node(1.0 / v, std::nullopt);
    }

    ExprPtr parse_factor() {
        ExprPtr a = parse_atom();
        if (tok_.kind != Token::Kind::Caret) return a;
        advance();
        if (tok_.kind == Token::Kind::Minus)
            throw NotEntireError(
                "negative exponent at position " + std::to_string(tok_.pos) +
                ": z^-k has a pole and is not entire");
        if (tok_.kind != Token::Kind::Number)
            fail("a non-negative integer exponent");
        if (!tok_.is_integer)
            throw NotEntireError("fractional power at position " +
                                 std::to_string(tok_.pos) + " is not entire");
        if (tok_.value > 65535)
            throw OverflowError("exponent " + tok_.text + " too large");
        auto e = tok_.value.convert_to<unsigned>();
        advance();
        return make_power(std::move(a), e);
    }

    ExprPtr parse_atom() {
        switch (tok_.kind) {
            case Token::Kind::Number: {
                GaussianRational g(tok_.value, BigRational(0));
                advance();
                return make_constant(std::move(g));
            }
            case Token::Kind::Minus: {
                advance();
                return make_negate(parse_atom());
            }
            case Token::Kind::LParen: {
                advance();
                ExprPtr e = parse_expr();
                if (tok_.kind != Token::Kind::RParen) fail("')'");
                advance();
                return e;
            }
            case Token::Kind::Ident: return parse_ident();
            default: fail("a number, 'z', 'i', 'pi', a function, or '('");
        }
    }

    ExprPtr parse_ident() {
        const std::string name = tok_.text;
        std::size_t pos = tok_.pos;
        advance();
        if (name == "z") return make_variable();
        if (name == "i") return make_constant(GaussianRational::unit_i());
        if (name == "pi") return make_pi();
        PrimitiveKind kind;
        if (name == "exp")
            kind = PrimitiveKind::Exp;
        else if (name == "sin")
            kind = PrimitiveKind::Sin;
        else if (name == "cos")
            kind = PrimitiveKind::Cos;
        else if (name == "sinh")
            kind = PrimitiveKind::Sinh;
        else if (name == "cosh")
            kind = PrimitiveKind::Cosh;
        else if (name == "log" || name == "ln")
            throw NotEntireError("'" + name + "' at position " +
                                 std::to_string(pos) +
                                 " has a branch point and is not entire");
        else if (name == "sqrt")
            throw NotEntireError(
                "'sqrt' at position " + std::to_string(pos) +
                " is a fractional power and is not entire");
        else if (name == "tan" || name == "cot" || name == "sec" ||
                 name == "csc" || name == "tanh" || name == "coth")
            throw NotEntireError("'" + name + "' at position " +
                                 std::to_string(pos) +
                                 " has poles and is not entire");
        else
            throw SyntaxError(pos, "'z', 'i', 'pi', or a function name",
                              "'" + name + "'");
        if (tok_.kind != Token::Kind::LParen) fail("'('");
        advance();
        ExprPtr arg = parse_expr();
        if (tok_.kind != Token::Kind::RParen) fail("')'");
        advance();
        return make_primitive(kind, std::move(arg));
    }
};

// ---------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------

std::string fmt_double(double d) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

std::string fmt_big_rational(const BigRational& r) {
    std::string s = boost::multiprecision::numerator(r).str();
    if (boost::multiprecision::denominator(r) != 1)
        s += "/" + boost::multiprecision::denominator(r).str();
    return s;
}

std::string fmt_constant(const Constant& c) {
    if (c.symbolic_pi) return "pi";
    if (c.exact) {
        const auto& re = c.exact->re;
        const auto& im = c.exact->im;
        if (im == 0) return fmt_big_rational(re);
        std::string im_part;
        if (im == 1)
            im_part = "i";
        else if (im == -1)
            im_part = "-i";
        else
            im_part = fmt_big_rational(im) + "*i";
        if (re == 0) return im_part;
        std::string s = "(" + fmt_big_rational(re);
        if (im_part[0] == '-')
            s += " - " + im_part.substr(1);
        else
            s += " + " + im_part;
        return s + ")";
    }
    double re = c.value.real(), im = c.value.imag();
    if (im == 0) return fmt_double(re);
    std::string im_part = fmt_double(im) + "*i";
    if (re == 0) return im_part;
    std::string s = "(" + fmt_double(re);
    if (im_part[0] == '-')
        s += " - " + im_part.substr(1);
    else
        s += " + " + im_part;
    return s + ")";
}

void fmt_expr(const ExprPtr& e, std::string& out);
void fmt_factor_or_term(const ExprPtr& e, std::string& out);

// Factor-level rendering: Sum and Product need parentheses.
void fmt_factor(const ExprPtr& e, std::string& out) {
    if (std::holds_alternative<Sum>(e->node) ||
        std::holds_alternative<Product>(e->node)) {
        out += "(";
        fmt_expr(e, out);
        out += ")";
    } else {
        fmt_expr(e, out);
    }
}

void fmt_expr(const ExprPtr& e, std::string& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                out += fmt_constant(n);
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += "z";
            } else if constexpr (std::is_same_v<T, Sum>) {
                for (std::size_t k = 0; k < n.terms.size(); ++k) {
                    const ExprPtr& t = n.terms[k];
                    if (k == 0) {
                        fmt_factor_or_term(t, out);
                        continue;
                    }
                    if (const auto* neg = std::get_if<Negate>(&t->node)) {
                        out += " - ";
                        fmt_factor_or_term(neg->arg, out);
                        continue;
                    }
                    if (const auto* c = std::get_if<Constant>(&t->node)) {
                        std::string s = fmt_constant(*c);
                        if (s[0] == '-') {
                            out += " - " + s.substr(1);
                            continue;
                        }
                    }
                    out += " + ";
                    fmt_factor_or_term(t, out);
                }
            } else if constexpr (std::is_same_v<T, Product>) {
                for (std::size_t k = 0; k < n.factors.size(); ++k) {
                    if (k) out += "*";
                    fmt_factor(n.factors[k], out);
                }
            } else if constexpr (std::is_same_v<T, IntegerPower>) {
                const ExprPtr& b = n.base;
                if (std::holds_alternative<Variable>(b->node) ||
                    std::holds_alternative<Primitive>(b->node)) {
                    fmt_expr(b, out);
                } else if (const auto* neg = std::get_if<Negate>(&b->node)) {
                    // '^' binds after unary minus: -z^2 parses as (-z)^2.
                    out += "-";
                    fmt_factor(neg->arg, out);
                } else if (const auto* c = std::get_if<Constant>(&b->node)) {
                    std::string s = fmt_constant(*c);
                    if (s[0] == '-' || s.find('/') != std::string::npos) {
                        out += "(" + s + ")";
                    } else {
                        out += s;
                    }
                } else {
                    out += "(";
                    fmt_expr(b, out);
                    out += ")";
                }
                out += "^" + std::to_string(n.exponent);
            } else if constexpr (std::is_same_v<T, Negate>) {
                const ExprPtr& a = n.arg;
                if (std::holds_alternative<Sum>(a->node) ||
                    std::holds_alternative<Product>(a->node) ||
                    std::holds_alternative<IntegerPower>(a->node)) {
                    out += "-(";
                    fmt_expr(a, out);
                    out += ")";
                } else {
                    out += "-";
                    fmt_expr(a, out);
                }
            } else if constexpr (std::is_same_v<T, Primitive>) {
                out += primitive_name(n.kind);
                out += "(";
                fmt_expr(n.arg, out);
                out += ")";
            }
        },
        e->node);
}

// Term position inside a Sum: nested Sums need parentheses.
void fmt_factor_or_term(const ExprPtr& e, std::string& out) {
    if (std::holds_alternative<Sum>(e->node)) {
        out += "(";
        fmt_expr(e, out);
        out += ")";
    } else {
        fmt_expr(e, out);
    }
}
} // namespace

ExprPtr parse(const std::string& text) { return Parser(text).run(); }

std::string format(const ExprPtr& f) {
    std::string out;
    fmt_expr(f, out);
    return out;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, Constant>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, Sum>) {
                if (x.terms.size() != y.terms.size()) return false;
                for (std::size_t k = 0; k < x.terms.size(); ++k)
                    if (!structurally_equal(x.terms[k], y.terms[k]))
                        return false;
                return true;
            } else if constexpr (std::is_same_v<T, Product>) {
                if (x.factors.size() != y.factors.size()) return false;
                for (std::size_t k = 0; k < x.factors.size(); ++k)
                    if (!structurally_equal(x.factors[k], y.factors[k]))
                        return false;
                return true;
            } else if constexpr (std::is_same_v<T, IntegerPower>) {
                return x.exponent == y.exponent &&
                       structurally_equal(x.base, y.base);
            } else if constexpr (std::is_same_v<T, Negate>) {
                return structurally_equal(x.arg, y.arg);
            } else if constexpr (std::is_same_v<T, Primitive>) {
                return x.kind == y.kind && structurally_equal(x.arg, y.arg);
            }
        },
        a->node);
}

std::complex<double> evaluate(const ExprPtr& f, std::complex<double> z) {
    std::complex<double> v = std::visit(
        [&](const auto& n) -> std::complex<double> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) return n.value;
            if constexpr (std::is_same_v<T, Variable>) return z;
            if constexpr (std::is_same_v<T, Sum>) {
                std::complex<double> acc(0, 0);
                for (const auto& t : n.terms) acc += evaluate(t, z);
                return acc;
            }
            if constexpr (std::is_same_v<T, Product>) {
                std::complex<double> acc(1, 0);
                for (const auto& t : n.factors) acc *= evaluate(t, z);
                return acc;
            }
            if constexpr (std::is_same_v<T, IntegerPower>)
                return powi(evaluate(n.base, z), n.exponent);
            if constexpr (std::is_same_v<T, Negate>)
                return -evaluate(n.arg, z);
            if constexpr (std::is_same_v<T, Primitive>) {
                std::complex<double> a = evaluate(n.arg, z);
                switch (n.kind) {
                    case PrimitiveKind::Exp: return std::exp(a);
                    case PrimitiveKind::Sin: return std::sin(a);
                    case PrimitiveKind::Cos: return std::cos(a);
                    case PrimitiveKind::Sinh: return std::sinh(a);
                    case PrimitiveKind::Cosh: return std::cosh(a);
                }
                return {0, 0};
            }
        },
        f->node);
    if (!finite(v))
        throw OverflowError("evaluation overflowed at z = (" +
                            fmt_double(z.real()) + ", " + fmt_double(z.imag()) +
                            ")");
    return v;
}

ExprPtr differentiate(const ExprPtr& f) {
    return std::visit(
        [&](const auto& n) -> ExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>)
                return make_constant(GaussianRational::from_int(0));
            if constexpr (std::is_same_v<T, Variable>)
                return make_constant(GaussianRational::from_int(1));
            if constexpr (std::is_same_v<T, Sum>) {
                std::vector<ExprPtr> terms;
                terms.reserve(n.terms.size());
                for (const auto& t : n.terms)
                    terms.push_back(differentiate(t));
                return make_sum(std::move(terms));
            }
            if constexpr (std::is_same_v<T, Product>) {
                // Leibniz over the whole factor list.
                std::vector<ExprPtr> terms;
                for (std::size_t k = 0; k < n.factors.size(); ++k) {
                    std::vector<ExprPtr> factors = n.factors;
                    factors[k] = differentiate(n.factors[k]);
                    terms.push_back(make_product(std::move(factors)));
                }
                return make_sum(std::move(terms));
            }
            if constexpr (std::is_same_v<T, IntegerPower>) {
                if (n.exponent == 0)
                    return make_constant(GaussianRational::from_int(0));
                std::vector<ExprPtr> factors;
                factors.push_back(make_constant(
                    GaussianRational::from_int(n.exponent)));
                factors.push_back(make_power(n.base, n.exponent - 1));
                factors.push_back(differentiate(n.base));
                return make_product(std::move(factors));
            }
            if constexpr (std::is_same_v<T, Negate>)
                return make_negate(differentiate(n.arg));
            if constexpr (std::is_same_v<T, Primitive>) {
                ExprPtr outer;
                switch (n.kind) {
                    case PrimitiveKind::Exp:
                        outer = make_primitive(PrimitiveKind::Exp, n.arg);
                        break;
                    case PrimitiveKind::Sin:
                        outer = make_primitive(PrimitiveKind::Cos, n.arg);
                        break;
                    case PrimitiveKind::Cos:
                        outer = make_negate(
                            make_primitive(PrimitiveKind::Sin, n.arg));
                        break;
                    case PrimitiveKind::Sinh:
                        outer = make_primitive(PrimitiveKind::Cosh, n.arg);
                        break;
                    case PrimitiveKind::Cosh:
                        outer = make_primitive(PrimitiveKind::Sinh, n.arg);
                        break;
                }
                return make_product({std::move(outer), differentiate(n.arg)});
            }
        },
        f->node);
}

// ---------------------------------------------------------------------
// Polynomial extraction
// ---------------------------------------------------------------------

namespace {

struct PolyAcc {
    std::vector<std::complex<double>> num;
    std::optional<std::vector<GaussianRational>> ex;
};

PolyAcc poly_add(PolyAcc a, const PolyAcc& b) {
    if (a.num.size() < b.num.size()) a.num.resize(b.num.size(), {0, 0});
    for (std::size_t k = 0; k < b.num.size(); ++k) a.num[k] += b.num[k];
    if (a.ex && b.ex) {
        if (a.ex->size() < b.ex->size())
            a.ex->resize(b.ex->size(), GaussianRational::from_int(0));
        for (std::size_t k = 0; k < b.ex->size(); ++k)
            (*a.ex)[k] = (*a.ex)[k] + (*b.ex)[k];
    } else {
        a.ex.reset();
    }
    return a;
}

PolyAcc poly_mul(const PolyAcc& a, const PolyAcc& b) {
    std::size_t n = a.num.size() + b.num.size() - 1;
    if (n > kMaxPolyDegree)
        throw OverflowError("polynomial degree exceeds " +
                            std::to_string(kMaxPolyDegree));
    PolyAcc r;
    r.num.assign(n, {0, 0});
    for (std::size_t j = 0; j < a.num.size(); ++j)
        for (std::size_t k = 0; k < b.num.size(); ++k)
            r.num[j + k] += a.num[j] * b.num[k];
    if (a.ex && b.ex) {
        r.ex.emplace(n, GaussianRational::from_int(0));
        for (std::size_t j = 0; j < a.ex->size(); ++j)
            for (std::size_t k = 0; k < b.ex->size(); ++k)
                (*r.ex)[j + k] = (*r.ex)[j + k] + (*a.ex)[j] * (*b.ex)[k];
    }
    return r;
}

PolyAcc poly_pow(PolyAcc base, unsigned e) {
    PolyAcc r;
    r.num = {{1, 0}};
    r.ex = std::vector<GaussianRational>{GaussianRational::from_int(1)};
    if (!base.ex) r.ex.reset();
    while (e) {
        if (e & 1u) r = poly_mul(r, base);
        e >>= 1u;
        if (e) base = poly_mul(base, base);
    }
    return r;
}

std::optional<PolyAcc> poly_of(const ExprPtr& f) {
    return std::visit(
        [&](const auto& n) -> std::optional<PolyAcc> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                PolyAcc r;
                r.num = {n.value};
                if (n.exact) r.ex = std::vector<GaussianRational>{*n.exact};
                return r;
            }
            if constexpr (std::is_same_v<T, Variable>) {
                PolyAcc r;
                r.num = {{0, 0}, {1, 0}};
                r.ex = std::vector<GaussianRational>{
                    GaussianRational::from_int(0),
                    GaussianRational::from_int(1)};
                return r;
            }
            if constexpr (std::is_same_v<T, Sum>) {
                std::optional<PolyAcc> acc;
                for (const auto& t : n.terms) {
                    auto p = poly_of(t);
                    if (!p) return std::nullopt;
                    acc = acc ? poly_add(std::move(*acc), *p) : std::move(*p);
                }
                return acc;
            }
            if constexpr (std::is_same_v<T, Product>) {
                std::optional<PolyAcc> acc;
                for (const auto& t : n.factors) {
                    auto p = poly_of(t);
                    if (!p) return std::nullopt;
                    acc = acc ? poly_mul(*acc, *p) : std::move(*p);
                }
                return acc;
            }
            if constexpr (std::is_same_v<T, IntegerPower>) {
                auto p = poly_of(n.base);
                if (!p) return std::nullopt;
                if (static_cast<std::size_t>(n.exponent) *
                        (p->num.size() - 1) >
                    kMaxPolyDegree)
                    throw OverflowError("polynomial degree exceeds " +
                                        std::to_string(kMaxPolyDegree));
                return poly_pow(std::move(*p), n.exponent);
            }
            if constexpr (std::is_same_v<T, Negate>) {
                auto p = poly_of(n.arg);
                if (!p) return std::nullopt;
                for (auto& c : p->num) c = -c;
                if (p->ex)
                    for (auto& c : *p->ex) c = -c;
                return p;
            }
            if constexpr (std::is_same_v<T, Primitive>) return std::nullopt;
        },
        f->node);
}

} // namespace

std::complex<double> PolyForm::horner(std::complex<double> z) const {
    std::complex<double> acc(0, 0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

PolyForm PolyForm::derivative() const {
    PolyForm d;
    if (coeffs.size() <= 1) {
        d.coeffs = {{0, 0}};
        if (exact)
            d.exact = std::vector<GaussianRational>{
                GaussianRational::from_int(0)};
        return d;
    }
    d.coeffs.resize(coeffs.size() - 1);
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        d.coeffs[k - 1] = static_cast<double>(k) * coeffs[k];
    if (exact) {
        d.exact.emplace();
        d.exact->resize(exact->size() - 1);
        for (std::size_t k = 1; k < exact->size(); ++k)
            (*d.exact)[k - 1] =
                GaussianRational::from_int(static_cast<long long>(k)) *
                (*exact)[k];
    }
    return d;
}

std::optional<PolyForm> to_polynomial(const ExprPtr& f) {
    auto p = poly_of(f);
    if (!p) return std::nullopt;
    PolyForm out;
    if (p->ex) {
        // Exact coefficients are authoritative; regenerate the doubles from
        // them so cancellation cannot leave numeric dust above exact zeros.
        while (p->ex->size() > 1 && p->ex->back().is_zero()) p->ex->pop_back();
        out.coeffs.resize(p->ex->size());
        for (std::size_t k = 0; k < p->ex->size(); ++k)
            out.coeffs[k] = (*p->ex)[k].to_complex();
        out.exact = std::move(*p->ex);
    } else {
        while (p->num.size() > 1 &&
               p->num.back() == std::complex<double>(0, 0))
            p->num.pop_back();
        out.coeffs = std::move(p->num);
    }
    for (const auto& c : out.coeffs)
        if (!finite(c)) throw OverflowError("polynomial coefficient overflow");
    return out;
}

} // namespace autf
