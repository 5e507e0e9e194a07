#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <numeric>
#include <string>

namespace autf {

using BigRational = boost::multiprecision::cpp_rational;

// Exact element of Q(i). Doubles embed losslessly (every finite double is a
// dyadic rational), so any complex<double> has an exact image here.
struct GaussianRational {
    BigRational re;
    BigRational im;

    GaussianRational() = default;
    GaussianRational(BigRational re, BigRational im)
        : re(std::move(re)), im(std::move(im)) {}

    static GaussianRational from_int(long long n) {
        return {BigRational(n), BigRational(0)};
    }

    static GaussianRational from_ratio(long long p, long long q) {
        return {BigRational(p) / BigRational(q), BigRational(0)};
    }

    static GaussianRational from_complex(std::complex<double> z) {
        return {BigRational(z.real()), BigRational(z.imag())};
    }

    static GaussianRational unit_i() {
        return {BigRational(0), BigRational(1)};
    }

    std::complex<double> to_complex() const {
        return {re.convert_to<double>(), im.convert_to<double>()};
    }

    bool is_zero() const { return re == 0 && im == 0; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational operator+(const GaussianRational& o) const {
        return {re + o.re, im + o.im};
    }

    GaussianRational operator-(const GaussianRational& o) const {
        return {re - o.re, im - o.im};
    }

    GaussianRational operator*(const GaussianRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }

    // 1/(a+bi) = (a-bi)/(a^2+b^2); caller guarantees nonzero.
    GaussianRational reciprocal() const {
        BigRational n = re * re + im * im;
        return {re / n, -im / n};
    }

    GaussianRational operator/(const GaussianRational& o) const {
        return *this * o.reciprocal();
    }

    bool operator==(const GaussianRational& o) const {
        return re == o.re && im == o.im;
    }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }
};

// Reduced rational p/q with the angle theta = p/q taken modulo 2, so that
// the multiplier e^{i pi theta} is well defined. Always 0 <= p/q < 2, q >= 1.
class RationalAngle {
public:
    RationalAngle() : p_(0), q_(1) {}

    RationalAngle(long long p, long long q);

    long long p() const { return p_; }
    long long q() const { return q_; }

    bool is_zero() const { return p_ == 0; }

    // e^{i pi p/q}; exact for quarter turns, std::polar otherwise.
    std::complex<double> unit_multiplier() const;

    // Quarter-turn multipliers {1,-1,i,-i} admit exact arithmetic.
    bool is_gaussian() const { return q_ == 1 || q_ == 2; }
    GaussianRational exact_multiplier() const;

    RationalAngle operator+(const RationalAngle& o) const {
        return RationalAngle(p_ * o.q_ + o.p_ * q_, q_ * o.q_);
    }
    RationalAngle operator-() const { return RationalAngle(-p_, q_); }

    bool operator==(const RationalAngle& o) const {
        return p_ == o.p_ && q_ == o.q_;
    }
    bool operator!=(const RationalAngle& o) const { return !(*this == o); }

    // "p/q"
    std::string str() const;

private:
    long long p_;
    long long q_;
};

} // namespace autf
