#include "autf/rational.hpp"

#include "autf/errors.hpp"

#include <cmath>
#include <numeric>

namespace autf {

RationalAngle::RationalAngle(long long p, long long q) {
    if (q == 0) throw Error("rational angle with zero denominator");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    long long g = std::gcd(p < 0 ? -p : p, q);
    if (g > 1) {
        p /= g;
        q /= g;
    }
    // theta mod 2: reduce p into [0, 2q). Shifts by multiples of 2q keep
    // gcd(p, q) = 1.
    long long m = 2 * q;
    p %= m;
    if (p < 0) p += m;
    p_ = p;
    q_ = q;
}

std::complex<double> RationalAngle::unit_multiplier() const {
    if (q_ == 1) return p_ == 0 ? std::complex<double>(1, 0)
                                : std::complex<double>(-1, 0);
    if (q_ == 2) return p_ == 1 ? std::complex<double>(0, 1)
                                : std::complex<double>(0, -1);
    constexpr double pi = 3.141592653589793238462643383279502884;
    return std::polar(1.0, pi * static_cast<double>(p_) / static_cast<double>(q_));
}

GaussianRational RationalAngle::exact_multiplier() const {
    if (q_ == 1)
        return p_ == 0 ? GaussianRational::from_int(1)
                       : GaussianRational::from_int(-1);
    if (q_ == 2)
        return p_ == 1 ? GaussianRational::unit_i()
                       : -GaussianRational::unit_i();
    throw Error("multiplier e^{i pi " + str() + "} is not a Gaussian rational");
}

std::string RationalAngle::str() const {
    return std::to_string(p_) + "/" + std::to_string(q_);
}

} // namespace autf
