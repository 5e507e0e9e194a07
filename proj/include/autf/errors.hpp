#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace autf {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- expression layer ---

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& expected,
                const std::string& found)
        : Error("syntax error at position " + std::to_string(position) +
                ": expected " + expected + ", found " + found),
          position(position), expected(expected), found(found) {}

    std::size_t position;
    std::string expected;
    std::string found;
};

class NotEntireError : public Error {
public:
    explicit NotEntireError(const std::string& what) : Error(what) {}
};

class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error(what) {}
};

// --- series layer ---

class CenterMismatch : public Error {
public:
    explicit CenterMismatch(const std::string& what) : Error(what) {}
};

class OrderMismatch : public Error {
public:
    explicit OrderMismatch(const std::string& what) : Error(what) {}
};

// Raised by zero-order queries when every coefficient is below threshold:
// either the truncation order is too small or the function is locally
// constant to this depth.
class AllCoefficientsVanish : public Error {
public:
    explicit AllCoefficientsVanish(const std::string& what) : Error(what) {}
};

// --- roots layer ---

class NoConvergence : public Error {
public:
    NoConvergence(int iterations, std::vector<std::complex<double>> best)
        : Error("root iteration did not converge after " +
                std::to_string(iterations) + " iterations"),
          iterations(iterations), best_iterates(std::move(best)) {}

    int iterations;
    std::vector<std::complex<double>> best_iterates;
};

class BoxRequired : public Error {
public:
    explicit BoxRequired(const std::string& what) : Error(what) {}
};

// --- symmetry layer ---

// The anchor has zero order 1, i.e. it is not a critical point.
class OrderOne : public Error {
public:
    explicit OrderOne(const std::string& what) : Error(what) {}
};

class NotACriticalPoint : public Error {
public:
    explicit NotACriticalPoint(const std::string& what) : Error(what) {}
};

class TranslationHasNoFixedPoint : public Error {
public:
    explicit TranslationHasNoFixedPoint(const std::string& what) : Error(what) {}
};

class EveryPointFixed : public Error {
public:
    explicit EveryPointFixed(const std::string& what) : Error(what) {}
};

// No k with multiplier e^{2 pi i k / n}: the fixed-point derivative law
// failed, which indicates an unverified map or an implementation bug.
class NoMatchingRoot : public Error {
public:
    explicit NoMatchingRoot(const std::string& what) : Error(what) {}
};

// f and f' share a verified non-translation symmetry; impossible.
class PropositionViolation : public Error {
public:
    explicit PropositionViolation(const std::string& what) : Error(what) {}
};

} // namespace autf
