#pragma once

/// Exception hierarchy for the paralattice library.
///
/// Every failure mode exposed by the public API is a named exception type so
/// callers (and the CLI report layer) can distinguish conditions without
/// string-matching. All types derive from paralattice::Error, which derives
/// from std::runtime_error.

#include <stdexcept>
#include <string>
#include <vector>

namespace paralattice {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A matrix required to be invertible is singular (|det| below the
/// scale-aware threshold 1e-12 * max|entry|^d).
class SingularError : public Error {
public:
    explicit SingularError(const std::string& msg) : Error(msg) {}
};

/// An iterative solver exceeded its iteration cap.
class NonConvergenceError : public Error {
public:
    explicit NonConvergenceError(const std::string& msg) : Error(msg) {}
};

/// Two distinct index vectors rounded to the same integer point, i.e. the
/// lattice spacing is below 1 in some direction. Carries both indices.
class DuplicateAfterRoundingError : public Error {
public:
    DuplicateAfterRoundingError(std::vector<long long> first,
                                std::vector<long long> second,
                                const std::string& msg)
        : Error(msg), index_a(std::move(first)), index_b(std::move(second)) {}
    std::vector<long long> index_a;
    std::vector<long long> index_b;
};

/// Beatty step parameter outside (0, 1].
class BadAlphaError : public Error {
public:
    explicit BadAlphaError(const std::string& msg) : Error(msg) {}
};

/// Matrix fails the structural precondition of a construction
/// (lower triangular with diagonals in (0,1]).
class BadStructureError : public Error {
public:
    explicit BadStructureError(const std::string& msg) : Error(msg) {}
};

/// A diagonal entry of a rectangular construction lies outside (0, 1].
class BadDiagonalError : public Error {
public:
    explicit BadDiagonalError(const std::string& msg) : Error(msg) {}
};

/// Spectral norm at or above the admissibility threshold 2ln2/(pi d^{3/2}).
/// Carries the measured norm and the threshold.
class NormTooLargeError : public Error {
public:
    NormTooLargeError(double measured_, double threshold_, const std::string& msg)
        : Error(msg), measured(measured_), threshold(threshold_) {}
    double measured;
    double threshold;
};

/// Window not aligned to whole blocks of length P in the mean-perturbation
/// condition check.
class IncompleteBlockError : public Error {
public:
    explicit IncompleteBlockError(const std::string& msg) : Error(msg) {}
};

/// Parameter outside the validity range of a bound formula.
class OutOfRangeError : public Error {
public:
    explicit OutOfRangeError(const std::string& msg) : Error(msg) {}
};

/// Point set exceeds the dense Gram size cap.
class TooLargeError : public Error {
public:
    explicit TooLargeError(const std::string& msg) : Error(msg) {}
};

/// Malformed or inconsistent run configuration. Carries the JSON field path.
class ConfigError : public Error {
public:
    ConfigError(std::string path_, const std::string& msg)
        : Error(path_.empty() ? msg : path_ + ": " + msg), path(std::move(path_)) {}
    std::string path;
};

/// I/O failure (file open/write).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace paralattice
