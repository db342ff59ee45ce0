#ifndef BREGMAN_ERRORS_HPP
#define BREGMAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bregman {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A point violates the domain of a kernel or objective
/// (e.g. nonpositive coordinate where positivity is required).
class DomainError : public Error {
public:
    using Error::Error;
};

/// D_h(z, z~) = 0 where a strictly positive divergence is required.
/// Callers must treat the step as converged before computing gains.
class DegenerateStepError : public Error {
public:
    using Error::Error;
};

/// The prox or dual-averaging subproblem has no finite minimizer
/// (the linear pull overwhelms the barrier).
class UnboundedSubproblemError : public Error {
public:
    using Error::Error;
};

/// An adaptation inner loop exceeded its trial cap, or a stopping
/// criterion cannot be met at the exponent floor.
class AdaptationError : public Error {
public:
    using Error::Error;
};

/// Unsupported pairing or invalid configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (LibSVM, CSV, instance JSON).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to converge where it provably should.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace bregman

#endif
