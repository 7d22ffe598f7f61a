// error.hpp
// Exception types shared by every module. Each maps onto one error class
// named in the module contracts so callers (and the CLI exit codes) can tell
// a bad argument from a resource limit.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ktuple {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A stated precondition (beyond plain domain membership) does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// limit <= base in a sieve request.
class InvalidRangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A PrimalityTable does not reach far enough for the requested computation.
class CoverageError : public std::out_of_range {
public:
    CoverageError(const std::string& what, std::uint64_t required_limit)
        : std::out_of_range(what + " (table must cover up to " +
                            std::to_string(required_limit) + ")"),
          required_limit_(required_limit) {}

    std::uint64_t required_limit() const noexcept { return required_limit_; }

private:
    std::uint64_t required_limit_;
};

/// A computation would exceed its configured memory or work budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sieve modulus p with nu_H(p) = p, i.e. every residue class is hit.
class InadmissibleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A binary cache file that is truncated or does not carry the PKT1 layout.
class CacheFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ktuple
