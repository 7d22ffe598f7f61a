// singular_series.hpp
// Hardy-Littlewood singular series S(H) = prod_p (1 - nu_H(p)/p) / (1 - 1/p)^k,
// evaluated with a rigorous absolute error radius.
//
// Evaluation strategy. For p > k the factor depends on H only through
// nu_H(p), and nu_H(p) = k unless p divides some difference h_j - h_i. So
//
//   log S(H) = sum_{p <= k} log f(p, nu_p)                  (direct)
//            + sum_{p | D_H, p > k} [log f(p, nu_p) - log f(p, k)]
//            + sum_{k < p <= P} log f(p, k)                  (cached per (k, P))
//            + sum_{p > P} log f(p, k)                       (analytic remainder)
//
// with f(p, nu) = (1 - nu/p)/(1 - 1/p)^k. The remainder expands as
// sum_{m >= 2} (k - k^m)/m * sum_{p > P} p^-m; its m = 2 term is evaluated
// through the prime zeta value P(2) and the m >= 3 terms are bounded by
// k^3 / (6 P^2 (1 - k/P)). Primes dividing D_H above P are still handled
// exactly by the correction sum.

#pragma once

#include <cstdint>

#include "ktuple/tuple.hpp"

namespace ktuple {

struct SingularSeriesValue {
    double value = 0.0;
    double error_radius = 0.0;  ///< absolute
    /// Truncation P of the cached generic product: every prime <= P, and every
    /// prime dividing D_H, enters exactly. 0 when no truncation was needed
    /// (k <= 1); the vanishing prime when the value is exactly 0.
    std::uint64_t prime_limit = 0;
};

struct SingularSeriesOptions {
    /// Largest truncation singular_series may choose before giving up with a
    /// ResourceError.
    std::uint64_t max_prime_limit = std::uint64_t{1} << 32;
};

/// nu_H(p). Throws DomainError when p is not prime.
std::size_t residue_classes(const Tuple& tuple, std::uint64_t p);

/// (1 - nu/p)/(1 - 1/p)^k; exactly 0 when nu = p. Evaluated in log space for
/// p > k. Throws DomainError for nu > p, nu > k, nu = 0 < k or composite p.
double local_factor(std::uint64_t p, std::size_t nu, std::size_t k);

/// Upper bound on |sum_{p > P} log(1 + a(p, k))| from |a(p, k)| <= 2k^2/(p-1)^2
/// (valid for p > 2k^2) and |log(1+t)| <= 2|t|: the bound is 4k^2/(P-1), and 0
/// for k <= 1. Throws PreconditionError when P < 2k^2 or P < 2.
double tail_log_bound(std::size_t k, std::uint64_t prime_limit);

/// Estimate and radius for sum_{p > P} log f(p, k), as used by the evaluator.
struct TailRemainder {
    double estimate = 0.0;
    double radius = 0.0;
};
/// Same preconditions as tail_log_bound. |estimate| + radius never exceeds
/// tail_log_bound(k, P).
TailRemainder tail_log_remainder(std::size_t k, std::uint64_t prime_limit);

/// S(H) to within target_error. Throws DomainError for target_error <= 0 and
/// ResourceError when the required truncation exceeds options.max_prime_limit.
SingularSeriesValue singular_series(const Tuple& tuple, double target_error,
                                    const SingularSeriesOptions& options = {});

/// S(H) with the generic product truncated at exactly prime_limit. Throws
/// PreconditionError when prime_limit < max(2k^2, k + 1) for k >= 2.
SingularSeriesValue singular_series_at(const Tuple& tuple, std::uint64_t prime_limit);

/// nu_H(p) < p for every prime p <= k.
bool is_admissible(const Tuple& tuple);

/// prod_{p <= limit} (1 - 1/p)^{-k}.
double inverse_euler_product(std::size_t k, std::uint64_t limit);

/// Prime-splitting upper bound for S(H), k >= 2:
///   prod_{p <= k^3} (1-1/p)^{-k} * prod_{p > k^3} f(p, k)
///   * C(k,2)^{-1} sum_{i<j} exp(2 C(k,2) sum_{p | h_j - h_i, p > k^3} 1/p).
/// The exponent per prime uses (k - nu_H(p))/(p - k) <= 2 #{i<j : p | h_j - h_i}/p.
/// The tail product is rounded up by its remainder radius so the result stays
/// an upper bound. Throws DomainError for k < 2.
double jensen_split_bound(const Tuple& tuple);

}  // namespace ktuple
