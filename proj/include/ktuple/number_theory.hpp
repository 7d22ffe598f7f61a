// number_theory.hpp
// Small integer utilities used across modules: deterministic 64-bit
// primality, distinct prime factorisation and a plain sieve for short
// prime lists.

#pragma once

#include <cstdint>
#include <vector>

namespace ktuple {

/// Deterministic Miller-Rabin over the first twelve prime bases; exact for
/// every 64-bit input.
bool is_prime(std::uint64_t n);

/// Distinct prime divisors of n in increasing order. n = 0 and n = 1 have none.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// All primes p <= limit (odd-only Eratosthenes).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// floor(sqrt(n)) computed exactly.
std::uint64_t isqrt(std::uint64_t n);

/// Binomial coefficient as a double (exact while it fits in 53 bits).
double binomial(std::uint64_t n, std::uint64_t k);

}  // namespace ktuple
