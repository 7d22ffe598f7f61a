// selberg_sieve.hpp
// Selberg upper-bound sieve for the sequence A = {prod_i (n + h_i) : n <= x},
// sifted by all primes below z.

#pragma once

#include <cstdint>
#include <optional>

#include "ktuple/prime_engine.hpp"
#include "ktuple/tuple.hpp"

namespace ktuple {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// g(d) = prod_{p | d} nu(p) / (p - nu(p)) for squarefree d.
/// DomainError if d is not squarefree, InadmissibleError if nu(p) = p for some p | d.
double g_value(std::uint64_t d, const Tuple& tuple);

struct GValue {
    double value = 0.0;
    std::size_t skipped_primes = 0;  ///< primes p < z with nu(p) = p, left out of the sum
};

/// G(z) = sum over squarefree d < z of g(d). z >= 2.
GValue big_G(std::uint64_t z, const Tuple& tuple);

struct WValue {
    double value = 0.0;
    std::optional<std::uint64_t> vanishing_prime;  ///< smallest p < z with nu(p) = p
};

/// W(z) = prod_{p < z} (1 - nu(p)/p). z >= 2.
WValue big_W(std::uint64_t z, const Tuple& tuple);

/// x / G(z) + z^2 / W(z)^3. InadmissibleError when W(z) = 0.
double sieve_upper_bound(const Tuple& tuple, std::uint64_t x, std::uint64_t z);

struct TheoremBound {
    double bound = 0.0;        ///< (2 + eps)^k k! S(H) x / (log x)^k
    std::uint64_t z = 0;       ///< floor(x^{1/(2 + eps)})
    double correction = 0.0;   ///< (log log 3x + k^3 + k log log 3|D_H|) / log x, not applied
    bool inadmissible = false; ///< bound is 0 and says nothing
};

/// x >= 16, epsilon > 0.
TheoremBound theorem_bound(const Tuple& tuple, std::uint64_t x, double epsilon);

struct OmegaConstants {
    std::size_t alpha1 = 0;   ///< k + 1
    double L_estimate = 0.0;  ///< k log log (3 |D_H|)
};

OmegaConstants omega_constants(const Tuple& tuple);

/// sum_{w <= p < z} nu(p) log p / p - k log(z / w). 2 <= w <= z.
double omega2_deviation(const Tuple& tuple, std::uint64_t w, std::uint64_t z);

/// 1 / (G(z) W(z) e^{gamma k} k!). InadmissibleError when W(z) = 0.
double gamma_cross_check(const Tuple& tuple, std::uint64_t z);

struct SieveReport {
    Tuple tuple;
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    double epsilon = 0.0;     ///< 0 when z was given directly
    double G_z = 0.0;
    double W_z = 0.0;
    std::size_t skipped_primes = 0;
    double raw_bound = 0.0;   ///< x/G(z) + z^2/W(z)^3; infinite if W(z) = 0
    double theorem_bound = 0.0;
    double correction = 0.0;
    std::uint64_t actual = 0;          ///< n <= x with every n + h_i prime
    std::uint64_t actual_above_z = 0;  ///< same, with min(n + h_i) > z
    double ratio_actual_over_bound = 0.0;  ///< actual / theorem_bound
    double ratio_raw = 0.0;                ///< actual_above_z / raw_bound
    OmegaConstants omega;
};

/// z from epsilon: floor(x^{1/(2 + eps)}). Table must cover [1 + min H, x + max H].
SieveReport sieve_report(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x,
                         double epsilon);

/// Fixed z; theorem_bound fields use epsilon = 0.1.
SieveReport sieve_report_at(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x,
                            std::uint64_t z);

}  // namespace ktuple
