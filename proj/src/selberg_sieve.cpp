// selberg_sieve.cpp

#include "ktuple/selberg_sieve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ktuple/error.hpp"
#include "ktuple/number_theory.hpp"
#include "ktuple/singular_series.hpp"

namespace ktuple {
namespace {

using u64 = std::uint64_t;

struct SievePrime {
    u64 p;
    std::size_t nu;
};

std::vector<SievePrime> sieve_primes(u64 z, const Tuple& tuple) {
    std::vector<SievePrime> out;
    if (z < 3) return out;
    for (u64 p : primes_up_to(z - 1)) out.push_back({p, tuple.residue_count(p)});
    return out;
}

void require_z(u64 z) {
    if (z < 2) throw DomainError("sieve level z must be at least 2");
}

double factorial(std::size_t k) {
    return std::tgamma(static_cast<double>(k) + 1.0);
}

// Depth-first over squarefree d = p_{i1} p_{i2} ... < z with increasing primes.
void accumulate_G(const std::vector<SievePrime>& primes, std::size_t start, u64 d, long double g,
                  u64 z, long double& total) {
    for (std::size_t i = start; i < primes.size(); ++i) {
        const auto [p, nu] = primes[i];
        if (d > (z - 1) / p) break;
        if (nu == p || nu == 0) continue;
        const long double gp = g * static_cast<long double>(nu) / static_cast<long double>(p - nu);
        total += gp;
        accumulate_G(primes, i + 1, d * p, gp, z, total);
    }
}

}  // namespace

double g_value(std::uint64_t d, const Tuple& tuple) {
    if (d == 0) throw DomainError("g_value: d must be positive");
    long double g = 1.0L;
    for (u64 p : prime_factors(d)) {
        if ((d / p) % p == 0) throw DomainError("g_value: d must be squarefree");
        const auto nu = tuple.residue_count(p);
        if (nu == p) {
            throw InadmissibleError("g_value: nu(" + std::to_string(p) + ") = " + std::to_string(p));
        }
        g *= static_cast<long double>(nu) / static_cast<long double>(p - nu);
    }
    return static_cast<double>(g);
}

GValue big_G(std::uint64_t z, const Tuple& tuple) {
    require_z(z);
    const auto primes = sieve_primes(z, tuple);
    GValue out;
    for (const auto& sp : primes) out.skipped_primes += sp.nu == sp.p;
    long double total = 1.0L;
    accumulate_G(primes, 0, 1, 1.0L, z, total);
    out.value = static_cast<double>(total);
    return out;
}

WValue big_W(std::uint64_t z, const Tuple& tuple) {
    require_z(z);
    WValue out;
    long double w = 1.0L;
    for (const auto& [p, nu] : sieve_primes(z, tuple)) {
        if (nu == p) {
            out.vanishing_prime = p;
            out.value = 0.0;
            return out;
        }
        w *= 1.0L - static_cast<long double>(nu) / static_cast<long double>(p);
    }
    out.value = static_cast<double>(w);
    return out;
}

double sieve_upper_bound(const Tuple& tuple, std::uint64_t x, std::uint64_t z) {
    const auto w = big_W(z, tuple);
    if (w.vanishing_prime) {
        throw InadmissibleError("sieve_upper_bound: W(z) = 0 at p = " +
                                std::to_string(*w.vanishing_prime));
    }
    const double zd = static_cast<double>(z);
    return static_cast<double>(x) / big_G(z, tuple).value + zd * zd / std::pow(w.value, 3);
}

TheoremBound theorem_bound(const Tuple& tuple, std::uint64_t x, double epsilon) {
    if (x < 16) throw DomainError("theorem_bound: x must be at least 16");
    if (!(epsilon > 0.0)) throw DomainError("theorem_bound: epsilon must be positive");
    const auto k = tuple.size();
    const double xd = static_cast<double>(x);
    const double log_x = std::log(xd);
    TheoremBound out;
    out.z = static_cast<u64>(std::floor(std::pow(xd, 1.0 / (2.0 + epsilon))));
    const double kd = static_cast<double>(k);
    out.correction = (std::log(std::log(3.0 * xd)) + kd * kd * kd +
                      omega_constants(tuple).L_estimate) /
                     log_x;
    const auto s = singular_series(tuple, 1e-12);
    out.inadmissible = s.value == 0.0;
    out.bound = std::pow(2.0 + epsilon, kd) * factorial(k) * s.value * xd / std::pow(log_x, kd);
    return out;
}

OmegaConstants omega_constants(const Tuple& tuple) {
    OmegaConstants out;
    out.alpha1 = tuple.size() + 1;
    out.L_estimate =
        static_cast<double>(tuple.size()) * std::log(std::log(3.0) + tuple.log_discriminant());
    return out;
}

double omega2_deviation(const Tuple& tuple, std::uint64_t w, std::uint64_t z) {
    if (w < 2 || z < w) throw DomainError("omega2_deviation: needs 2 <= w <= z");
    long double sum = 0.0L;
    for (const auto& [p, nu] : sieve_primes(z, tuple)) {
        if (p < w) continue;
        sum += static_cast<long double>(nu) * std::log(static_cast<long double>(p)) /
               static_cast<long double>(p);
    }
    const double kd = static_cast<double>(tuple.size());
    return static_cast<double>(sum) -
           kd * std::log(static_cast<double>(z) / static_cast<double>(w));
}

double gamma_cross_check(const Tuple& tuple, std::uint64_t z) {
    const auto w = big_W(z, tuple);
    if (w.vanishing_prime) {
        throw InadmissibleError("gamma_cross_check: W(z) = 0 at p = " +
                                std::to_string(*w.vanishing_prime));
    }
    const auto k = tuple.size();
    return 1.0 / (big_G(z, tuple).value * w.value *
                  std::exp(kEulerGamma * static_cast<double>(k)) * factorial(k));
}

namespace {

SieveReport build_report(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x,
                         std::uint64_t z, double epsilon) {
    SieveReport r;
    r.tuple = tuple;
    r.x = x;
    r.z = z;
    r.epsilon = epsilon;
    const auto g = big_G(z, tuple);
    const auto w = big_W(z, tuple);
    r.G_z = g.value;
    r.W_z = w.value;
    r.skipped_primes = g.skipped_primes;
    const double zd = static_cast<double>(z);
    r.raw_bound = w.vanishing_prime ? std::numeric_limits<double>::infinity()
                                    : static_cast<double>(x) / g.value + zd * zd / std::pow(w.value, 3);
    const auto tb = theorem_bound(tuple, x, epsilon > 0.0 ? epsilon : 0.1);
    r.theorem_bound = tb.bound;
    r.correction = tb.correction;
    const u64 min_h = tuple.empty() ? 0 : tuple.min();
    for (u64 n : tuple_hits(table, tuple, x)) {
        ++r.actual;
        r.actual_above_z += n + min_h > z;
    }
    r.ratio_actual_over_bound = tb.bound > 0.0 ? static_cast<double>(r.actual) / tb.bound
                                               : std::numeric_limits<double>::infinity();
    r.ratio_raw = static_cast<double>(r.actual_above_z) / r.raw_bound;
    r.omega = omega_constants(tuple);
    return r;
}

}  // namespace

SieveReport sieve_report(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x,
                         double epsilon) {
    const auto tb = theorem_bound(tuple, x, epsilon);
    return build_report(table, tuple, x, std::max<u64>(tb.z, 2), epsilon);
}

SieveReport sieve_report_at(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x,
                            std::uint64_t z) {
    require_z(z);
    return build_report(table, tuple, x, z, 0.0);
}

}  // namespace ktuple
