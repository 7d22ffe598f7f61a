// singular_series.cpp

#include "ktuple/singular_series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "ktuple/error.hpp"
#include "ktuple/number_theory.hpp"
#include "ktuple/prime_engine.hpp"

namespace ktuple {
namespace {

using u64 = std::uint64_t;
using real = long double;

constexpr double kEps = std::numeric_limits<double>::epsilon();          // 2^-52
constexpr real kEpsLong = std::numeric_limits<long double>::epsilon();
// Prime zeta P(2) = sum_p p^-2.
constexpr real kPrimeZeta2 = 0.45224742004106549850654336483224793417L;
constexpr u64 kMinPrimeLimit = u64{1} << 12;

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(real v) {
        const real t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
        magnitude_ += std::fabs(v);
    }
    real value() const { return sum_ + comp_; }
    real magnitude() const { return magnitude_; }

private:
    real sum_ = 0;
    real comp_ = 0;
    real magnitude_ = 0;
};

// a(p, k) = f(p, k) - 1 = -sum_{j=2}^{k} C(k, j) (j - 1) t^j, t = 1/(p - 1).
// Every term has the same sign, so there is no cancellation.
real generic_excess(u64 p, std::size_t k) {
    const real t = 1.0L / static_cast<real>(p - 1);
    real term = static_cast<real>(k) * static_cast<real>(k - 1) / 2.0L * t * t;  // j = 2
    real sum = 0;
    for (std::size_t j = 2; j <= k; ++j) {
        sum += term;
        if (term < sum * 1e-22L) break;
        // term_{j+1} / term_j = (k - j)/(j + 1) * j/(j - 1) * t
        term *= static_cast<real>(k - j) / static_cast<real>(j + 1) * static_cast<real>(j) /
                static_cast<real>(j - 1) * t;
    }
    return -sum;
}

// log f(p, nu) for p > k (so nu <= k < p).
real log_factor_large(u64 p, std::size_t nu, std::size_t k) {
    const real pp = static_cast<real>(p);
    if (nu == k && static_cast<real>(k) / pp < 0.25L) return std::log1p(generic_excess(p, k));
    return std::log1p(-static_cast<real>(nu) / pp) +
           static_cast<real>(k) * std::log1p(1.0L / (pp - 1.0L));
}

// Upper bound on |log f| components, used to size rounding error.
real log_factor_scale(u64 p, std::size_t nu, std::size_t k) {
    const real pp = static_cast<real>(p);
    return static_cast<real>(nu) / (pp - static_cast<real>(nu)) +
           static_cast<real>(k) / (pp - 1.0L);
}

// f(p, nu) for any admissible (p, nu, k), long double.
real factor_value(u64 p, std::size_t nu, std::size_t k) {
    if (nu == p) return 0;
    const real pp = static_cast<real>(p);
    if (p <= k) {
        return (pp - static_cast<real>(nu)) / pp * std::pow(pp / (pp - 1.0L), static_cast<real>(k));
    }
    if (nu == k && static_cast<real>(k) / pp < 0.25L) return 1.0L + generic_excess(p, k);
    return std::exp(log_factor_large(p, nu, k));
}

struct GenericSum {
    real log_sum = 0;      // sum_{k < p <= P} log f(p, k)
    real error = 0;        // absolute bound on the rounding in log_sum
};

struct PrimeSquareSum {
    real tail = 0;         // sum_{p > P} p^-2
    real error = 0;
};

// Initialise-once cache: lookups lock briefly to find the slot; the slot's
// once_flag serialises the computation so no reader sees a partial entry.
template <class Key, class Value>
class OnceCache {
public:
    template <class Compute>
    const Value& get(const Key& key, Compute&& compute) {
        std::shared_ptr<Slot> slot;
        {
            std::lock_guard lock(mutex_);
            auto& s = slots_[key];
            if (!s) s = std::make_shared<Slot>();
            slot = s;
        }
        std::call_once(slot->once, [&] { slot->value = compute(); });
        return slot->value;
    }

private:
    struct Slot {
        std::once_flag once;
        Value value;
    };
    std::mutex mutex_;
    std::map<Key, std::shared_ptr<Slot>> slots_;
};

const GenericSum& generic_sum(std::size_t k, u64 limit) {
    static OnceCache<std::pair<std::size_t, u64>, GenericSum> cache;
    return cache.get({k, limit}, [&] {
        CompensatedSum sum;
        real scale = 0;
        for_each_prime(k + 1, limit, [&](u64 p) {
            sum.add(log_factor_large(p, k, k));
            scale += log_factor_scale(p, k, k);
        });
        GenericSum out;
        out.log_sum = sum.value();
        out.error = 16 * kEpsLong * scale + 4 * kEpsLong * sum.magnitude();
        return out;
    });
}

const PrimeSquareSum& prime_square_tail(u64 limit) {
    static OnceCache<u64, PrimeSquareSum> cache;
    return cache.get(limit, [&] {
        CompensatedSum sum;
        for_each_prime(2, limit, [&](u64 p) {
            const real pp = static_cast<real>(p);
            sum.add(1.0L / (pp * pp));
        });
        PrimeSquareSum out;
        out.tail = kPrimeZeta2 - sum.value();
        // Constant carries ~38 digits; the partial sum is compensated.
        out.error = 1e-36L + 8 * kEpsLong * kPrimeZeta2;
        return out;
    });
}

void check_tail_preconditions(std::size_t k, u64 prime_limit, const char* who) {
    const long double two_k_sq = 2.0L * static_cast<long double>(k) * static_cast<long double>(k);
    if (prime_limit < 2 || static_cast<long double>(prime_limit) < two_k_sq ||
        prime_limit <= k) {
        throw PreconditionError(std::string(who) + ": truncation " + std::to_string(prime_limit) +
                                " must be at least max(2, 2k^2, k+1) for k = " +
                                std::to_string(k));
    }
}

// Tuple-specific part: direct factors for p <= k and corrections at primes
// dividing D_H. Independent of the truncation.
struct LocalPart {
    bool vanishes = false;
    u64 vanishing_prime = 0;
    real direct = 1;            // prod_{p <= k} f(p, nu_p)
    std::size_t direct_factors = 0;
    real log_correction = 0;    // sum over p | D_H, p > k
    real log_error = 0;
};

LocalPart local_part(const Tuple& tuple) {
    const std::size_t k = tuple.size();
    LocalPart out;
    for (u64 p : primes_up_to(k)) {
        const auto nu = tuple.residue_count(p);
        if (nu == p) {
            out.vanishes = true;
            out.vanishing_prime = p;
            return out;
        }
        out.direct *= factor_value(p, nu, k);
        ++out.direct_factors;
    }
    CompensatedSum corr;
    real scale = 0;
    for (u64 p : tuple.discriminant_primes()) {
        if (p <= k) continue;
        const auto nu = tuple.residue_count(p);
        corr.add(log_factor_large(p, nu, k) - log_factor_large(p, k, k));
        scale += log_factor_scale(p, nu, k) + log_factor_scale(p, k, k);
    }
    out.log_correction = corr.value();
    out.log_error = 16 * kEpsLong * scale + 4 * kEpsLong * corr.magnitude();
    return out;
}

SingularSeriesValue assemble(const LocalPart& local, std::size_t k, u64 prime_limit) {
    const auto& generic = generic_sum(k, prime_limit);
    const auto remainder = tail_log_remainder(k, prime_limit);
    const real log_rest = local.log_correction + generic.log_sum + remainder.estimate;
    const real value = local.direct * std::exp(log_rest);
    const real log_error = static_cast<real>(remainder.radius) + local.log_error + generic.error;
    // Rounding of direct factors, the exponential and the final conversion.
    const real rounding = static_cast<real>(local.direct_factors + 2) * kEps;
    SingularSeriesValue out;
    out.value = static_cast<double>(value);
    out.error_radius = static_cast<double>(value * std::expm1(log_error + rounding));
    out.prime_limit = prime_limit;
    return out;
}

u64 minimal_prime_limit(std::size_t k) {
    const u64 need = std::max<u64>(2 * static_cast<u64>(k) * k, k + 1);
    return std::max(kMinPrimeLimit, std::bit_ceil(need));
}

}  // namespace

std::size_t residue_classes(const Tuple& tuple, std::uint64_t p) {
    if (!is_prime(p)) throw DomainError("residue_classes: " + std::to_string(p) + " is not prime");
    return tuple.residue_count(p);
}

double local_factor(std::uint64_t p, std::size_t nu, std::size_t k) {
    if (!is_prime(p)) throw DomainError("local_factor: " + std::to_string(p) + " is not prime");
    if (nu > p) throw DomainError("local_factor: nu exceeds p");
    if (nu > k) throw DomainError("local_factor: nu exceeds k");
    if (nu == 0 && k > 0) throw DomainError("local_factor: nu must be at least 1 for k >= 1");
    if (k == 0) return 1.0;
    return static_cast<double>(factor_value(p, nu, k));
}

double tail_log_bound(std::size_t k, std::uint64_t prime_limit) {
    check_tail_preconditions(k, prime_limit, "tail_log_bound");
    if (k <= 1) return 0.0;
    const double kk = static_cast<double>(k);
    // 2 * sum_{p > P} 2k^2/(p-1)^2 <= 4k^2 * sum_{n >= P} n^-2 <= 4k^2/(P-1)
    return 4.0 * kk * kk / static_cast<double>(prime_limit - 1);
}

TailRemainder tail_log_remainder(std::size_t k, std::uint64_t prime_limit) {
    check_tail_preconditions(k, prime_limit, "tail_log_remainder");
    if (k <= 1) return {};
    const auto& squares = prime_square_tail(prime_limit);
    const real kk = static_cast<real>(k);
    const real pp = static_cast<real>(prime_limit);
    const real second_order = (kk * kk - kk) / 2.0L;
    // m >= 3: sum_m k^m/m * P^{1-m}/(m-1) <= k^3 / (6 P^2 (1 - k/P))
    const real higher = kk * kk * kk / (6.0L * pp * pp * (1.0L - kk / pp));
    TailRemainder out;
    out.estimate = static_cast<double>(-second_order * squares.tail);
    out.radius = static_cast<double>(higher + second_order * squares.error +
                                     std::fabs(second_order * squares.tail) * kEps);
    return out;
}

SingularSeriesValue singular_series(const Tuple& tuple, double target_error,
                                    const SingularSeriesOptions& options) {
    if (!(target_error > 0.0)) throw DomainError("singular_series: target_error must be positive");
    const std::size_t k = tuple.size();
    if (k <= 1) return {1.0, 0.0, 0};
    const auto local = local_part(tuple);
    if (local.vanishes) return {0.0, 0.0, local.vanishing_prime};

    u64 prime_limit = minimal_prime_limit(k);
    while (true) {
        if (prime_limit > options.max_prime_limit) {
            throw ResourceError("singular_series: target error " + std::to_string(target_error) +
                                " needs truncation P >= " + std::to_string(prime_limit) +
                                ", above the configured limit " +
                                std::to_string(options.max_prime_limit));
        }
        auto result = assemble(local, k, prime_limit);
        if (result.error_radius <= target_error) return result;
        // The remainder radius falls like P^-2; jump straight to the
        // truncation that should suffice, then re-check.
        const double ratio = std::sqrt(result.error_radius / target_error);
        const double wanted = static_cast<double>(prime_limit) * ratio * 1.05;
        if (!std::isfinite(wanted) || wanted > 0x1p62) {
            throw ResourceError("singular_series: target error " + std::to_string(target_error) +
                                " is below the attainable rounding floor");
        }
        const u64 next = std::bit_ceil(static_cast<u64>(wanted));
        if (next <= prime_limit) {
            // No further gain from truncation: rounding dominates.
            if (assemble(local, k, prime_limit * 2).error_radius > target_error) {
                throw ResourceError("singular_series: target error " +
                                    std::to_string(target_error) +
                                    " is below the attainable rounding floor");
            }
            prime_limit *= 2;
        } else {
            prime_limit = next;
        }
    }
}

SingularSeriesValue singular_series_at(const Tuple& tuple, std::uint64_t prime_limit) {
    const std::size_t k = tuple.size();
    if (k <= 1) return {1.0, 0.0, 0};
    check_tail_preconditions(k, prime_limit, "singular_series_at");
    const auto local = local_part(tuple);
    if (local.vanishes) return {0.0, 0.0, local.vanishing_prime};
    return assemble(local, k, prime_limit);
}

bool is_admissible(const Tuple& tuple) {
    for (u64 p : primes_up_to(tuple.size())) {
        if (tuple.residue_count(p) == p) return false;
    }
    return true;
}

double inverse_euler_product(std::size_t k, std::uint64_t limit) {
    CompensatedSum sum;
    for_each_prime(2, limit, [&](u64 p) { sum.add(-std::log1p(-1.0L / static_cast<real>(p))); });
    return static_cast<double>(std::exp(static_cast<real>(k) * sum.value()));
}

double jensen_split_bound(const Tuple& tuple) {
    const std::size_t k = tuple.size();
    if (k < 2) throw DomainError("jensen_split_bound: needs k >= 2");
    const u64 cube = static_cast<u64>(k) * k * k;

    const double small_primes = inverse_euler_product(k, cube);

    // prod_{p > k^3} f(p, k) = exp(G(P) - sum_{k < p <= k^3} log f(p, k) + remainder)
    const u64 prime_limit = std::max(minimal_prime_limit(k), std::bit_ceil(cube + 1));
    const auto& generic = generic_sum(k, prime_limit);
    CompensatedSum head;
    for_each_prime(k + 1, cube, [&](u64 p) { head.add(log_factor_large(p, k, k)); });
    const auto remainder = tail_log_remainder(k, prime_limit);
    const real log_tail = generic.log_sum - head.value() + remainder.estimate +
                          remainder.radius + generic.error + 8 * kEpsLong * head.magnitude();
    const double tail = static_cast<double>(std::exp(log_tail));

    const double pairs = static_cast<double>(k) * static_cast<double>(k - 1) / 2.0;
    double average = 0.0;
    for (u64 d : tuple.differences()) {
        double inverse_sum = 0.0;
        for (u64 p : prime_factors(d)) {
            if (p > cube) inverse_sum += 1.0 / static_cast<double>(p);
        }
        average += std::exp(2.0 * pairs * inverse_sum);
    }
    average /= pairs;
    return small_primes * tail * average;
}

}  // namespace ktuple
