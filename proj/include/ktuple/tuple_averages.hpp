// tuple_averages.hpp
// T_k(h) = sum of S(H) over ordered k-tuples of distinct integers in [1, h],
// computed exactly, through the difference form for k = 2, or estimated by
// sampling random k-subsets.

#pragma once

#include <cstdint>
#include <limits>

namespace ktuple {

struct BoundedValue {
    double value = 0.0;
    double error = 0.0;  ///< absolute bound
};

struct AverageOptions {
    double per_tuple_error = 1e-10;
    /// Largest number of k-subsets tkh_exact will enumerate.
    std::uint64_t enumeration_budget = 50'000'000;
    unsigned threads = 1;
};

/// Mean of S over uniformly random sorted k-subsets of [1, h].
/// T_k(h) = k! * C(h, k) * mean.
struct EstimateWithError {
    double mean = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(samples)
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

/// SplitMix64: a 64-bit mixing generator, usable with <random> adaptors.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Seed for worker w of a run seeded with seed.
std::uint64_t worker_seed(std::uint64_t seed, unsigned worker) noexcept;

/// Uniform integer in [1, n] without modulo bias.
std::uint64_t uniform_in(SplitMix64& rng, std::uint64_t n) noexcept;

/// Exact T_k(h) as k! * sum over sorted k-subsets. Returns 0 when k > h.
/// Error bound: k! * C(h, k) * per_tuple_error plus summation rounding.
/// Throws ResourceError (suggesting Monte Carlo) when C(h, k) exceeds the budget.
BoundedValue tkh_exact(std::size_t k, std::uint64_t h, const AverageOptions& options = {});

/// T_2(h) = 2 * sum_{d=1}^{h-1} (h - d) S({0, d}). Requires h >= 2.
BoundedValue tkh_pair_fast(std::uint64_t h, const AverageOptions& options = {});

/// Sampled mean of S over random k-subsets of [1, h]. Requires h >= k >= 1 and
/// samples >= 100. Worker w draws from SplitMix64(worker_seed(seed, w)); the
/// result is bit-reproducible for a fixed (seed, samples, threads).
EstimateWithError tkh_monte_carlo(std::size_t k, std::uint64_t h, std::uint64_t samples,
                                  std::uint64_t seed, const AverageOptions& options = {});

struct AllKBound {
    double euler_product = 0.0;  ///< prod_{p <= k^3} (1 - 1/p)^{-k}
    double log_power = 0.0;      ///< (3 log k)^k
};

/// Both sides of the uniform-in-h bound on T_k(h)/h^k. Requires k >= 2;
/// ResourceError when k^3 exceeds 2^40.
AllKBound allk_bound(std::size_t k);

}  // namespace ktuple
