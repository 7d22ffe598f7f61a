// tuple_averages.cpp

#include "ktuple/tuple_averages.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "ktuple/error.hpp"
#include "ktuple/number_theory.hpp"
#include "ktuple/singular_series.hpp"
#include "ktuple/tuple.hpp"

namespace ktuple {
namespace {

using u64 = std::uint64_t;

double factorial(std::size_t k) {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
}

// Runs body(worker, first, last) over a contiguous split of [0, n) and returns
// the per-worker results in worker order.
template <class T, class Body>
std::vector<T> split_work(u64 n, unsigned threads, Body body) {
    const unsigned workers = static_cast<unsigned>(std::clamp<u64>(threads, 1, std::max<u64>(1, n)));
    std::vector<T> results(workers);
    auto bounds = [&](unsigned w) {
        const u64 per = n / workers, extra = n % workers;
        const u64 first = w * per + std::min<u64>(w, extra);
        return std::pair{first, first + per + (w < extra ? 1 : 0)};
    };
    if (workers == 1) {
        results[0] = body(0U, u64{0}, n);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const auto [first, last] = bounds(w);
                results[w] = body(w, first, last);
            });
        }
    }
    return results;
}

struct Welford {
    u64 n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        ++n;
        const double delta = v - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (v - mean);
    }
    void merge(const Welford& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.n) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }
};

// Sum of S over sorted k-subsets of [1, h] whose smallest element is in
// [first_lo, first_hi].
struct SubsetSum {
    double sum = 0.0;
    u64 count = 0;
};

SubsetSum sum_subsets(std::size_t k, u64 h, u64 first_lo, u64 first_hi, double target) {
    SubsetSum out;
    std::vector<u64> current(k);
    for (u64 first = first_lo; first <= first_hi; ++first) {
        if (h - first + 1 < k) break;
        // Lexicographic walk over (current[1], ..., current[k-1]) > first.
        current[0] = first;
        for (std::size_t i = 1; i < k; ++i) current[i] = first + i;
        while (true) {
            out.sum += singular_series(Tuple(current), target).value;
            ++out.count;
            std::size_t i = k;
            while (i > 1 && current[i - 1] == h - (k - i)) --i;
            if (i == 1) break;
            ++current[i - 1];
            for (std::size_t j = i; j < k; ++j) current[j] = current[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace

std::uint64_t worker_seed(std::uint64_t seed, unsigned worker) noexcept {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (static_cast<u64>(worker) + 1)));
    return mix();
}

std::uint64_t uniform_in(SplitMix64& rng, std::uint64_t n) noexcept {
    // Lemire's multiply-shift with rejection of the biased low region.
    using u128 = unsigned __int128;
    u64 x = rng();
    u128 m = u128{x} * n;
    auto low = static_cast<u64>(m);
    if (low < n) {
        const u64 threshold = (0 - n) % n;
        while (low < threshold) {
            x = rng();
            m = u128{x} * n;
            low = static_cast<u64>(m);
        }
    }
    return static_cast<u64>(m >> 64) + 1;
}

BoundedValue tkh_exact(std::size_t k, std::uint64_t h, const AverageOptions& options) {
    if (k < 1) throw DomainError("tkh_exact: k must be at least 1");
    if (h < 1) throw DomainError("tkh_exact: h must be at least 1");
    if (k > h) return {0.0, 0.0};
    const double subsets = binomial(h, k);
    if (subsets > static_cast<double>(options.enumeration_budget)) {
        throw ResourceError("tkh_exact: C(" + std::to_string(h) + ", " + std::to_string(k) +
                            ") subsets exceed the enumeration budget of " +
                            std::to_string(options.enumeration_budget) +
                            "; use the Monte Carlo mode instead");
    }
    const u64 first_max = h - k + 1;
    auto partial = split_work<SubsetSum>(first_max, options.threads, [&](unsigned, u64 a, u64 b) {
        if (a >= b) return SubsetSum{};
        return sum_subsets(k, h, a + 1, b, options.per_tuple_error);
    });
    double sum = 0.0;
    u64 count = 0;
    for (const auto& p : partial) {
        sum += p.sum;
        count += p.count;
    }
    const double kf = factorial(k);
    const double n = static_cast<double>(count);
    return {kf * sum, kf * (n * options.per_tuple_error + 2.0 * n * 0x1p-52 * sum)};
}

BoundedValue tkh_pair_fast(std::uint64_t h, const AverageOptions& options) {
    if (h < 2) throw DomainError("tkh_pair_fast: h must be at least 2");
    auto partial = split_work<double>(h - 1, options.threads, [&](unsigned, u64 a, u64 b) {
        double s = 0.0;
        for (u64 d = a + 1; d <= b; ++d) {
            s += static_cast<double>(h - d) * singular_series(Tuple{0, d}, options.per_tuple_error).value;
        }
        return s;
    });
    const double sum = std::accumulate(partial.begin(), partial.end(), 0.0);
    const double weight = static_cast<double>(h) * static_cast<double>(h - 1);  // 2 * sum (h - d)
    const double value = 2.0 * sum;
    // Each of the h - 1 additions rounds by at most one ulp of the running sum.
    return {value, weight * options.per_tuple_error + static_cast<double>(h) * 0x1p-52 * value};
}

EstimateWithError tkh_monte_carlo(std::size_t k, std::uint64_t h, std::uint64_t samples,
                                  std::uint64_t seed, const AverageOptions& options) {
    if (k < 1 || h < k) throw PreconditionError("tkh_monte_carlo: needs h >= k >= 1");
    if (samples < 100) {
        throw PreconditionError("tkh_monte_carlo: at least 100 samples are needed for a variance estimate");
    }
    const bool use_shuffle = static_cast<double>(k) * static_cast<double>(k) > static_cast<double>(h) / 2.0;
    auto partial = split_work<Welford>(samples, options.threads, [&](unsigned w, u64 a, u64 b) {
        SplitMix64 rng(worker_seed(seed, w));
        Welford acc;
        std::vector<u64> pool;
        if (use_shuffle) {
            pool.resize(h);
            std::iota(pool.begin(), pool.end(), u64{1});
        }
        std::vector<u64> draw(k);
        for (u64 s = a; s < b; ++s) {
            if (use_shuffle) {
                // Partial Fisher-Yates; any starting permutation gives a uniform k-subset.
                for (std::size_t i = 0; i < k; ++i) {
                    const u64 j = i + uniform_in(rng, h - i) - 1;
                    std::swap(pool[i], pool[j]);
                    draw[i] = pool[i];
                }
            } else {
                for (std::size_t i = 0; i < k; ++i) {
                    u64 v;
                    do {
                        v = uniform_in(rng, h);
                    } while (std::find(draw.begin(), draw.begin() + static_cast<std::ptrdiff_t>(i), v) !=
                             draw.begin() + static_cast<std::ptrdiff_t>(i));
                    draw[i] = v;
                }
            }
            acc.add(singular_series(Tuple(draw), options.per_tuple_error).value);
        }
        return acc;
    });
    Welford total;
    for (const auto& p : partial) total.merge(p);
    EstimateWithError out;
    out.mean = total.mean;
    out.std_error = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1)) /
                                      std::sqrt(static_cast<double>(total.n))
                                : 0.0;
    out.samples = samples;
    out.seed = seed;
    out.workers = static_cast<unsigned>(partial.size());
    return out;
}

AllKBound allk_bound(std::size_t k) {
    if (k < 2) throw DomainError("allk_bound: k must be at least 2");
    const double cube = std::pow(static_cast<double>(k), 3.0);
    if (cube > 0x1p40) {
        throw ResourceError("allk_bound: k^3 = " + std::to_string(cube) + " exceeds the sieve budget");
    }
    AllKBound out;
    out.euler_product = inverse_euler_product(k, static_cast<u64>(cube));
    out.log_power = std::pow(3.0 * std::log(static_cast<double>(k)), static_cast<double>(k));
    return out;
}

}  // namespace ktuple
