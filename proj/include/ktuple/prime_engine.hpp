// prime_engine.hpp
// Primality data over integer ranges and the counts derived from it:
// per-window prime counts and prime-tuple hit counts.
//
// Storage is one bit per integer: bit j of word w holds the primality of
// base + 64*w + j. The same layout is written verbatim to the binary cache
// (magic "PKT1", base and limit as little-endian u64, then the words).

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "ktuple/tuple.hpp"

namespace ktuple {

inline constexpr std::size_t kDefaultSegmentBits = std::size_t{1} << 20;

class PrimalityTable {
public:
    /// words must hold exactly ceil((limit - base + 1) / 64) entries with the
    /// bits above limit cleared.
    PrimalityTable(std::uint64_t base, std::uint64_t limit, std::vector<std::uint64_t> words);

    std::uint64_t base() const noexcept { return base_; }
    std::uint64_t limit() const noexcept { return limit_; }
    bool covers(std::uint64_t n) const noexcept { return n >= base_ && n <= limit_; }
    bool covers(std::uint64_t lo, std::uint64_t hi) const noexcept {
        return lo >= base_ && hi <= limit_;
    }

    /// Throws CoverageError outside [base, limit].
    bool is_prime(std::uint64_t n) const;

    bool test(std::uint64_t n) const noexcept {
        const auto i = n - base_;
        return (words_[i >> 6] >> (i & 63)) & 1U;
    }

    /// 64 primality bits for n, n+1, ..., n+63 (bit j <-> n+j); integers past
    /// limit read as 0. n must be covered.
    std::uint64_t bits_from(std::uint64_t n) const noexcept;

    /// Number of primes in [lo, hi]; both ends must be covered. Empty when lo > hi.
    std::uint64_t count_primes(std::uint64_t lo, std::uint64_t hi) const;

    std::uint64_t popcount() const noexcept;

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const PrimalityTable&, const PrimalityTable&) = default;

private:
    std::uint64_t base_;
    std::uint64_t limit_;
    std::vector<std::uint64_t> words_;
};

struct SieveOptions {
    std::size_t segment_bits = kDefaultSegmentBits;  ///< rounded up to a multiple of 64
    unsigned threads = 1;
};

/// Exact primality for every integer in [base, limit]. Throws
/// InvalidRangeError when limit <= base.
PrimalityTable sieve_range(std::uint64_t base, std::uint64_t limit, const SieveOptions& options = {});

/// Calls visit(chunk) for consecutive tables covering [lo, hi], each at most
/// segment_bits wide; working memory stays O(sqrt(hi) + segment).
void for_each_sieve_chunk(std::uint64_t lo, std::uint64_t hi,
                          const std::function<void(const PrimalityTable&)>& visit,
                          std::size_t segment_bits = kDefaultSegmentBits);

/// Calls f(p) for every prime p in [lo, hi] in increasing order.
template <class F>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f) {
    if (hi < lo || hi < 2) return;
    for_each_sieve_chunk(lo, hi, [&](const PrimalityTable& chunk) {
        const auto words = chunk.words();
        for (std::size_t w = 0; w < words.size(); ++w) {
            for (auto bits = words[w]; bits != 0; bits &= bits - 1) {
                f(chunk.base() + 64 * w + static_cast<std::uint64_t>(__builtin_ctzll(bits)));
            }
        }
    });
}

/// N_c = #{1 <= n <= x : exactly c primes q with n < q <= n + h}.
class WindowHistogram {
public:
    WindowHistogram(std::uint64_t x, double h, std::vector<std::uint64_t> counts);

    std::uint64_t x() const noexcept { return x_; }
    double h() const noexcept { return h_; }

    /// N_c, zero for c beyond the largest observed count.
    std::uint64_t count(std::size_t c) const noexcept {
        return c < counts_.size() ? counts_[c] : 0;
    }
    /// Largest c with N_c > 0.
    std::size_t max_count() const noexcept { return counts_.empty() ? 0 : counts_.size() - 1; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::map<std::size_t, std::uint64_t> as_map() const;

    friend bool operator==(const WindowHistogram&, const WindowHistogram&) = default;

private:
    std::uint64_t x_;
    double h_;
    std::vector<std::uint64_t> counts_;  // dense, trailing zeros trimmed
};

/// Table limit needed by window_counts: x + ceil(h).
std::uint64_t window_coverage_limit(std::uint64_t x, double h);

/// Histogram of prime counts in the half-open windows (n, n + h], n = 1..x.
/// The table must cover [1, x + ceil(h)]. Parallel runs split n into
/// contiguous blocks and merge exactly.
WindowHistogram window_counts(const PrimalityTable& table, std::uint64_t x, double h,
                              unsigned threads = 1);

/// #{1 <= n <= x : n + h prime for every h in H}. The table must cover
/// [1 + min H, x + max H].
std::uint64_t count_tuple_hits(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x);

/// The n counted by count_tuple_hits, ascending.
std::vector<std::uint64_t> tuple_hits(const PrimalityTable& table, const Tuple& tuple,
                                      std::uint64_t x);

void write_table(const PrimalityTable& table, std::ostream& out);
PrimalityTable read_table(std::istream& in);
void save_table(const PrimalityTable& table, const std::filesystem::path& path);
PrimalityTable load_table(const std::filesystem::path& path);

}  // namespace ktuple
