// prime_engine.cpp

#include "ktuple/prime_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <new>
#include <ostream>
#include <thread>

#include "ktuple/error.hpp"
#include "ktuple/number_theory.hpp"

namespace ktuple {
namespace {

using u64 = std::uint64_t;

u64 word_count_for(u64 base, u64 limit) { return (limit - base) / 64 + 1; }

// Odd sieving primes up to sqrt(limit).
std::vector<u64> odd_sieving_primes(u64 limit) {
    auto primes = primes_up_to(isqrt(limit));
    if (!primes.empty()) primes.erase(primes.begin());
    return primes;
}

// Sieves the integers base + 64*w0 ... base + 64*(w0 + out.size()) - 1, clipped
// to limit, into out.
void sieve_words(u64 base, u64 limit, u64 w0, std::span<u64> out,
                 std::span<const u64> odd_primes) {
    const u64 seg_lo = base + 64 * w0;
    const u64 seg_hi = std::min(limit, seg_lo + 64 * out.size() - 1);
    // Bit j of any word has the parity of base + j.
    const u64 odd_mask = (base & 1) ? 0x5555555555555555ULL : 0xAAAAAAAAAAAAAAAAULL;
    std::fill(out.begin(), out.end(), odd_mask);

    for (u64 p : odd_primes) {
        const u64 sq = p * p;
        if (sq > seg_hi) break;
        u64 m = std::max(sq, (seg_lo + p - 1) / p * p);
        if ((m & 1) == 0) m += p;
        for (; m <= seg_hi; m += 2 * p) {
            const u64 i = m - seg_lo;
            out[i >> 6] &= ~(u64{1} << (i & 63));
        }
    }
    auto set_bit = [&](u64 n, bool value) {
        if (n < seg_lo || n > seg_hi) return;
        const u64 i = n - seg_lo;
        if (value) {
            out[i >> 6] |= u64{1} << (i & 63);
        } else {
            out[i >> 6] &= ~(u64{1} << (i & 63));
        }
    };
    set_bit(1, false);
    set_bit(2, true);
    // Clear the padding past seg_hi in the final word.
    const u64 used = seg_hi - seg_lo + 1;
    if (used % 64 != 0) out[used / 64] &= (u64{1} << (used % 64)) - 1;
    for (u64 w = used / 64 + (used % 64 != 0); w < out.size(); ++w) out[w] = 0;
}

void put_u64(std::ostream& out, u64 v) {
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

u64 get_u64(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) throw CacheFormatError("truncated primality cache");
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= u64{bytes[i]} << (8 * i);
    return v;
}

constexpr std::array<char, 4> kMagic{'P', 'K', 'T', '1'};

}  // namespace

PrimalityTable::PrimalityTable(std::uint64_t base, std::uint64_t limit,
                               std::vector<std::uint64_t> words)
    : base_(base), limit_(limit), words_(std::move(words)) {
    if (limit_ <= base_) throw InvalidRangeError("primality table needs limit > base");
    if (words_.size() != word_count_for(base_, limit_)) {
        throw DomainError("primality table word count does not match its range");
    }
}

bool PrimalityTable::is_prime(std::uint64_t n) const {
    if (!covers(n)) {
        throw CoverageError("integer " + std::to_string(n) + " outside primality table",
                            std::max(n, limit_));
    }
    return test(n);
}

std::uint64_t PrimalityTable::bits_from(std::uint64_t n) const noexcept {
    const u64 i = n - base_;
    const u64 w = i >> 6;
    const u64 s = i & 63;
    u64 bits = words_[w] >> s;
    if (s != 0 && w + 1 < words_.size()) bits |= words_[w + 1] << (64 - s);
    return bits;
}

std::uint64_t PrimalityTable::count_primes(std::uint64_t lo, std::uint64_t hi) const {
    if (lo > hi) return 0;
    if (!covers(lo, hi)) {
        throw CoverageError("prime count range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "] outside primality table",
                            std::max(hi, limit_));
    }
    const u64 i0 = lo - base_;
    const u64 i1 = hi - base_;
    const u64 w0 = i0 >> 6;
    const u64 w1 = i1 >> 6;
    const u64 low_mask = ~u64{0} << (i0 & 63);
    const u64 high_mask = (i1 & 63) == 63 ? ~u64{0} : (u64{1} << ((i1 & 63) + 1)) - 1;
    if (w0 == w1) return std::popcount(words_[w0] & low_mask & high_mask);
    u64 total = std::popcount(words_[w0] & low_mask) + std::popcount(words_[w1] & high_mask);
    for (u64 w = w0 + 1; w < w1; ++w) total += std::popcount(words_[w]);
    return total;
}

std::uint64_t PrimalityTable::popcount() const noexcept {
    u64 total = 0;
    for (u64 w : words_) total += std::popcount(w);
    return total;
}

PrimalityTable sieve_range(std::uint64_t base, std::uint64_t limit, const SieveOptions& options) {
    if (limit <= base) {
        throw InvalidRangeError("sieve_range: limit (" + std::to_string(limit) +
                                ") must exceed base (" + std::to_string(base) + ")");
    }
    const u64 total_words = word_count_for(base, limit);
    std::vector<u64> words;
    try {
        words.resize(total_words);
    } catch (const std::bad_alloc&) {
        throw ResourceError("sieve_range: cannot allocate " + std::to_string(total_words * 8) +
                            " bytes for [" + std::to_string(base) + ", " +
                            std::to_string(limit) + "]");
    }
    const auto odd_primes = odd_sieving_primes(limit);
    const u64 seg_words = std::max<u64>(1, (options.segment_bits + 63) / 64);
    const u64 segments = (total_words + seg_words - 1) / seg_words;

    auto work = [&](u64 first, u64 stride) {
        for (u64 s = first; s < segments; s += stride) {
            const u64 w0 = s * seg_words;
            const u64 len = std::min(seg_words, total_words - w0);
            sieve_words(base, limit, w0, std::span<u64>(words).subspan(w0, len), odd_primes);
        }
    };
    const unsigned threads = std::max(1U, options.threads);
    if (threads == 1 || segments == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    }
    return PrimalityTable(base, limit, std::move(words));
}

void for_each_sieve_chunk(std::uint64_t lo, std::uint64_t hi,
                          const std::function<void(const PrimalityTable&)>& visit,
                          std::size_t segment_bits) {
    if (hi < lo) return;
    const auto odd_primes = odd_sieving_primes(hi);
    const u64 chunk = std::max<u64>(64, (segment_bits + 63) / 64 * 64);
    for (u64 start = lo;;) {
        const u64 end = (hi - start < chunk - 1) ? hi : start + chunk - 1;
        // A table needs limit > base, so a lone trailing integer gets a
        // two-wide table with the extra bit masked off.
        const u64 table_end = end == start ? end + 1 : end;
        std::vector<u64> words(word_count_for(start, table_end));
        sieve_words(start, table_end, 0, words, odd_primes);
        if (end == start) words[0] &= 1;
        visit(PrimalityTable(start, table_end, std::move(words)));
        if (end == hi) break;
        start = end + 1;
    }
}

WindowHistogram::WindowHistogram(std::uint64_t x, double h, std::vector<std::uint64_t> counts)
    : x_(x), h_(h), counts_(std::move(counts)) {
    while (!counts_.empty() && counts_.back() == 0) counts_.pop_back();
}

std::map<std::size_t, std::uint64_t> WindowHistogram::as_map() const {
    std::map<std::size_t, std::uint64_t> out;
    for (std::size_t c = 0; c < counts_.size(); ++c) {
        if (counts_[c] != 0) out.emplace(c, counts_[c]);
    }
    return out;
}

std::uint64_t window_coverage_limit(std::uint64_t x, double h) {
    return x + static_cast<u64>(std::ceil(h));
}

WindowHistogram window_counts(const PrimalityTable& table, std::uint64_t x, double h,
                              unsigned threads) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("window_counts: h must be positive");
    const u64 required = window_coverage_limit(x, h);
    if (table.base() > 1 || table.limit() < required) {
        throw CoverageError("window_counts: x = " + std::to_string(x) + ", h = " +
                                std::to_string(h) + " needs primality data on [1, " +
                                std::to_string(required) + "]",
                            required);
    }
    // (n, n + h] holds the integers n+1 .. n+floor(h).
    const u64 width = static_cast<u64>(std::floor(h));

    auto run_block = [&](u64 first, u64 last) {
        std::vector<u64> counts;
        if (first > last) return counts;
        u64 c = width == 0 ? 0 : table.count_primes(first + 1, first + width);
        for (u64 n = first;; ++n) {
            if (c >= counts.size()) counts.resize(c + 1, 0);
            ++counts[c];
            if (n == last) break;
            if (width != 0) c = c + table.test(n + 1 + width) - table.test(n + 1);
        }
        return counts;
    };

    const unsigned workers = static_cast<unsigned>(std::clamp<u64>(threads, 1, std::max<u64>(1, x)));
    std::vector<std::vector<u64>> partial(workers);
    if (workers == 1) {
        partial[0] = run_block(1, x);
    } else {
        std::vector<std::jthread> pool;
        const u64 block = x / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const u64 first = 1 + t * block;
            const u64 last = (t + 1 == workers) ? x : (t + 1) * block;
            pool.emplace_back([&, t, first, last] { partial[t] = run_block(first, last); });
        }
    }
    std::vector<u64> merged;
    for (const auto& p : partial) {
        if (p.size() > merged.size()) merged.resize(p.size(), 0);
        for (std::size_t c = 0; c < p.size(); ++c) merged[c] += p[c];
    }
    return WindowHistogram(x, h, std::move(merged));
}

namespace {

void check_tuple_coverage(const PrimalityTable& table, const Tuple& tuple, u64 x) {
    const u64 lo = 1 + tuple.min();
    const u64 hi = x + tuple.max();
    if (table.base() > lo || table.limit() < hi) {
        throw CoverageError("tuple count for H = {" + tuple.to_string() + "}, x = " +
                                std::to_string(x) + " needs primality data on [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]",
                            hi);
    }
}

// Calls f(n0, bits) for each 64-wide block of window starts; bit j marks n0 + j.
template <class F>
void scan_tuple_blocks(const PrimalityTable& table, const Tuple& tuple, u64 x, F&& f) {
    for (u64 n0 = 1; n0 <= x; n0 += 64) {
        u64 bits = ~u64{0};
        for (auto h : tuple.offsets()) {
            bits &= table.bits_from(n0 + h);
            if (bits == 0) break;
        }
        if (x - n0 < 63) bits &= (u64{1} << (x - n0 + 1)) - 1;
        f(n0, bits);
    }
}

}  // namespace

std::uint64_t count_tuple_hits(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x) {
    if (tuple.empty()) return x;
    check_tuple_coverage(table, tuple, x);
    u64 total = 0;
    scan_tuple_blocks(table, tuple, x, [&](u64, u64 bits) { total += std::popcount(bits); });
    return total;
}

std::vector<std::uint64_t> tuple_hits(const PrimalityTable& table, const Tuple& tuple,
                                      std::uint64_t x) {
    std::vector<u64> out;
    if (tuple.empty()) {
        out.reserve(x);
        for (u64 n = 1; n <= x; ++n) out.push_back(n);
        return out;
    }
    check_tuple_coverage(table, tuple, x);
    scan_tuple_blocks(table, tuple, x, [&](u64 n0, u64 bits) {
        for (; bits != 0; bits &= bits - 1) out.push_back(n0 + std::countr_zero(bits));
    });
    return out;
}

void write_table(const PrimalityTable& table, std::ostream& out) {
    out.write(kMagic.data(), kMagic.size());
    put_u64(out, table.base());
    put_u64(out, table.limit());
    for (u64 w : table.words()) put_u64(out, w);
    if (!out) throw std::runtime_error("failed writing primality cache");
}

PrimalityTable read_table(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw CacheFormatError("primality cache lacks PKT1 magic");
    const u64 base = get_u64(in);
    const u64 limit = get_u64(in);
    if (limit <= base) throw CacheFormatError("primality cache has limit <= base");
    if (limit - base > (u64{1} << 48)) throw CacheFormatError("primality cache range too large");
    std::vector<u64> words(word_count_for(base, limit));
    for (auto& w : words) w = get_u64(in);
    const u64 used = (limit - base + 1) % 64;
    if (used != 0 && (words.back() >> used) != 0) {
        throw CacheFormatError("primality cache has bits set past its limit");
    }
    return PrimalityTable(base, limit, std::move(words));
}

void save_table(const PrimalityTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_table(table, out);
}

PrimalityTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_table(in);
}

}  // namespace ktuple
