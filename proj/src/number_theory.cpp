// number_theory.cpp

#include "ktuple/number_theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace ktuple {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128{a} * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

constexpr std::array<u64, 12> kWitnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Brent's variant of Pollard rho; n must be composite and odd.
u64 pollard_brent(u64 n) {
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
        constexpr u64 m = 128;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            }
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (u64 p : kWitnesses) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : kWitnesses) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<u64> out;
    if (n < 2) return out;
    // Trial division clears the small factors cheaply; rho handles the rest.
    for (u64 p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) {
        std::vector<u64> rest;
        factor_into(n, rest);
        out.insert(out.end(), rest.begin(), rest.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    primes.push_back(2);
    // index i <-> odd number 2i + 1
    const u64 half = (limit - 1) / 2 + 1;
    std::vector<bool> composite(half, false);
    for (u64 i = 1; i < half; ++i) {
        if (composite[i]) continue;
        const u64 p = 2 * i + 1;
        primes.push_back(p);
        for (u64 j = p * p / 2; j < half; j += p) composite[j] = true;
    }
    return primes;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && u128{r} * r > n) --r;
    while (u128{r + 1} * (r + 1) <= n) ++r;
    return r;
}

double binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double result = 1.0;
    for (u64 i = 1; i <= k; ++i) {
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(result);
}

}  // namespace ktuple
