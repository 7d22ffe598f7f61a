#include <doctest.h>

#include <cmath>

#include "ktuple/error.hpp"
#include "ktuple/number_theory.hpp"
#include "ktuple/singular_series.hpp"
#include "ktuple/tuple_averages.hpp"
#include "oracles.hpp"

using namespace ktuple;

namespace {

double subsets(std::uint64_t h, std::size_t k) { return binomial(h, k); }

double factorial(std::size_t k) { return std::tgamma(static_cast<double>(k) + 1.0); }

}  // namespace

TEST_CASE("SplitMix64 reference stream and bounded draws") {
    SplitMix64 rng(0);
    CHECK(rng() == 0xE220A8397B1DCDAFULL);
    CHECK(rng() == 0x6E789E6AA1B965F4ULL);
    SplitMix64 r2(99);
    std::vector<int> seen(8, 0);
    for (int i = 0; i < 80000; ++i) {
        const auto v = uniform_in(r2, 7);
        REQUIRE(v >= 1);
        REQUIRE(v <= 7);
        ++seen[v];
    }
    for (int v = 1; v <= 7; ++v) CHECK(std::abs(seen[v] - 80000 / 7) < 500);
    CHECK(worker_seed(1, 0) != worker_seed(1, 1));
}

TEST_CASE("exact T_k(h) examples") {
    CHECK(tkh_exact(1, 10).value == 10.0);
    CHECK(tkh_exact(2, 2).value == 0.0);
    CHECK(tkh_exact(5, 3).value == 0.0);
    const auto t24 = tkh_exact(2, 4);
    CHECK(std::fabs(t24.value - 4.0 * oracle::kTwin) <= t24.error + 1e-15);
    CHECK(t24.value == doctest::Approx(5.28129).epsilon(1e-6));
    CHECK_THROWS_AS(tkh_exact(12, 100), ResourceError);
}

TEST_CASE("T_1(h) = h exactly") {
    for (std::uint64_t h = 1; h <= 1000; ++h) REQUIRE(tkh_exact(1, h).value == static_cast<double>(h));
}

TEST_CASE("brute force over ordered pairs") {
    for (std::uint64_t h = 2; h <= 12; ++h) {
        double sum = 0.0;
        for (std::uint64_t a = 1; a <= h; ++a) {
            for (std::uint64_t b = 1; b <= h; ++b) {
                if (a != b) sum += singular_series(Tuple{a, b}, 1e-12).value;
            }
        }
        const auto t = tkh_exact(2, h);
        CHECK(std::fabs(t.value - sum) <= t.error + 1e-12 * sum);
    }
}

TEST_CASE("pair fast path") {
    CHECK_THROWS_AS(tkh_pair_fast(1), DomainError);
    const auto t3 = tkh_pair_fast(3);
    CHECK(t3.value == doctest::Approx(2.0 * oracle::kTwin).epsilon(1e-9));
    CHECK(t3.value == doctest::Approx(2.64065).epsilon(1e-5));
    for (std::uint64_t h = 2; h <= 200; ++h) {
        const auto fast = tkh_pair_fast(h);
        const auto exact = tkh_exact(2, h);
        REQUIRE_MESSAGE(std::fabs(fast.value - exact.value) <= fast.error + exact.error, "h=" << h);
    }
}

TEST_CASE("T_2(h)/h^2 approaches 1 from below") {
    double previous = 0.0;
    for (std::uint64_t h : {100ULL, 1000ULL, 10000ULL}) {
        const double ratio = tkh_pair_fast(h).value / (static_cast<double>(h) * static_cast<double>(h));
        CHECK(ratio > previous);
        CHECK(ratio < 1.0);
        previous = ratio;
    }
    CHECK(previous >= 0.998);
}

TEST_CASE("threaded enumeration agrees") {
    AverageOptions four;
    four.threads = 4;
    const auto a = tkh_exact(3, 40);
    const auto b = tkh_exact(3, 40, four);
    CHECK(std::fabs(a.value - b.value) <= a.error + b.error);
    CHECK(tkh_exact(3, 40, four).value == b.value);
}

TEST_CASE("Monte Carlo contract") {
    const auto one = tkh_monte_carlo(1, 100, 1000, 17);
    CHECK(one.mean == 1.0);
    CHECK(one.std_error == 0.0);
    CHECK_THROWS_AS(tkh_monte_carlo(3, 30, 99, 1), PreconditionError);
    CHECK_THROWS_AS(tkh_monte_carlo(5, 4, 1000, 1), PreconditionError);

    const double exact_mean = tkh_exact(3, 30).value / (factorial(3) * subsets(30, 3));
    const auto big = tkh_monte_carlo(3, 30, 100000, 2024);
    CHECK(std::fabs(big.mean - exact_mean) <= 4.0 * big.std_error);

    const auto a = tkh_monte_carlo(10, 100, 100000, 42);
    const auto b = tkh_monte_carlo(10, 100, 100000, 42);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.mean < allk_bound(10).euler_product + 3.0 * a.std_error);

    AverageOptions three;
    three.threads = 3;
    const auto c = tkh_monte_carlo(10, 100, 20000, 42, three);
    const auto d = tkh_monte_carlo(10, 100, 20000, 42, three);
    CHECK(c.mean == d.mean);
    CHECK(c.workers == 3);
}

TEST_CASE("dense sampling path covers the Fisher-Yates fallback") {
    // k^2 > h/2 switches samplers; the mean must still match enumeration.
    const double exact_mean = tkh_exact(6, 20).value / (factorial(6) * subsets(20, 6));
    const auto mc = tkh_monte_carlo(6, 20, 200000, 8);
    CHECK(std::fabs(mc.mean - exact_mean) <= 4.0 * mc.std_error);
}

TEST_CASE("Monte Carlo lands within 3 sigma in at least 95 of 100 seeds") {
    const double exact_mean = tkh_exact(3, 30).value / (factorial(3) * subsets(30, 3));
    int inside = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto e = tkh_monte_carlo(3, 30, 10000, seed);
        inside += std::fabs(e.mean - exact_mean) <= 3.0 * e.std_error;
    }
    CHECK(inside >= 95);
}

TEST_CASE("all-k bound") {
    const auto b2 = allk_bound(2);
    CHECK(b2.euler_product == doctest::Approx(19.140625).epsilon(1e-14));
    CHECK(b2.log_power == doctest::Approx(std::pow(3.0 * std::log(2.0), 2)).epsilon(1e-14));
    CHECK(b2.euler_product >= 1.0);
    double direct = 1.0;
    for (std::uint64_t p : oracle::primes_to(27)) direct /= std::pow(1.0 - 1.0 / static_cast<double>(p), 3);
    CHECK(allk_bound(3).euler_product == doctest::Approx(direct).epsilon(1e-13));
    CHECK_THROWS_AS(allk_bound(1), DomainError);
}
