#include <doctest.h>

#include <cmath>

#include "ktuple/error.hpp"
#include "ktuple/number_theory.hpp"
#include "ktuple/selberg_sieve.hpp"
#include "ktuple/singular_series.hpp"
#include "oracles.hpp"

using namespace ktuple;

namespace {

// G(z) by visiting every d < z and testing squarefreeness directly.
double G_by_enumeration(std::uint64_t z, const Tuple& t) {
    long double total = 0.0L;
    for (std::uint64_t d = 1; d < z; ++d) {
        long double g = 1.0L;
        auto m = d;
        bool keep = true;
        for (std::uint64_t p = 2; p <= m && keep; ++p) {
            if (m % p) continue;
            m /= p;
            const auto nu = t.residue_count(p);
            keep = m % p != 0 && nu < p;
            g *= static_cast<long double>(nu) / static_cast<long double>(p - nu);
        }
        if (keep) total += g;
    }
    return static_cast<double>(total);
}

}  // namespace

TEST_CASE("g values") {
    CHECK(g_value(1, Tuple{0, 2}) == 1.0);
    CHECK(g_value(3, Tuple{0, 2}) == 2.0);
    CHECK(g_value(2, Tuple{0, 2}) == 1.0);
    CHECK(g_value(6, Tuple{0, 2}) == 2.0);
    CHECK_THROWS_AS(g_value(4, Tuple{0, 2}), DomainError);
    CHECK_THROWS_AS(g_value(3, Tuple{0, 2, 4}), InadmissibleError);
}

TEST_CASE("G(z)") {
    CHECK(big_G(2, Tuple{0, 2, 6}).value == 1.0);
    CHECK(big_G(4, Tuple{0, 2}).value == 4.0);
    CHECK(big_G(10, Tuple{0, 2}).value == doctest::Approx(1 + 1 + 2 + 2.0 / 3 + 2 + 2.0 / 5).epsilon(1e-15));
    double previous = 0.0;
    for (std::uint64_t z = 2; z < 300; ++z) {
        const double g = big_G(z, Tuple{0, 2, 6}).value;
        CHECK(g >= previous);
        previous = g;
    }
    for (const Tuple& t : {Tuple{0}, Tuple{0, 2}, Tuple{0, 2, 6}, Tuple{0, 1}, Tuple{0, 2, 4}}) {
        for (std::uint64_t z : {17ULL, 1000ULL, 10000ULL}) {
            CHECK(big_G(z, t).value == doctest::Approx(G_by_enumeration(z, t)).epsilon(1e-13));
        }
    }
    CHECK(big_G(100, Tuple{0, 1}).skipped_primes == 1);
    CHECK(big_G(100, Tuple{0, 2}).skipped_primes == 0);
    CHECK_THROWS_AS(big_G(1, Tuple{0}), DomainError);
}

TEST_CASE("W(z)") {
    CHECK(big_W(3, Tuple{0, 2}).value == 0.5);
    CHECK(big_W(5, Tuple{0, 2}).value == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    const auto w = big_W(5, Tuple{0, 2, 4});
    CHECK(w.value == 0.0);
    REQUIRE(w.vanishing_prime.has_value());
    CHECK(*w.vanishing_prime == 3);
    CHECK_FALSE(big_W(5, Tuple{0, 2}).vanishing_prime.has_value());

    const Tuple t{0, 2, 6, 8};
    long double inverse = 1.0L;
    std::size_t factors = 0;
    for (std::uint64_t p : primes_up_to(9999)) {
        inverse /= 1.0L - static_cast<long double>(t.residue_count(p)) / static_cast<long double>(p);
        ++factors;
    }
    const double product = big_W(10000, t).value * static_cast<double>(inverse);
    CHECK(std::fabs(product - 1.0) <= static_cast<double>(factors) * 0x1p-52);
}

TEST_CASE("sieve upper bound") {
    const double G = 1 + 1 + 2 + 2.0 / 3 + 2 + 2.0 / 5;
    const double W = 1.0 / 14.0;
    CHECK(sieve_upper_bound(Tuple{0, 2}, 1000000, 10) ==
          doctest::Approx(1e6 / G + 100.0 / (W * W * W)).epsilon(1e-14));
    CHECK_THROWS_AS(sieve_upper_bound(Tuple{0, 2, 4}, 1000, 10), InadmissibleError);

    const auto table = sieve_range(0, 1000100);
    for (const Tuple& t : {Tuple{0}, Tuple{0, 2}, Tuple{0, 2, 6}, Tuple{0, 4, 6}}) {
        for (std::uint64_t x : {10000ULL, 100000ULL, 1000000ULL}) {
            const auto z = static_cast<std::uint64_t>(std::pow(static_cast<double>(x), 1.0 / 2.1));
            const auto r = sieve_report_at(table, t, x, z);
            CHECK(r.actual_above_z <= r.actual);
            CHECK(static_cast<double>(r.actual_above_z) <= sieve_upper_bound(t, x, z));
            CHECK(r.ratio_raw <= 1.0);
        }
    }
    const Tuple twin{0, 2};
    CHECK(1e6 / big_G(100, twin).value < 1e6 / big_G(10, twin).value);
}

TEST_CASE("theorem bound") {
    const auto b = theorem_bound(Tuple{0, 2}, 10000000, 0.1);
    const double log_x = std::log(1e7);
    CHECK(b.bound == doctest::Approx(2.1 * 2.1 * 2.0 * oracle::kTwin * 1e7 / (log_x * log_x)).epsilon(1e-12));
    CHECK(b.z == 2154);
    CHECK_FALSE(b.inadmissible);
    CHECK(b.correction > 0.0);

    const auto table = sieve_range(0, 10000002);
    const auto r = sieve_report(table, Tuple{0, 2}, 10000000, 0.1);
    CHECK(r.actual == 58980);
    CHECK(static_cast<double>(r.actual) <= r.theorem_bound);
    CHECK(r.ratio_actual_over_bound == static_cast<double>(r.actual) / r.theorem_bound);

    for (std::uint64_t x : {10000ULL, 100000ULL, 1000000ULL}) {
        CHECK(static_cast<double>(table.count_primes(0, x)) <= theorem_bound(Tuple{0}, x, 0.1).bound);
    }
    CHECK(theorem_bound(Tuple{0, 2, 6}, 100000, 0.2).bound > theorem_bound(Tuple{0, 2, 6}, 100000, 0.1).bound);
    const auto bad = theorem_bound(Tuple{0, 2, 4}, 100000, 0.1);
    CHECK(bad.inadmissible);
    CHECK(bad.bound == 0.0);
    CHECK_THROWS_AS(theorem_bound(Tuple{0, 2}, 15, 0.1), DomainError);
    CHECK_THROWS_AS(theorem_bound(Tuple{0, 2}, 1000, 0.0), DomainError);
}

TEST_CASE("omega constants") {
    CHECK(omega_constants(Tuple{0, 2}).alpha1 == 3);
    CHECK(omega_constants(Tuple{0, 2}).L_estimate == doctest::Approx(2.0 * std::log(std::log(6.0))).epsilon(1e-15));
    CHECK(omega_constants(Tuple{0, 2, 6}).L_estimate ==
          doctest::Approx(3.0 * std::log(std::log(144.0))).epsilon(1e-15));
    // Mertens: sum_{w <= p < z} log p / p - log(z / w) stays bounded.
    CHECK(std::fabs(omega2_deviation(Tuple{0}, 2, 1000000)) < 2.0);
    CHECK(std::fabs(omega2_deviation(Tuple{0, 2}, 100, 1000000)) < 2.0);
    CHECK_THROWS_AS(omega2_deviation(Tuple{0}, 10, 5), DomainError);
}

TEST_CASE("gamma cross check trends to 1") {
    for (const Tuple& t : {Tuple{0}, Tuple{0, 2}, Tuple{0, 2, 6}}) {
        double previous = INFINITY;
        for (std::uint64_t z : {1000ULL, 10000ULL, 100000ULL}) {
            const double r = gamma_cross_check(t, z);
            CHECK(r > 0.0);
            CHECK(std::fabs(r - 1.0) <= previous);
            previous = std::fabs(r - 1.0);
        }
    }
    CHECK_THROWS_AS(gamma_cross_check(Tuple{0, 2, 4}, 100), InadmissibleError);
}
