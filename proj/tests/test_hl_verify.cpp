#include <doctest.h>

#include <boost/math/special_functions/expint.hpp>
#include <cmath>

#include "ktuple/error.hpp"
#include "ktuple/hl_verify.hpp"
#include "ktuple/number_theory.hpp"
#include "ktuple/singular_series.hpp"
#include "oracles.hpp"

using namespace ktuple;

namespace {

// Lambda(n) by trial factorisation.
double mangoldt(std::uint64_t n) {
    if (n < 2) return 0.0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        auto m = n;
        while (m % p == 0) m /= p;
        return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
    return std::log(static_cast<double>(n));
}

}  // namespace

TEST_CASE("li_k quadrature") {
    CHECK(li_k(2.0, 3) == 0.0);
    CHECK(li_k(1.5, 1) == 0.0);
    CHECK(li_k(1000.0, 0) == doctest::Approx(998.0).epsilon(1e-14));
    const double simpson = oracle::simpson_li(1e6, 1, 1000000);
    CHECK(li_k(1e6, 1) == doctest::Approx(simpson).epsilon(1e-6));
    // For k = 1 the integral is Ei(log x) - Ei(log 2).
    for (double x : {3.0, 100.0, 1e6, 1e9}) {
        const double closed = boost::math::expint(std::log(x)) - boost::math::expint(std::log(2.0));
        CHECK(li_k(x, 1) == doctest::Approx(closed).epsilon(1e-12));
    }
    CHECK(li_k(5500.0, 10) == doctest::Approx(oracle::simpson_li(5500.0, 10, 2000000)).epsilon(1e-9));
    CHECK(li_k(1e5, 3) == doctest::Approx(li_k(1e4, 3) + li_k_between(1e4, 1e5, 3)).epsilon(1e-12));
    CHECK_THROWS_AS(li_k_between(1.0, 3.0, 1), DomainError);
}

TEST_CASE("prime counting through the k = 1 report") {
    const auto table = sieve_range(0, 1000000);
    const auto r = hl_error(table, Tuple{0}, 1000000);
    CHECK(r.hits == 78498);
    CHECK(r.prediction == doctest::Approx(78627).epsilon(1e-5));
    CHECK(r.abs_error == doctest::Approx(129).epsilon(0.01));
    CHECK(r.abs_error == std::fabs(static_cast<double>(r.hits) - r.prediction));
    CHECK(hl_error(table, Tuple{0}, 10000).hits == 1229);
    CHECK(hl_error(table, Tuple{0}, 100000).hits == 9592);
    CHECK(hl_error(table, Tuple{7}, 100000).hits == hl_error(table, Tuple{0}, 100007).hits - 4);
}

TEST_CASE("inadmissible tuple predicts nothing") {
    const auto table = sieve_range(0, 20000);
    const auto r = hl_error(table, Tuple{0, 1}, 10000);
    CHECK(r.hits == 1);
    CHECK(r.prediction == 0.0);
    CHECK(r.abs_error == 1.0);
}

TEST_CASE("von Mangoldt form") {
    const auto table = sieve_range(0, 2000);
    double psi = 0.0;
    for (std::uint64_t n = 1; n <= 100; ++n) psi += mangoldt(n);
    CHECK(hl_error_lambda(table, Tuple{0}, 100) == doctest::Approx(std::fabs(psi - 100.0)).epsilon(1e-12));
    CHECK(hl_error_lambda(table, Tuple{0}, 100) == doctest::Approx(5.95).epsilon(1e-3));

    double pair = 0.0;
    for (std::uint64_t n = 1; n <= 1000; ++n) pair += mangoldt(n) * mangoldt(n + 1);
    CHECK(hl_error_lambda(table, Tuple{0, 1}, 1000) == doctest::Approx(pair).epsilon(1e-12));

    double triple = 0.0;
    for (std::uint64_t n = 1; n <= 1500; ++n) triple += mangoldt(n) * mangoldt(n + 2) * mangoldt(n + 6);
    const double s = singular_series(Tuple{0, 2, 6}, 1e-9).value;
    CHECK(hl_error_lambda(table, Tuple{0, 2, 6}, 1500) ==
          doctest::Approx(std::fabs(triple - s * 1500.0)).epsilon(1e-10));
}

TEST_CASE("normalisation is scale correct") {
    for (double e : {1.0, 3.7, 12345.6}) {
        for (double x : {100.0, 5500.0, 1e6}) {
            CHECK(normalized_error(e, x, 6.0, 2.0) == normalized_error(e, x, 6.0, 1.0) / 2.0);
        }
    }
    const auto table = sieve_range(0, 10000);
    const auto r = hl_error(table, Tuple{0, 2, 6}, 5000);
    CHECK(r.normalized == r.abs_error / hl_envelope(5000.0, 6.0));
    CHECK(r.normalized_alt == r.abs_error / hl_envelope(5000.0, 3.0));
}

TEST_CASE("reports do not depend on segment size") {
    const auto a = sieve_range(0, 300000, {std::size_t{1} << 20, 1});
    const auto b = sieve_range(0, 300000, {std::size_t{1} << 12, 3});
    for (const Tuple& t : {Tuple{0, 2}, Tuple{0, 4, 6, 10}}) {
        const auto ra = hl_error(a, t, 299000);
        const auto rb = hl_error(b, t, 299000);
        CHECK(ra.hits == rb.hits);
        CHECK(ra.abs_error == rb.abs_error);
        CHECK(ra.lambda_form_error == rb.lambda_form_error);
    }
}

TEST_CASE("sweep agrees with pointwise reports") {
    const auto table = sieve_range(0, 20100);
    const Tuple t{0, 2, 6};
    const auto sweep = hl_sweep(table, t, 100, 20000, 997);
    REQUIRE(sweep.size() == 20);
    for (const auto& r : sweep) {
        const auto direct = hl_error(table, t, r.x);
        CHECK(r.hits == direct.hits);
        CHECK(r.prediction == doctest::Approx(direct.prediction).epsilon(1e-11));
        CHECK(r.lambda_form_error == doctest::Approx(direct.lambda_form_error).epsilon(1e-12));
    }
    CHECK_THROWS_AS(hl_sweep(table, t, 100, 200, 0), DomainError);
    CHECK_THROWS_AS(hl_sweep(table, t, 300, 200, 1), DomainError);
}

TEST_CASE("the ten-tuple stays inside the envelope up to 5500") {
    const auto table = sieve_range(0, 5600);
    for (const auto& r : hl_sweep(table, Tuple{0, 2, 6, 8, 12, 18, 20, 26, 30, 32}, 100, 5500, 1)) {
        REQUIRE(r.normalized <= 1.0);
    }
}
