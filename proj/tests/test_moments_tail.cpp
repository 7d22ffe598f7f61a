#include <doctest.h>

#include <cmath>

#include "ktuple/error.hpp"
#include "ktuple/moments_tail.hpp"
#include "oracles.hpp"

using namespace ktuple;

namespace {

const WindowHistogram& tiny_hist() {
    static const auto hist = window_counts(sieve_range(0, 100), 10, 2.0);
    return hist;
}

double poisson_moment_direct(unsigned r, double lambda) {
    long double sum = 0.0L;
    for (unsigned j = 0; j <= 200; ++j) {
        sum += static_cast<long double>(poisson_pmf(lambda, j)) * std::pow(static_cast<long double>(j), r);
    }
    return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("Stirling numbers") {
    CHECK(stirling2(4, 2) == 7);
    CHECK(stirling2(5, 5) == 1);
    CHECK(stirling2(5, 1) == 1);
    CHECK(stirling2(0, 0) == 1);
    CHECK(stirling2(3, 4) == 0);
    CHECK(stirling2(5, 0) == 0);
    for (unsigned r = 0; r <= 8; ++r) {
        for (unsigned l = 0; l <= r; ++l) {
            REQUIRE(stirling2(r, l) == oracle::set_partitions(r, l));
        }
    }
    // {64 over 2} = 2^63 - 1 and {64 over 63} = C(64, 2) need more than native width in between.
    CHECK(stirling2(64, 2) == (BigInt(1) << 63) - 1);
    CHECK(stirling2(64, 63) == 2016);
}

TEST_CASE("surjections") {
    CHECK(surjection_count(3, 2) == 6);
    CHECK(surjection_count(2, 3) == 0);
    CHECK(surjection_count(5, 5) == 120);
    for (unsigned r = 0; r <= 6; ++r) {
        for (unsigned l = 0; l <= 6; ++l) REQUIRE(surjection_count(r, l) == oracle::surjections(r, l));
    }
}

TEST_CASE("falling factorial identity") {
    for (unsigned m = 0; m <= 10; ++m) {
        for (unsigned r = 1; r <= 10; ++r) {
            BigInt lhs = 0;
            for (unsigned l = 0; l <= r; ++l) {
                BigInt binom = 1;
                for (unsigned i = 0; i < l; ++i) binom = binom * (m - i) / (i + 1);
                if (l > m) binom = 0;
                lhs += surjection_count(r, l) * binom;
            }
            REQUIRE(lhs == boost::multiprecision::pow(BigInt(m), r));
        }
    }
}

TEST_CASE("Touchard identity against direct Poisson moments") {
    for (double lambda : {0.5, 1.0, 2.0}) {
        for (unsigned r = 1; r <= 8; ++r) {
            const double direct = poisson_moment_direct(r, lambda);
            CHECK(predicted_moment(r, lambda) == doctest::Approx(direct).epsilon(1e-9));
        }
    }
    CHECK(predicted_moment(1, 0.37) == 0.37);
    CHECK(predicted_moment(2, 1.0) == 2.0);
    CHECK(predicted_moment(3, 1.0) == 5.0);
}

TEST_CASE("empirical moments of the small histogram") {
    const auto& hist = tiny_hist();
    CHECK(empirical_moment(hist, 0) == 1.0);
    CHECK(empirical_moment(hist, 1) == 0.9);
    CHECK(empirical_moment(hist, 2) == 1.1);
    CHECK(exact_count(hist, 1) == 7);
    CHECK(tail_count(hist, 1) == 8);
    CHECK(tail_count(hist, 0) == 10);
    CHECK(exact_count(hist, 3) == 0);
    CHECK(tail_count(hist, 3) == 0);
}

TEST_CASE("empirical moments equal the window-by-window definition") {
    const std::uint64_t x = 10000;
    const auto plain = oracle::plain_sieve(x + 100);
    const auto table = sieve_range(0, x + 100);
    for (double h : {3.0, 9.21, 40.0}) {
        const auto hist = window_counts(table, x, h);
        for (unsigned r = 0; r <= 6; ++r) {
            long double sum = 0.0L;
            for (std::uint64_t n = 1; n <= x; ++n) {
                sum += std::pow(static_cast<long double>(oracle::window_primes(plain, n, h)), r);
            }
            CHECK(empirical_moment(hist, r) == doctest::Approx(static_cast<double>(sum / x)).epsilon(1e-15));
        }
        for (std::size_t k = 0; k <= hist.max_count() + 1; ++k) {
            CHECK(tail_count(hist, k) - tail_count(hist, k + 1) == exact_count(hist, k));
        }
    }
}

TEST_CASE("Poisson distribution") {
    CHECK(poisson_pmf(1.0, 0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(poisson_tail(1.0, 0) == 1.0);
    CHECK(poisson_tail(2.5, 0) == 1.0);
    double direct = 0.0;
    for (unsigned j = 4; j <= 50; ++j) direct += std::exp(-1.0) / std::tgamma(j + 1.0);
    CHECK(poisson_tail(1.0, 4) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(poisson_tail(1.0, 4) == doctest::Approx(0.018988).epsilon(1e-4));
    CHECK(poisson_pmf(30.0, 200) > 0.0);
}

TEST_CASE("corollary bounds") {
    CHECK(corollary_bound(8, 1.0) == doctest::Approx(0.05275).epsilon(1e-3));
    CHECK(corollary_bound(4, 0.5) == doctest::Approx(0.3750).epsilon(1e-3));
    for (int k = 1; k < 30; ++k) CHECK(corollary_bound(k + 1, 1.3) < corollary_bound(k, 1.3));

    const double lambda = 1.0, h = std::exp(std::exp(2.0)), delta = 0.5;
    CHECK(biggerk_bound(8, lambda, h, delta) == doctest::Approx(0.350).epsilon(2e-3));
    const double log_h = std::log(h);
    const double threshold = (lambda + 1.0) * std::pow(log_h, 1.0 - delta);
    CHECK(biggerk_bound(threshold, lambda, h, delta) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(biggerk_bound(threshold * 1.01, lambda, h, delta) < 1.0);
    CHECK_THROWS_AS(biggerk_bound(8, 1.0, 2.0, 0.5), DomainError);
    CHECK_THROWS_AS(biggerk_bound(8, 1.0, 100.0, 1.0), DomainError);
}

TEST_CASE("total variation and reports") {
    const std::uint64_t x = 200000;
    const auto table = sieve_range(0, x + 100);
    const double h = std::log(static_cast<double>(x));
    const auto hist = window_counts(table, x, h);
    const double lambda = lambda_of(x, h);
    CHECK(lambda == doctest::Approx(1.0).epsilon(1e-15));

    double tv = 0.0, mass = 0.0;
    for (std::size_t c = 0; c <= hist.max_count(); ++c) {
        const double pmf = poisson_pmf(lambda, c);
        tv += std::fabs(static_cast<double>(hist.count(c)) / x - pmf);
        mass += pmf;
    }
    tv = 0.5 * (tv + (1.0 - mass));
    CHECK(total_variation(hist, lambda) == doctest::Approx(tv).epsilon(1e-12));

    const auto moments = moment_reports(hist, 4);
    REQUIRE(moments.size() == 4);
    for (const auto& m : moments) {
        CHECK(m.lambda_eff == empirical_moment(hist, 1));
        CHECK(m.predicted == predicted_moment(m.r, m.lambda));
        CHECK(m.ratio == m.empirical / m.predicted);
        CHECK(m.ratio_eff == m.empirical / m.predicted_eff);
    }
    CHECK(moments[0].ratio_eff == doctest::Approx(1.0).epsilon(1e-15));

    const auto tails = tail_reports(hist, 8);
    REQUIRE(tails.size() == 9);
    for (std::size_t k = 0; k + 1 < tails.size(); ++k) {
        CHECK(tails[k].I_count >= tails[k + 1].I_count);
        CHECK(tails[k].I_count - tails[k + 1].I_count == tails[k].pi_k_count);
    }
}
