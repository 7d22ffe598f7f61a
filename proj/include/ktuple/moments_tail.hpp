// moments_tail.hpp
// Moments and tails of the window-count distribution against their Poisson
// predictions.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "ktuple/prime_engine.hpp"

namespace ktuple {

using BigInt = boost::multiprecision::cpp_int;

/// Stirling number of the second kind {r over l}; 0 when l > r.
BigInt stirling2(unsigned r, unsigned l);

/// Number of surjections from an r-set onto an l-set: l! * {r over l}.
BigInt surjection_count(unsigned r, unsigned l);

/// (1/x) sum_c N_c c^r, accumulated exactly before the single division.
double empirical_moment(const WindowHistogram& hist, unsigned r);

/// sum_{l=1}^{r} {r over l} lambda^l, the r-th moment of Poisson(lambda).
/// Requires r >= 1 and lambda > 0.
double predicted_moment(unsigned r, double lambda);

/// pi_k(x; h) = N_k.
std::uint64_t exact_count(const WindowHistogram& hist, std::size_t k);
/// I(x; k, h) = sum_{c >= k} N_c.
std::uint64_t tail_count(const WindowHistogram& hist, std::size_t k);

double poisson_pmf(double lambda, std::uint64_t k);
/// P(X >= k) for X ~ Poisson(lambda), via the regularised incomplete gamma.
double poisson_tail(double lambda, std::uint64_t k);

/// exp(-k/(lambda e)) when lambda >= 1, else exp(-k/((lambda+1) e)).
double corollary_bound(double k, double lambda);

/// exp((log h)^{1-delta} (log(lambda+1) + (1-delta) log log h - log k)).
/// Throws DomainError for h <= e, delta outside (0, 1) or k < 1.
double biggerk_bound(double k, double lambda, double h, double delta);

/// h / log x.
double lambda_of(std::uint64_t x, double h);

/// 1/2 sum_c |N_c/x - pmf(c)|, with the Poisson mass above the largest
/// observed count counted in full.
double total_variation(const WindowHistogram& hist, double lambda);

struct MomentReport {
    std::uint64_t x = 0;
    double h = 0.0;
    double lambda = 0.0;      ///< h / log x
    double lambda_eff = 0.0;  ///< measured first moment
    unsigned r = 0;
    double empirical = 0.0;
    double predicted = 0.0;      ///< at lambda
    double ratio = 0.0;
    double predicted_eff = 0.0;  ///< at lambda_eff
    double ratio_eff = 0.0;
};

struct TailReport {
    std::uint64_t x = 0;
    double h = 0.0;
    double lambda = 0.0;
    double lambda_eff = 0.0;
    std::size_t k = 0;
    std::uint64_t I_count = 0;
    std::uint64_t pi_k_count = 0;
    double poisson_pmf = 0.0;       ///< at lambda
    double poisson_tail = 0.0;      ///< at lambda
    double poisson_tail_eff = 0.0;  ///< at lambda_eff
    double corollary_bound = 0.0;      ///< per window start, at lambda (0 for k = 0)
    double corollary_bound_eff = 0.0;  ///< at lambda_eff
};

/// One report per r = 1..r_max.
std::vector<MomentReport> moment_reports(const WindowHistogram& hist, unsigned r_max);

/// One report per k = 0..k_max.
std::vector<TailReport> tail_reports(const WindowHistogram& hist, std::size_t k_max);

}  // namespace ktuple
