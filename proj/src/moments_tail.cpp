// moments_tail.cpp

#include "ktuple/moments_tail.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>

#include "ktuple/error.hpp"

namespace ktuple {
namespace {

using boost::multiprecision::cpp_rational;

// Row r of the Stirling triangle, {r over 0..r}.
std::vector<BigInt> stirling_row(unsigned r) {
    std::vector<BigInt> row{1};  // r = 0
    for (unsigned n = 1; n <= r; ++n) {
        std::vector<BigInt> next(n + 1, 0);
        for (unsigned l = 1; l <= n; ++l) {
            next[l] = BigInt(l) * (l < row.size() ? row[l] : BigInt(0)) + row[l - 1];
        }
        row = std::move(next);
    }
    return row;
}

}  // namespace

BigInt stirling2(unsigned r, unsigned l) {
    if (l > r) return 0;
    return stirling_row(r)[l];
}

BigInt surjection_count(unsigned r, unsigned l) {
    if (l > r) return 0;
    BigInt factorial = 1;
    for (unsigned i = 2; i <= l; ++i) factorial *= i;
    return factorial * stirling2(r, l);
}

double empirical_moment(const WindowHistogram& hist, unsigned r) {
    if (hist.x() == 0) throw DomainError("empirical_moment: empty histogram");
    BigInt total = 0;
    const auto counts = hist.counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        total += BigInt(counts[c]) * boost::multiprecision::pow(BigInt(c), r);
    }
    return cpp_rational(total, BigInt(hist.x())).convert_to<double>();
}

double predicted_moment(unsigned r, double lambda) {
    if (r < 1) throw DomainError("predicted_moment: r must be at least 1");
    if (!(lambda > 0.0)) throw DomainError("predicted_moment: lambda must be positive");
    const auto row = stirling_row(r);
    long double sum = 0.0L;
    long double power = 1.0L;
    for (unsigned l = 1; l <= r; ++l) {
        power *= lambda;
        sum += row[l].convert_to<long double>() * power;
    }
    return static_cast<double>(sum);
}

std::uint64_t exact_count(const WindowHistogram& hist, std::size_t k) { return hist.count(k); }

std::uint64_t tail_count(const WindowHistogram& hist, std::size_t k) {
    std::uint64_t total = 0;
    for (std::size_t c = k; c <= hist.max_count(); ++c) total += hist.count(c);
    return total;
}

double poisson_pmf(double lambda, std::uint64_t k) {
    if (!(lambda > 0.0)) throw DomainError("poisson_pmf: lambda must be positive");
    const double kk = static_cast<double>(k);
    return std::exp(kk * std::log(lambda) - lambda - std::lgamma(kk + 1.0));
}

double poisson_tail(double lambda, std::uint64_t k) {
    if (!(lambda > 0.0)) throw DomainError("poisson_tail: lambda must be positive");
    if (k == 0) return 1.0;
    // P(X >= k) = P(k, lambda), the regularised lower incomplete gamma.
    return boost::math::gamma_p(static_cast<double>(k), lambda);
}

double corollary_bound(double k, double lambda) {
    if (!(k >= 1.0)) throw DomainError("corollary_bound: k must be at least 1");
    if (!(lambda > 0.0)) throw DomainError("corollary_bound: lambda must be positive");
    const double scale = lambda >= 1.0 ? lambda : lambda + 1.0;
    return std::exp(-k / (scale * std::numbers::e));
}

double biggerk_bound(double k, double lambda, double h, double delta) {
    if (!(h > std::numbers::e)) throw DomainError("biggerk_bound: h must exceed e");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("biggerk_bound: delta must lie in (0, 1)");
    if (!(k >= 1.0)) throw DomainError("biggerk_bound: k must be at least 1");
    if (!(lambda > 0.0)) throw DomainError("biggerk_bound: lambda must be positive");
    const double log_h = std::log(h);
    const double exponent = std::log(lambda + 1.0) + (1.0 - delta) * std::log(log_h) - std::log(k);
    return std::exp(std::pow(log_h, 1.0 - delta) * exponent);
}

double lambda_of(std::uint64_t x, double h) {
    if (x < 2) throw DomainError("lambda_of: x must be at least 2");
    return h / std::log(static_cast<double>(x));
}

double total_variation(const WindowHistogram& hist, double lambda) {
    const double x = static_cast<double>(hist.x());
    double distance = 0.0;
    double covered = 0.0;
    for (std::size_t c = 0; c <= hist.max_count(); ++c) {
        const double pmf = poisson_pmf(lambda, c);
        covered += pmf;
        distance += std::fabs(static_cast<double>(hist.count(c)) / x - pmf);
    }
    distance += std::max(0.0, 1.0 - covered);
    return distance / 2.0;
}

std::vector<MomentReport> moment_reports(const WindowHistogram& hist, unsigned r_max) {
    const double lambda = lambda_of(hist.x(), hist.h());
    const double lambda_eff = empirical_moment(hist, 1);
    std::vector<MomentReport> out;
    for (unsigned r = 1; r <= r_max; ++r) {
        MomentReport m;
        m.x = hist.x();
        m.h = hist.h();
        m.lambda = lambda;
        m.lambda_eff = lambda_eff;
        m.r = r;
        m.empirical = empirical_moment(hist, r);
        m.predicted = predicted_moment(r, lambda);
        m.ratio = m.empirical / m.predicted;
        m.predicted_eff = lambda_eff > 0.0 ? predicted_moment(r, lambda_eff) : 0.0;
        m.ratio_eff = lambda_eff > 0.0 ? m.empirical / m.predicted_eff : 0.0;
        out.push_back(m);
    }
    return out;
}

std::vector<TailReport> tail_reports(const WindowHistogram& hist, std::size_t k_max) {
    const double lambda = lambda_of(hist.x(), hist.h());
    const double lambda_eff = empirical_moment(hist, 1);
    std::vector<TailReport> out;
    for (std::size_t k = 0; k <= k_max; ++k) {
        TailReport t;
        t.x = hist.x();
        t.h = hist.h();
        t.lambda = lambda;
        t.lambda_eff = lambda_eff;
        t.k = k;
        t.I_count = tail_count(hist, k);
        t.pi_k_count = exact_count(hist, k);
        t.poisson_pmf = poisson_pmf(lambda, k);
        t.poisson_tail = poisson_tail(lambda, k);
        t.poisson_tail_eff = lambda_eff > 0.0 ? poisson_tail(lambda_eff, k) : 0.0;
        if (k >= 1) {
            t.corollary_bound = corollary_bound(static_cast<double>(k), lambda);
            t.corollary_bound_eff =
                lambda_eff > 0.0 ? corollary_bound(static_cast<double>(k), lambda_eff) : 0.0;
        }
        out.push_back(t);
    }
    return out;
}

}  // namespace ktuple
