// hl_verify.cpp

#include "ktuple/hl_verify.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <unordered_map>

#include "ktuple/error.hpp"
#include "ktuple/number_theory.hpp"
#include "ktuple/singular_series.hpp"

namespace ktuple {
namespace {

using u64 = std::uint64_t;

constexpr double kLiTolerance = 1e-10;
constexpr double kSingularTarget = 1e-9;

long double integrate_piece(long double a, long double b, unsigned k) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [k](long double t) { return std::pow(std::log(t), -static_cast<long double>(k)); };
    return gauss_kronrod<long double, 31>::integrate(f, a, b, 20, kLiTolerance * 1e-2L);
}

// Von Mangoldt weights over the prime powers in [lo, hi].
class VonMangoldt {
public:
    VonMangoldt(const PrimalityTable& table, u64 hi) : table_(table) {
        for (u64 p : primes_up_to(isqrt(hi))) {
            const double log_p = std::log(static_cast<double>(p));
            for (u64 q = p * p; q <= hi; q *= p) {
                higher_powers_.emplace(q, log_p);
                if (q > hi / p) break;
            }
        }
    }

    double operator()(u64 n) const {
        if (table_.test(n)) return std::log(static_cast<double>(n));
        const auto it = higher_powers_.find(n);
        return it == higher_powers_.end() ? 0.0 : it->second;
    }

    // Table with prime powers (not just primes) flagged.
    PrimalityTable prime_power_table() const {
        std::vector<u64> words(table_.words().begin(), table_.words().end());
        for (const auto& [q, _] : higher_powers_) {
            if (!table_.covers(q)) continue;
            const u64 i = q - table_.base();
            words[i >> 6] |= u64{1} << (i & 63);
        }
        return PrimalityTable(table_.base(), table_.limit(), std::move(words));
    }

private:
    const PrimalityTable& table_;
    std::unordered_map<u64, double> higher_powers_;
};

// (n, prod_i Lambda(n + h_i)) for every n <= x with a nonzero product.
std::vector<std::pair<u64, double>> lambda_products(const PrimalityTable& table, const Tuple& tuple,
                                                    u64 x) {
    const VonMangoldt lambda(table, x + tuple.max());
    const auto powers = lambda.prime_power_table();
    std::vector<std::pair<u64, double>> out;
    for (u64 n : tuple_hits(powers, tuple, x)) {
        double product = 1.0;
        for (u64 h : tuple.offsets()) product *= lambda(n + h);
        out.emplace_back(n, product);
    }
    return out;
}

}  // namespace

double li_k_between(double a, double b, unsigned k) {
    if (a < 2.0 || b < a) throw DomainError("li_k_between: needs 2 <= a <= b");
    if (k == 0) return b - a;
    // Dyadic pieces keep each quadrature panel on a scale where the integrand is smooth.
    long double total = 0.0L;
    long double lo = a;
    while (lo < b) {
        const long double hi = std::min<long double>(b, std::max<long double>(2.0L * lo, lo + 1.0L));
        total += integrate_piece(lo, hi, k);
        lo = hi;
    }
    return static_cast<double>(total);
}

double li_k(double x, unsigned k) {
    if (!(x > 2.0)) return 0.0;
    return li_k_between(2.0, x, k);
}

double hl_envelope(double x, double power) {
    return std::sqrt(x) * std::pow(std::log(x), power);
}

double normalized_error(double abs_error, double x, double power, double scale) {
    return abs_error / (scale * hl_envelope(x, power));
}

namespace {

HLReport make_report(const Tuple& tuple, u64 x, u64 hits, const SingularSeriesValue& s, double li,
                     double lambda_sum) {
    HLReport r;
    r.tuple = tuple;
    r.x = x;
    r.hits = hits;
    r.singular = s.value;
    r.singular_error = s.error_radius;
    r.li = li;
    r.prediction = s.value * li;
    r.abs_error = std::fabs(static_cast<double>(hits) - r.prediction);
    const double xd = static_cast<double>(x);
    r.normalized = normalized_error(r.abs_error, xd, 6.0);
    r.normalized_alt = normalized_error(r.abs_error, xd, static_cast<double>(tuple.size()));
    r.lambda_form_error = std::fabs(lambda_sum - s.value * xd);
    return r;
}

}  // namespace

HLReport hl_error(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x) {
    const auto hits = count_tuple_hits(table, tuple, x);
    const auto s = singular_series(tuple, kSingularTarget);
    const double li = li_k(static_cast<double>(x), static_cast<unsigned>(tuple.size()));
    long double lambda_sum = 0.0L;
    for (const auto& [n, w] : lambda_products(table, tuple, x)) lambda_sum += w;
    return make_report(tuple, x, hits, s, li, static_cast<double>(lambda_sum));
}

double hl_error_lambda(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x) {
    const auto s = singular_series(tuple, kSingularTarget);
    long double lambda_sum = 0.0L;
    for (const auto& [n, w] : lambda_products(table, tuple, x)) lambda_sum += w;
    return std::fabs(static_cast<double>(lambda_sum) - s.value * static_cast<double>(x));
}

std::vector<HLReport> hl_sweep(const PrimalityTable& table, const Tuple& tuple, std::uint64_t start,
                               std::uint64_t stop, std::uint64_t step) {
    if (step == 0) throw DomainError("hl_sweep: step must be positive");
    if (start < 2 || stop < start) throw DomainError("hl_sweep: needs 2 <= start <= stop");
    const u64 last = start + (stop - start) / step * step;
    const auto hits = tuple_hits(table, tuple, last);
    const auto weights = lambda_products(table, tuple, last);
    const auto s = singular_series(tuple, kSingularTarget);
    const auto k = static_cast<unsigned>(tuple.size());

    std::vector<HLReport> out;
    std::size_t hit_pos = 0, weight_pos = 0;
    long double lambda_sum = 0.0L;
    long double li = li_k(static_cast<double>(start), k);
    for (u64 x = start; x <= last; x += step) {
        if (x != start) li += li_k_between(static_cast<double>(x - step), static_cast<double>(x), k);
        while (hit_pos < hits.size() && hits[hit_pos] <= x) ++hit_pos;
        while (weight_pos < weights.size() && weights[weight_pos].first <= x) {
            lambda_sum += weights[weight_pos++].second;
        }
        out.push_back(make_report(tuple, x, hit_pos, s, static_cast<double>(li),
                                  static_cast<double>(lambda_sum)));
        if (x > last - step) break;
    }
    return out;
}

}  // namespace ktuple
