// hl_verify.hpp
// Desk-scale checks of the uniform Hardy-Littlewood prediction
// sum_{n <= x} prod_i 1_P(n + h_i) ~ S(H) li_k(x).
//
// li_k(x) is taken as the integral of (log t)^-k over [2, x]. The lower limit
// is a convention: moving it shifts every prediction by an H-independent
// constant times S(H). The von Mangoldt form, which needs no li_k, is
// reported alongside.

#pragma once

#include <cstdint>
#include <vector>

#include "ktuple/prime_engine.hpp"
#include "ktuple/tuple.hpp"

namespace ktuple {

/// Integral of (log t)^-k over [2, x] by adaptive Gauss-Kronrod quadrature
/// (relative tolerance 1e-10); 0 for x <= 2.
double li_k(double x, unsigned k);

/// Integral of (log t)^-k over [a, b], 2 <= a <= b.
double li_k_between(double a, double b, unsigned k);

/// sqrt(x) (log x)^power.
double hl_envelope(double x, double power);

struct HLReport {
    Tuple tuple;
    std::uint64_t x = 0;
    std::uint64_t hits = 0;
    double singular = 0.0;         ///< S(H)
    double singular_error = 0.0;
    double li = 0.0;               ///< li_k(x)
    double prediction = 0.0;       ///< S(H) li_k(x)
    double abs_error = 0.0;        ///< |hits - prediction|
    double normalized = 0.0;       ///< abs_error / (sqrt(x) (log x)^6)
    double normalized_alt = 0.0;   ///< abs_error / (sqrt(x) (log x)^k)
    double lambda_form_error = 0.0;
};

/// abs_error / (scale * sqrt(x) (log x)^power).
double normalized_error(double abs_error, double x, double power, double scale = 1.0);

/// Table must cover [1 + min H, x + max H].
HLReport hl_error(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x);

/// |sum_{n <= x} prod_i Lambda(n + h_i) - S(H) x|.
double hl_error_lambda(const PrimalityTable& table, const Tuple& tuple, std::uint64_t x);

/// Reports for x = start, start + step, ..., <= stop, built incrementally
/// (one tuple scan, one quadrature pass). step >= 1, 2 <= start <= stop.
std::vector<HLReport> hl_sweep(const PrimalityTable& table, const Tuple& tuple,
                               std::uint64_t start, std::uint64_t stop, std::uint64_t step);

}  // namespace ktuple
