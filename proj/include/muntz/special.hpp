#ifndef MUNTZ_SPECIAL_HPP
#define MUNTZ_SPECIAL_HPP

#include <cmath>
#include <string>

#include "muntz/compensated.hpp"
#include "muntz/errors.hpp"
#include "muntz/quadrature.hpp"

namespace muntz {

namespace detail {

// even Bernoulli numbers B_2n as exact fractions, n = 1..15
constexpr double kBernNum[15] = {1, -1, 1, -1, 5, -691, 7, -3617, 43867, -174611,
                                 854513, -236364091, 8553103, -23749461029.0, 8615841276005.0};
constexpr double kBernDen[15] = {6, 30, 42, 30, 66, 2730, 6, 510, 798, 330,
                                 138, 2730, 6, 870, 14322};

// Binet remainder J(x) = sum B_2n / (2n(2n-1) x^{2n-1}); the Stirling
// series truncation error is below the first omitted term.
template <typename T>
T binet_series(const T& x, int terms) {
    const T inv = T(1.0) / x;
    const T inv2 = inv * inv;
    T p = inv;
    T sum = T(0.0);
    for (int n = 1; n <= terms; ++n) {
        const T c = T(kBernNum[n - 1]) / T(kBernDen[n - 1] * (2 * n) * (2 * n - 1));
        sum += c * p;
        p = p * inv2;
    }
    return sum;
}

} // namespace detail

// natural log of Gamma(x); Stirling series with the Binet remainder for
// x >= 10, recurrence shift-up below
inline double log_gamma(double x) {
    if (!(x > 0)) throw DomainError("log_gamma: argument must be positive");
    double shift = 0.0;
    while (x < 10.0) {
        shift -= std::log(x);
        x += 1.0;
    }
    const double half_log_2pi = 0.9189385332046727;
    return (x - 0.5) * std::log(x) - x + half_log_2pi + detail::binet_series(x, 8) + shift;
}

inline DoubleDouble log_gamma_dd(DoubleDouble x) {
    if (!(x.hi > 0)) throw DomainError("log_gamma_dd: argument must be positive");
    DoubleDouble shift(0.0);
    while (x.hi < 30.0) {
        shift -= dd_log(x);
        x += DoubleDouble(1.0);
    }
    DoubleDouble r = (x - DoubleDouble(0.5)) * dd_log(x) - x + dd_ldexp(dd_const::log_2pi, -1);
    return r + detail::binet_series(x, 15) + shift;
}

// J(x) = log Gamma(x) - (x - 1/2) log x + x - (1/2) log 2pi; satisfies
// 0 < J(x) < 1/(12x)
inline double binet_J(double x) {
    if (!(x > 0)) throw DomainError("binet_J: argument must be positive");
    if (x >= 10.0) return detail::binet_series(x, 8);
    const double half_log_2pi = 0.9189385332046727;
    return log_gamma(x) - (x - 0.5) * std::log(x) + x - half_log_2pi;
}

inline double digamma(double x) {
    if (!(x > 0)) throw DomainError("digamma: argument must be positive");
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) = log x - 1/(2x) - sum B_2n / (2n x^{2n})
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double p = inv2;
    double sum = 0.0;
    for (int n = 1; n <= 8; ++n) {
        sum += detail::kBernNum[n - 1] / (detail::kBernDen[n - 1] * 2 * n) * p;
        p *= inv2;
    }
    return std::log(x) - 0.5 * inv - sum + shift;
}

// I(z) = 2 int_0^inf t / ((t^2 + z^2)(e^{2 pi t} - 1)) dt, so that
// psi(z) = log z - 1/(2z) - I(z)
inline double gamma_remainder_I(double z) {
    if (!(z > 0)) throw DomainError("gamma_remainder_I: argument must be positive");
    const double two_pi = 6.283185307179586;
    auto logf = [z, two_pi](double t) {
        double log_em1;
        const double a = two_pi * t;
        if (a > 30.0)
            log_em1 = a;
        else
            log_em1 = std::log(std::expm1(a));
        return std::log(2.0) + std::log(t) - std::log(t * t + z * z) - log_em1;
    };
    return integrate_halfline_log(logf).value();
}

struct StirlingEnvelopeParams {
    double D;
    double alpha;
    double C_value;  // C(alpha, D)
    bool C_gt_1;

    StirlingEnvelopeParams(double D_, double alpha_) : D(D_), alpha(alpha_) {
        if (!(D > 0) || !(alpha > 0))
            throw DomainError("StirlingEnvelopeParams: D and alpha must be positive");
        C_value = std::sqrt(2.0 * D * std::exp(1.0) * alpha) /
                  (std::exp(alpha * alpha / 12.0) *
                   std::pow(2.0 * 3.141592653589793 / alpha, alpha / 4.0));
        C_gt_1 = C_value > 1.0;
    }
};

// b(D, alpha, x) = (2 D e alpha x / (2x+1)) *
//   ((2 D e alpha / (2x+1)) (alpha (2x+1) / 2pi)^{alpha/2} e^{-alpha^2/(12(2x+1))})^{1/2x};
// tends to D e alpha as x -> inf
inline double stirling_envelope_b(const StirlingEnvelopeParams& p, double x) {
    if (!(x > 0)) throw DomainError("stirling_envelope_b: argument must be positive");
    const double e1 = std::exp(1.0);
    const double two_pi = 6.283185307179586;
    const double z = 2.0 * x + 1.0;
    const double dea = 2.0 * p.D * e1 * p.alpha;
    const double inner = std::log(dea / z) + 0.5 * p.alpha * std::log(p.alpha * z / two_pi) -
                         p.alpha * p.alpha / (12.0 * z);
    return std::exp(std::log(dea * x / z) + inner / (2.0 * x));
}

} // namespace muntz

#endif
