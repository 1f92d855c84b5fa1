#ifndef MUNTZ_FUCHS_HPP
#define MUNTZ_FUCHS_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "muntz/compensated.hpp"
#include "muntz/errors.hpp"
#include "muntz/exponents.hpp"
#include "muntz/log_scale.hpp"

namespace muntz {

// genus-1 canonical product over the exponents:
//   H(z) = prod_k (a_k - z)/(a_k + z) e^{2 z / a_k}
// Unimodular on the imaginary axis; |H| is controlled by powers of Psi(|z|)
// in the right half-plane, with exclusion balls around the zeros a_k for the
// lower bound.
struct FuchsProduct {
    ExponentSequence seq;
    std::optional<double> exclusion_radius; // d/3, present when gap_check succeeds
    double tail_tol = 1e-10;

    explicit FuchsProduct(ExponentSequence s, double tol = 1e-10)
        : seq(std::move(s)), tail_tol(tol) {
        if (auto d = seq.gap_check(64)) exclusion_radius = *d / 3.0;
    }
};

struct HValue {
    LogScaleValue modulus; // sign = 0 exactly at the zeros a_k
    double arg = 0;
};

// log-scale H(z).  Factors with a_k <= A = 10|z| are evaluated directly; the
// rest enter through log((1-u)/(1+u)) + 2u = -2 sum_{m>=1} u^{2m+1}/(2m+1)
// with u = z/a_k, reducing the tail to the closed-form sums S_q = sum a_k^{-q}.
// |u| <= 1/10 makes seven series terms enough for ~1e-16, far below tail_tol;
// the cubic-tail view bounds the remainder by (4/3) sum_{a_k>A} |u|^3.
inline HValue eval_H(const FuchsProduct& fp, std::complex<double> z) {
    if (z.real() < 0) throw DomainError("eval_H: need Re z >= 0");
    const auto& seq = fp.seq;
    if (z == std::complex<double>(0.0, 0.0)) return {LogScaleValue::from_log(0.0), 0.0};
    const double A = 10.0 * std::abs(z);
    CompensatedSum acc_re, acc_im;
    std::size_t n_direct;
    if (seq.finite()) {
        n_direct = seq.size();
    } else {
        n_direct = seq.count_below(A);
        while (seq.a(n_direct + 1) <= A) ++n_direct;
    }
    for (std::size_t k = 1; k <= n_direct; ++k) {
        const double a = seq.a(k);
        if (z == std::complex<double>(a, 0.0)) return {LogScaleValue::zero(), 0.0};
        const std::complex<double> f = std::log((a - z) / (a + z)) + 2.0 * z / a;
        acc_re.add(f.real());
        acc_im.add(f.imag());
    }
    if (!seq.finite()) {
        const std::complex<double> z2 = z * z;
        std::complex<double> zp = z * z2;
        for (int m = 1; m <= 7; ++m) {
            double S;
            try {
                S = seq.sum_inv_pow_tail(double(2 * m + 1), A);
            } catch (const TailBoundError&) {
                throw TailBoundError("eval_H: tail of sum a_k^{-" +
                                     std::to_string(2 * m + 1) + "} diverges");
            }
            const std::complex<double> term = (-2.0 / double(2 * m + 1)) * zp * S;
            acc_re.add(term.real());
            acc_im.add(term.imag());
            zp *= z2;
        }
    }
    return {LogScaleValue::from_log(acc_re.value()), acc_im.value()};
}

inline double dist_to_exponents(const ExponentSequence& seq, std::complex<double> z) {
    const double x = std::max(z.real(), seq.a1());
    double best = std::numeric_limits<double>::infinity();
    if (seq.finite()) {
        for (double a : seq.values())
            best = std::min(best, std::abs(z - std::complex<double>(a, 0.0)));
        return best;
    }
    const std::size_t k0 = std::max<std::size_t>(1, seq.count_below(x));
    for (std::size_t k = (k0 > 2 ? k0 - 2 : 1); k <= k0 + 3; ++k)
        best = std::min(best, std::abs(z - std::complex<double>(seq.a(k), 0.0)));
    return best;
}

struct UpperBoundReport {
    double C_fit = 1;
    double max_violation = 0; // worst log|H| - x(log C_fit + 2m(r)); <= 0
};

struct LowerBoundReport {
    double C2_fit = 0;
    double min_margin = 0; // worst log|H| - x(log C2_fit + 2m(r)); >= 0
};

// least C_fit >= 1 with log|H(z)| <= x (log C_fit + 2 m(r)) on the grid
inline UpperBoundReport check_upper_bound(const FuchsProduct& fp,
                                          const std::vector<std::complex<double>>& grid) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& z : grid) {
        const double x = z.real();
        const HValue h = eval_H(fp, z);
        if (x == 0.0 || h.modulus.is_zero()) continue;
        const double r = std::abs(z);
        worst = std::max(worst, (h.modulus.log_mag - 2.0 * x * fp.seq.m_of_r(r)) / x);
    }
    UpperBoundReport rep;
    rep.C_fit = std::max(1.0, std::exp(worst));
    double viol = -std::numeric_limits<double>::infinity();
    for (const auto& z : grid) {
        const double x = z.real();
        const HValue h = eval_H(fp, z);
        if (h.modulus.is_zero()) continue;
        viol = std::max(viol, h.modulus.log_mag -
                                  x * (std::log(rep.C_fit) + 2.0 * fp.seq.m_of_r(std::abs(z))));
    }
    rep.max_violation = viol;
    return rep;
}

// largest C2_fit with log|H(z)| >= x (log C2_fit + 2 m(r)) on the grid, which
// must keep clear of the exclusion balls B(a_k, d/3)
inline LowerBoundReport check_lower_bound(const FuchsProduct& fp,
                                          const std::vector<std::complex<double>>& grid) {
    if (!fp.exclusion_radius)
        throw GridViolationError("check_lower_bound: sequence has no positive gap");
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& z : grid) {
        if (dist_to_exponents(fp.seq, z) <= *fp.exclusion_radius)
            throw GridViolationError("check_lower_bound: grid point inside an exclusion ball");
        const double x = z.real();
        const HValue h = eval_H(fp, z);
        if (x == 0.0) continue;
        worst = std::min(worst, (h.modulus.log_mag - 2.0 * x * fp.seq.m_of_r(std::abs(z))) / x);
    }
    if (!std::isfinite(worst)) worst = 0.0; // imaginary-axis-only grid: equality at C2 = 1
    LowerBoundReport rep;
    rep.C2_fit = std::exp(worst);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& z : grid) {
        const double x = z.real();
        const HValue h = eval_H(fp, z);
        margin = std::min(margin, h.modulus.log_mag -
                                      x * (worst + 2.0 * fp.seq.m_of_r(std::abs(z))));
    }
    rep.min_margin = margin;
    return rep;
}

} // namespace muntz

#endif
