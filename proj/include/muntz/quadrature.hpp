#ifndef MUNTZ_QUADRATURE_HPP
#define MUNTZ_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "muntz/compensated.hpp"
#include "muntz/errors.hpp"
#include "muntz/log_scale.hpp"

namespace muntz {

struct DecayHint {
    bool present = false;
    double rate = 0.0;
    double power = 1.0;

    static DecayHint none() { return {}; }
    static DecayHint exponential(double rate, double power) {
        if (rate <= 0 || power <= 0) throw DomainError("DecayHint: rate and power must be positive");
        return {true, rate, power};
    }
};

// Integrand given as t -> log f(t); -inf encodes f(t) = 0.
using LogIntegrand = std::function<double(double)>;

namespace detail {

constexpr double kQuadRelTol = 1e-11;
constexpr int kQuadMaxLevel = 11;
constexpr double kQuadUMax = 6.0;

struct QuadNode {
    double t;
    double log_jac;
};

// tanh-sinh map of (0,1): t = sigma(2s), s = (pi/2) sinh u.
inline bool node_unit(double u, QuadNode& out) {
    const double s = 1.5707963267948966 * std::sinh(u);
    double log_x, log_1mx;
    if (s <= 0) {
        const double l = std::log1p(std::exp(2 * s));
        log_x = 2 * s - l;
        log_1mx = -l;
    } else {
        const double l = std::log1p(std::exp(-2 * s));
        log_1mx = -2 * s - l;
        log_x = -l;
    }
    const double x = (s <= 0) ? std::exp(log_x) : 1.0 - std::exp(log_1mx);
    if (x <= 0.0 || x >= 1.0) return false;
    out.t = x;
    out.log_jac = std::log(3.141592653589793 * std::cosh(u)) + log_x + log_1mx;
    return true;
}

// exp-sinh map of (1,inf): t = 1 + e^s, s = (pi/2) sinh u.
inline bool node_tail(double u, QuadNode& out) {
    const double s = 1.5707963267948966 * std::sinh(u);
    if (s > 700.0) return false;
    out.t = 1.0 + std::exp(s);
    if (!std::isfinite(out.t)) return false;
    out.log_jac = std::log(0.7853981633974483 * std::cosh(u)) + std::log(2.0) + s;
    return true;
}

template <typename NodeFn>
inline LogScaleValue de_integrate(const LogIntegrand& logf, NodeFn&& node_fn, double rel_tol) {
    double prev_log = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> terms;
    for (int level = 3; level <= kQuadMaxLevel; ++level) {
        const double h = 1.0 / double(1 << level);
        terms.clear();
        double max_term = -std::numeric_limits<double>::infinity();
        const long n = std::lround(kQuadUMax / h);
        for (long k = -n; k <= n; ++k) {
            QuadNode nd;
            if (!node_fn(k * h, nd)) continue;
            const double lf = logf(nd.t);
            if (std::isnan(lf) || lf == std::numeric_limits<double>::infinity())
                throw NonFiniteError("integrate: integrand non-finite at t=" + std::to_string(nd.t));
            const double lt = lf + nd.log_jac;
            if (lt == -std::numeric_limits<double>::infinity()) continue;
            terms.push_back(lt);
            if (lt > max_term) max_term = lt;
        }
        if (terms.empty()) return LogScaleValue::zero();
        CompensatedSum acc;
        for (double lt : terms) acc.add(std::exp(lt - max_term));
        const double cur_log = max_term + std::log(acc.value()) + std::log(h);
        if (!std::isnan(prev_log) && level >= 5) {
            const double diff = std::fabs(cur_log - prev_log);
            if (diff <= rel_tol || std::fabs(std::expm1(diff)) <= rel_tol)
                return LogScaleValue::from_log(cur_log);
        }
        prev_log = cur_log;
    }
    throw NoConvergenceError("integrate: adaptive refinement stalled before tolerance");
}

} // namespace detail

// log f over (0,1)
inline LogScaleValue integrate_unit_log(const LogIntegrand& logf,
                                        double rel_tol = detail::kQuadRelTol) {
    return detail::de_integrate(logf, detail::node_unit, rel_tol);
}

// log f over (1,inf); f must decay at least exponentially
inline LogScaleValue integrate_tail_log(const LogIntegrand& logf,
                                        double rel_tol = detail::kQuadRelTol) {
    return detail::de_integrate(logf, detail::node_tail, rel_tol);
}

// Split at t=1 so the algebraic endpoint behavior t^beta and the
// exponential tail are each handled by the matching transformation.
inline LogScaleValue integrate_halfline_log(const LogIntegrand& logf,
                                            double rel_tol = detail::kQuadRelTol) {
    return integrate_unit_log(logf, rel_tol) + integrate_tail_log(logf, rel_tol);
}

inline LogScaleValue integrate_halfline(const std::function<double(double)>& f,
                                        DecayHint hint = DecayHint::none()) {
    (void)hint; // the double-exponential maps cover all admitted decays
    auto logf = [&f](double t) {
        const double v = f(t);
        if (std::isnan(v) || std::isinf(v))
            throw NonFiniteError("integrate_halfline: integrand non-finite at t=" + std::to_string(t));
        if (v < 0) throw DomainError("integrate_halfline: integrand must be nonnegative");
        return v == 0 ? -std::numeric_limits<double>::infinity() : std::log(v);
    };
    return integrate_halfline_log(logf);
}

} // namespace muntz

#endif
