#ifndef MUNTZ_GRAM_HPP
#define MUNTZ_GRAM_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "muntz/compensated.hpp"
#include "muntz/dd_linalg.hpp"
#include "muntz/errors.hpp"
#include "muntz/exponents.hpp"
#include "muntz/weight.hpp"

namespace muntz {

enum class PrecisionMode { Double, Compensated };

// Gram matrix of {t^{a_i}} in L^2_w, diagonally equilibrated:
// Ghat_ij = K((a_i+a_j)/2) / sqrt(K(a_i) K(a_j)).  The equilibration keeps
// the entries in [0,1] and the dynamic range of the Cholesky factor small;
// the entries themselves are produced from log K evaluated in compensated
// precision so the conditioning of the formula, not of the arithmetic, is
// the limit.
struct GramSystem {
    WeightModel weight = WeightModel::gamma_exp(0.0, 1.0, 1.0);
    std::vector<double> exps;
    DDMatrix L;               // Cholesky factor of the equilibrated Gram matrix
    std::vector<DoubleDouble> half_logK; // (1/2) log K(a_i)
    double cond_estimate = 1; // (max L_ii / min L_ii)^2, cheap lower bound
    PrecisionMode mode = PrecisionMode::Compensated;
};

inline GramSystem build_gram(const WeightModel& w, const std::vector<double>& exps,
                             PrecisionMode mode = PrecisionMode::Compensated) {
    if (exps.empty()) throw DomainError("build_gram: empty exponent set");
    for (double a : exps)
        if (!(a > w.moment_domain_min()))
            throw MomentDivergesError("build_gram: exponent outside the moment domain");
    const std::size_t n = exps.size();
    GramSystem gs;
    gs.weight = w;
    gs.exps = exps;
    gs.mode = mode;
    auto logK = [&](double x) -> DoubleDouble {
        if (mode == PrecisionMode::Double) return DoubleDouble(moment_K(w, x).log_mag);
        return log_moment_K_dd(w, x);
    };
    gs.half_logK.resize(n);
    for (std::size_t i = 0; i < n; ++i) gs.half_logK[i] = dd_ldexp(logK(exps[i]), -1);
    DDMatrix G(n, std::vector<DoubleDouble>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const DoubleDouble delta =
                logK(0.5 * (exps[i] + exps[j])) - gs.half_logK[i] - gs.half_logK[j];
            G[i][j] = G[j][i] = dd_exp(delta);
        }
    int fail = dd_cholesky(G, gs.L);
    if (fail >= 0)
        throw FactorizationError("build_gram: Gram matrix lost positive definiteness", fail);
    double dmin = gs.L[0][0].hi, dmax = gs.L[0][0].hi;
    for (std::size_t i = 1; i < n; ++i) {
        dmin = std::min(dmin, gs.L[i][i].hi);
        dmax = std::max(dmax, gs.L[i][i].hi);
    }
    gs.cond_estimate = (dmax / dmin) * (dmax / dmin);
    return gs;
}

// dist(t^b, span{t^{a_i}})^2 = K(b) (1 - |y|^2) with L y = chat,
// chat_i = K((a_i+b)/2) / sqrt(K(a_i) K(b))
inline double distance_to_span(const GramSystem& gs, double b) {
    const WeightModel& w = gs.weight;
    if (!(b > w.moment_domain_min()))
        throw MomentDivergesError("distance_to_span: target outside the moment domain");
    auto logK = [&](double x) -> DoubleDouble {
        if (gs.mode == PrecisionMode::Double) return DoubleDouble(moment_K(w, x).log_mag);
        return log_moment_K_dd(w, x);
    };
    const DoubleDouble logKb = logK(b);
    const DoubleDouble half_logKb = dd_ldexp(logKb, -1);
    const std::size_t n = gs.exps.size();
    std::vector<DoubleDouble> c(n);
    for (std::size_t i = 0; i < n; ++i)
        c[i] = dd_exp(logK(0.5 * (gs.exps[i] + b)) - gs.half_logK[i] - half_logKb);
    const std::vector<DoubleDouble> y = dd_forward_solve(gs.L, c);
    DoubleDouble nrm2(0.0);
    for (const auto& yi : y) nrm2 += yi * yi;
    DoubleDouble rad = DoubleDouble(1.0) - nrm2;
    if (rad.hi < 0) {
        // roundoff can push an exact-span distance slightly negative
        if (rad.hi < -1e-6 * std::max(1.0, gs.cond_estimate * 1e-30))
            throw NegativeRadicandError("distance_to_span: 1 - |y|^2 = " +
                                        std::to_string(rad.hi));
        rad = DoubleDouble(0.0);
    }
    if (rad.hi == 0) return 0.0;
    return std::exp(0.5 * (logKb.hi + dd_log(rad).to_double()));
}

struct SweepRow {
    std::size_t n;
    double dist;
    double cond_estimate;
};

// dist(t^b, span{t^{a_1..a_n}}) for n = 1..n_max; stops early when the Gram
// factorization fails or the conditioning passes the trust cutoff
inline std::vector<SweepRow> error_sweep(const WeightModel& w, const ExponentSequence& seq,
                                         double b, std::size_t n_max,
                                         PrecisionMode mode = PrecisionMode::Compensated,
                                         double cond_cutoff = 1e24) {
    std::vector<SweepRow> rows;
    std::vector<double> exps;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (seq.finite() && n > seq.size()) break;
        exps.push_back(seq.a(n));
        GramSystem gs;
        try {
            gs = build_gram(w, exps, mode);
        } catch (const FactorizationError&) {
            break;
        }
        if (gs.cond_estimate > cond_cutoff) break;
        rows.push_back({n, distance_to_span(gs, b), gs.cond_estimate});
    }
    return rows;
}

} // namespace muntz

#endif
