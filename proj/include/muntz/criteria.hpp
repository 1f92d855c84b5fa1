#ifndef MUNTZ_CRITERIA_HPP
#define MUNTZ_CRITERIA_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "muntz/errors.hpp"
#include "muntz/exponents.hpp"
#include "muntz/log_scale.hpp"
#include "muntz/tail_classify.hpp"
#include "muntz/weight.hpp"

namespace muntz {

// cases of the concave profile v_r(x) = 2 x m(r) - (1/2) log K(x):
// (a) strictly decreasing, (b) interior maximum, (c) strictly increasing
enum class Branch { CaseA, CaseB, CaseC };

struct EnvelopeSample {
    double r = 0;
    double f_sharp = 0; // sup_{0 < x <= r} v_r(x)
    double f_thm4 = 0;  // r max{(1/2)(K'/K)(r), 2m(r)} - (1/2) log K(r)
    Branch branch = Branch::CaseB;
    std::optional<double> x_star; // maximizer when CaseB
};

enum class Verdict { Complete, Incomplete, Indeterminate, Inconsistent };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Complete: return "Complete";
        case Verdict::Incomplete: return "Incomplete";
        case Verdict::Indeterminate: return "Indeterminate";
        case Verdict::Inconsistent: return "Inconsistent";
    }
    return "?";
}

struct NecessityResult {
    bool fired = false;
    DivergenceReport report;
    std::vector<EnvelopeSample> samples;
    bool admissible = false;
    bool normal = false;
    double C_cal = 0; // max over samples of f_sharp - f_thm4
    std::string note;
};

struct SufficiencyResult {
    bool fired = false;
    DivergenceReport report;
    double alpha_used = 0;
    double log_B_inf = 0;
    std::pair<double, double> doubling{1.0, 1.0}; // range of h(2r)/h(r)
    std::optional<double> gap_d;
    std::string reason;
};

struct ClosedFormInfo {
    bool applicable = false;
    Verdict verdict = Verdict::Indeterminate;
    DivergenceReport report;
};

struct CriterionReport {
    Verdict verdict = Verdict::Indeterminate;
    NecessityResult necessity;
    SufficiencyResult sufficiency;
    std::optional<ClosedFormInfo> closed_form;
    std::vector<std::string> notes;
};

// Sharp envelope at a single r.  v'_r is monotone decreasing in x (K'/K is
// increasing), so the maximizer is found by bisection.
inline EnvelopeSample envelope_f(const WeightModel& w, const ExponentSequence& seq, double r) {
    if (!(r > 0)) throw DomainError("envelope_f: r must be positive");
    const double m = seq.m_of_r(r);
    auto v = [&](double x) { return 2.0 * x * m - 0.5 * moment_K(w, x).log_mag; };
    auto vp = [&](double x) { return 2.0 * m - 0.5 * log_K_ratio(w, x); };

    EnvelopeSample s;
    s.r = r;
    s.f_thm4 = r * std::max(0.5 * log_K_ratio(w, r), 2.0 * m) - 0.5 * moment_K(w, r).log_mag;

    const double x_lo = std::min(1e-4, 0.5 * r);
    if (vp(x_lo) <= 0) {
        s.branch = Branch::CaseA;
        s.f_sharp = v(x_lo);
        return s;
    }
    if (vp(r) >= 0) {
        s.branch = Branch::CaseC;
        s.f_sharp = v(r);
        return s;
    }
    double lo = x_lo, hi = r;
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo + hi);
        (vp(mid) > 0 ? lo : hi) = mid;
    }
    s.branch = Branch::CaseB;
    s.x_star = 0.5 * (lo + hi);
    s.f_sharp = v(*s.x_star);
    return s;
}

namespace detail {

// cached log K on a global geometric x-grid (2^{-14}..2^{40}, quarter-octave
// steps); keeps the expensive quadrature weights affordable on the r-grid
struct MomentCache {
    std::vector<double> xs;
    std::vector<double> logK;

    explicit MomentCache(const WeightModel& w, double x_min_exp = -14, double x_max_exp = 40) {
        for (double e = x_min_exp; e <= x_max_exp + 1e-9; e += 0.25) {
            const double x = std::pow(2.0, e);
            if (!(x > w.moment_domain_min())) continue;
            xs.push_back(x);
            logK.push_back(moment_K(w, x).log_mag);
        }
    }
};

inline EnvelopeSample envelope_from_cache(const WeightModel& w, const ExponentSequence& seq,
                                          double r, const MomentCache& cache) {
    const double m = seq.m_of_r(r);
    EnvelopeSample s;
    s.r = r;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_i = 0, last_i = 0;
    bool any = false;
    for (std::size_t i = 0; i < cache.xs.size(); ++i) {
        if (cache.xs[i] > r * (1.0 + 1e-12)) break;
        const double v = 2.0 * cache.xs[i] * m - 0.5 * cache.logK[i];
        if (v > best) {
            best = v;
            best_i = i;
        }
        last_i = i;
        any = true;
    }
    if (!any) throw EvaluationError("envelope_from_cache: r below the x-grid");
    s.f_sharp = best;
    if (best_i == 0)
        s.branch = Branch::CaseA;
    else if (best_i == last_i)
        s.branch = Branch::CaseC;
    else {
        s.branch = Branch::CaseB;
        s.x_star = cache.xs[best_i];
    }
    const double logK_r = (cache.xs[last_i] == r)
                              ? cache.logK[last_i]
                              : moment_K(w, r).log_mag;
    s.f_thm4 = r * std::max(0.5 * log_K_ratio(w, r), 2.0 * m) - 0.5 * logK_r;
    return s;
}

} // namespace detail

inline NecessityResult necessity_test(const WeightModel& w, const ExponentSequence& seq,
                                      GridSpec grid = {}) {
    NecessityResult res;
    try {
        const AdmissibilityCertificate cert = admissibility_certificate(w);
        res.admissible = !cert.assumed && cert.all_pass();
        if (cert.assumed) res.note += "admissibility assumed, not verified; ";
    } catch (const Error& e) {
        res.admissible = false;
        res.note += std::string("admissibility: ") + e.what() + "; ";
    }
    try {
        const NormalityReport nr = normality_probe(w, 10);
        res.normal = nr.verdict != NormalityVerdict::Fail;
    } catch (const Error& e) {
        res.normal = false;
        res.note += std::string("normality: ") + e.what() + "; ";
    }

    const bool closed = w.kind() == WeightModel::Kind::GammaExp;
    std::optional<detail::MomentCache> cache;
    if (!closed) cache.emplace(w);
    for (int j = grid.j_min; j <= grid.j_max; ++j) {
        const double r = grid.r(j);
        res.samples.push_back(closed ? envelope_f(w, seq, r)
                                     : detail::envelope_from_cache(w, seq, r, *cache));
    }
    // the tail criterion needs a monotone f; the sharp envelope is increasing
    // analytically, the running max guards against numeric noise
    double run = -std::numeric_limits<double>::infinity();
    std::vector<double> f_reg;
    double f_min = std::numeric_limits<double>::infinity();
    for (auto& s : res.samples) {
        run = std::max(run, s.f_sharp);
        f_reg.push_back(run);
        f_min = std::min(f_min, run);
        res.C_cal = std::max(res.C_cal, s.f_sharp - s.f_thm4);
    }
    // classification of int f/r^2 is invariant under adding a constant;
    // shift so the classifier sees a positive function
    const double shift = (f_min < 1.0) ? 1.0 - f_min : 0.0;

    std::map<double, double> lookup;
    for (int j = grid.j_min; j <= grid.j_max; ++j)
        lookup[grid.r(j)] = f_reg[std::size_t(j - grid.j_min)] + shift;
    auto g = [&lookup](double r) {
        auto it = lookup.find(r);
        if (it == lookup.end()) throw EvaluationError("necessity: off-grid evaluation");
        return LogScaleValue::from_value(it->second);
    };

    std::optional<TailAsymptotic> asym;
    const CountingProfile prof = seq.m_asymptotics();
    if (closed && prof.exact) {
        const double alpha = w.leading_alpha();
        asym = TailAsymptotic{prof.bounded ? 0.0 : 2.0 * alpha * *prof.rho_log};
    }
    res.report = classify_integral_tail(g, asym, grid);
    res.fired = res.report.classification == TailClass::Convergent;
    return res;
}

inline SufficiencyResult sufficiency_test(const WeightModel& w, const ExponentSequence& seq,
                                          GridSpec grid = {2.0, 0, 40}) {
    SufficiencyResult res;
    res.gap_d = seq.gap_check(64);
    if (!res.gap_d) {
        res.reason = "GapFail: infimum of gaps is 0";
        return res;
    }
    const double alpha = w.leading_alpha();
    res.alpha_used = alpha;

    // B_alpha(r) = inf_{x in (0,r)} C^{1/x} x / phi^alpha(x), with C = 1 and
    // the minimization taken over x >= 1/4 (the free constants of the
    // sufficiency condition absorb the x -> 0 end)
    const double r_max = grid.r(grid.j_max);
    std::vector<double> xs, ell;
    for (double e = -2.0; std::pow(2.0, e) <= r_max * (1 + 1e-9); e += 0.25) {
        const double x = std::pow(2.0, e);
        xs.push_back(x);
        ell.push_back(std::log(x) - alpha * x_log_phi(w, x) / x);
    }

    // h(r) = B_alpha(r) Psi^alpha(r) in the log domain, with a running max
    // as the monotone regularization
    std::vector<double> log_h(std::size_t(grid.j_max - grid.j_min) + 1);
    double run_min = std::numeric_limits<double>::infinity();
    std::size_t xi = 0;
    double run_max_h = -std::numeric_limits<double>::infinity();
    for (int j = grid.j_min; j <= grid.j_max; ++j) {
        const double r = grid.r(j);
        while (xi < xs.size() && xs[xi] <= r * (1 + 1e-12)) {
            run_min = std::min(run_min, ell[xi]);
            ++xi;
        }
        double lh = run_min + 2.0 * alpha * seq.m_of_r(r);
        run_max_h = std::max(run_max_h, lh);
        log_h[std::size_t(j - grid.j_min)] = run_max_h;
    }
    res.log_B_inf = run_min;

    // doubling condition: h(2r)/h(r) uniformly bounded both ways
    double lo_ratio = std::numeric_limits<double>::infinity(), hi_ratio = 0;
    bool doubling_ok = true;
    for (std::size_t i = 0; i + 1 < log_h.size(); ++i) {
        const double d = log_h[i + 1] - log_h[i];
        lo_ratio = std::min(lo_ratio, std::exp(d));
        hi_ratio = std::max(hi_ratio, std::exp(d));
        if (std::fabs(d) > std::log(1e6)) doubling_ok = false;
    }
    res.doubling = {lo_ratio, hi_ratio};

    std::map<double, double> lookup;
    for (int j = grid.j_min; j <= grid.j_max; ++j)
        lookup[grid.r(j)] = log_h[std::size_t(j - grid.j_min)];
    auto g = [&lookup](double r) {
        auto it = lookup.find(r);
        if (it == lookup.end()) throw EvaluationError("sufficiency: off-grid evaluation");
        return LogScaleValue::from_log(it->second);
    };

    std::optional<TailAsymptotic> asym;
    const CountingProfile prof = seq.m_asymptotics();
    if (prof.exact && std::isfinite(res.log_B_inf))
        asym = TailAsymptotic{prof.bounded ? 0.0 : 2.0 * alpha * *prof.rho_log};
    res.report = classify_integral_tail(g, asym, grid);

    if (!doubling_ok) {
        res.reason = "DoublingFail: h(2r)/h(r) left the admissible band";
        return res;
    }
    res.fired = res.report.classification == TailClass::Divergent;
    if (!res.fired) res.reason = "tail integral of h/r^2 not divergent";
    return res;
}

// Exact dichotomy for w = e^{-D t^alpha}: complete iff the tail integral of
// Psi^alpha(r)/r^2 diverges.
inline std::optional<ClosedFormInfo> closed_form_test(const WeightModel& w,
                                                      const ExponentSequence& seq,
                                                      GridSpec grid = {}) {
    if (w.kind() != WeightModel::Kind::GammaExp || w.beta() != 0.0) return std::nullopt;
    if (!seq.gap_check(64)) return std::nullopt;
    const double alpha = w.leading_alpha();
    if (alpha < 1.0) {
        // excluded exponent a_k = (1/alpha - 1)/2
        const double bad = 0.5 * (1.0 / alpha - 1.0);
        bool hit = false;
        switch (seq.kind()) {
            case ExponentSequence::Kind::Explicit:
                for (double v : seq.values())
                    if (std::fabs(v - bad) <= 1e-12 * std::max(1.0, bad)) hit = true;
                break;
            default: {
                const std::size_t n = seq.count_below(bad * (1 + 1e-12)) + 1;
                for (std::size_t k = (n > 2 ? n - 2 : 1); k <= n + 2; ++k)
                    if (std::fabs(seq.a(k) - bad) <= 1e-12 * std::max(1.0, bad)) hit = true;
            }
        }
        if (hit) return std::nullopt;
    }

    ClosedFormInfo info;
    info.applicable = true;
    auto g = [&seq, alpha](double r) { return LogScaleValue::from_log(2.0 * alpha * seq.m_of_r(r)); };
    std::optional<TailAsymptotic> asym;
    const CountingProfile prof = seq.m_asymptotics();
    if (prof.exact) asym = TailAsymptotic{prof.bounded ? 0.0 : 2.0 * alpha * *prof.rho_log};
    info.report = classify_integral_tail(g, asym, grid);
    switch (info.report.classification) {
        case TailClass::Divergent: info.verdict = Verdict::Complete; break;
        case TailClass::Convergent: info.verdict = Verdict::Incomplete; break;
        case TailClass::Borderline: info.verdict = Verdict::Indeterminate; break;
    }
    return info;
}

inline CriterionReport decide(const WeightModel& w, const ExponentSequence& seq,
                              GridSpec grid = {}) {
    CriterionReport rep;
    try {
        rep.closed_form = closed_form_test(w, seq, grid);
    } catch (const Error& e) {
        rep.notes.push_back(std::string("closed_form: ") + e.what());
    }
    try {
        rep.sufficiency = sufficiency_test(w, seq, grid);
        if (!rep.sufficiency.reason.empty())
            rep.notes.push_back("sufficiency: " + rep.sufficiency.reason);
    } catch (const Error& e) {
        rep.notes.push_back(std::string("sufficiency: ") + e.what());
    }
    try {
        rep.necessity = necessity_test(w, seq, grid);
        if (!rep.necessity.note.empty()) rep.notes.push_back("necessity: " + rep.necessity.note);
    } catch (const Error& e) {
        rep.notes.push_back(std::string("necessity: ") + e.what());
    }

    const bool nec_ok = rep.necessity.fired && rep.necessity.admissible && rep.necessity.normal;
    if (rep.necessity.fired && !nec_ok)
        rep.notes.push_back("necessity fired but preconditions unverified; not escalated");
    if (rep.sufficiency.fired && nec_ok) {
        rep.verdict = Verdict::Inconsistent;
        rep.notes.push_back("both engines fired: precision failure, not silently resolved");
    } else if (rep.sufficiency.fired) {
        rep.verdict = Verdict::Complete;
    } else if (nec_ok) {
        rep.verdict = Verdict::Incomplete;
    } else {
        rep.verdict = Verdict::Indeterminate;
    }

    if (rep.closed_form && rep.closed_form->applicable) {
        if (rep.verdict != Verdict::Indeterminate &&
            rep.closed_form->verdict != Verdict::Indeterminate &&
            rep.closed_form->verdict != rep.verdict)
            rep.notes.push_back("closed-form verdict disagrees with the engines");
        if (rep.verdict == Verdict::Indeterminate &&
            rep.closed_form->verdict != Verdict::Indeterminate)
            rep.notes.push_back("engines indeterminate; closed form available but not escalated");
    }
    return rep;
}

} // namespace muntz

#endif
