#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "muntz/criteria.hpp"

#include "oracles.hpp"

using namespace muntz;

namespace {

const WeightModel kExpWeight = WeightModel::gamma_exp(0.0, 1.0, 1.0);

double v_r(const WeightModel& w, double m, double x) {
    return 2.0 * x * m - 0.5 * moment_K(w, x).log_mag;
}

} // namespace

TEST_CASE("sharp envelope against a brute-force grid maximization") {
    const auto pow2 = ExponentSequence::power(1.0, 2.0);
    auto logK = [](double x) { return moment_K(kExpWeight, x).log_mag; };
    for (double r : {1e2, 1e3, 1e4}) {
        INFO("r = " << r);
        const auto s = envelope_f(kExpWeight, pow2, r);
        const double brute = oracle::envelope_brute(logK, pow2.m_of_r(r), r, 100000);
        // the brute grid maximum is a lower bound of the true sup
        REQUIRE(s.f_sharp >= brute - 1e-9);
        REQUIRE(s.f_sharp <= brute + 1e-2);
        // bounded m: interior maximum
        REQUIRE(s.branch == Branch::CaseB);
        REQUIRE(s.x_star.has_value());
    }
}

TEST_CASE("envelope branches") {
    // a_k = k has m ~ log r, which dominates (1/2)K'/K at x = r: profile
    // still increasing at the right end
    const auto arith = ExponentSequence::arithmetic(1.0, 1.0);
    const auto s = envelope_f(kExpWeight, arith, 100.0);
    REQUIRE(s.branch == Branch::CaseC);
    REQUIRE(s.f_sharp == Catch::Approx(v_r(kExpWeight, arith.m_of_r(100.0), 100.0)).epsilon(1e-12));

    // a very slowly decaying weight pushes K'/K up so far that the profile
    // decreases from the start
    const WeightModel slow = WeightModel::gamma_exp(0.0, std::exp(-10.0), 1.0);
    const auto geo = ExponentSequence::geometric(1.0, 2.0);
    const auto sa = envelope_f(slow, geo, 10.0);
    REQUIRE(sa.branch == Branch::CaseA);

    REQUIRE_THROWS_AS(envelope_f(kExpWeight, arith, 0.0), DomainError);
}

TEST_CASE("profile concavity and envelope dominance") {
    const auto seq = ExponentSequence::power(1.0, 2.0);
    std::mt19937 rng(424242);
    for (double r : {10.0, 1000.0}) {
        const double m = seq.m_of_r(r);
        // midpoint concavity of v_r on a geometric triple grid
        for (double x = 1e-3; 4.0 * x <= r; x *= 2.0) {
            const double vl = v_r(kExpWeight, m, x);
            const double vm = v_r(kExpWeight, m, 2.0 * x);
            const double vh = v_r(kExpWeight, m, 4.0 * x);
            // x-midpoint of the triple (x, 2x, 4x) is not 2x; use the chord
            const double lam = (2.0 * x - x) / (4.0 * x - x);
            REQUIRE(vm >= (1.0 - lam) * vl + lam * vh - 1e-8);
        }
        // f_sharp dominates v_r(x) at random x
        const auto s = envelope_f(kExpWeight, seq, r);
        std::uniform_real_distribution<double> U(1e-6, 1.0);
        for (int i = 0; i < 100; ++i) {
            const double x = r * U(rng);
            REQUIRE(s.f_sharp >= v_r(kExpWeight, m, x) - 1e-9);
        }
    }
}

TEST_CASE("envelope sample fields are coherent on a grid") {
    const auto seq = ExponentSequence::geometric(1.0, 2.0);
    double prev = -1e300;
    for (int j = 0; j <= 20; ++j) {
        const double r = std::pow(2.0, j);
        const auto s = envelope_f(kExpWeight, seq, r);
        REQUIRE(s.r == r);
        // f_sharp is nondecreasing in r (sup over a growing family)
        REQUIRE(s.f_sharp >= prev - 1e-10);
        prev = s.f_sharp;
    }
}

TEST_CASE("necessity engine on the exponential weight") {
    // sparse sequences: the tail integral converges and the engine fires
    for (const auto& seq :
         {ExponentSequence::geometric(1.0, 2.0), ExponentSequence::power(1.0, 2.0),
          ExponentSequence::arithmetic(1.0, 4.0)}) {
        const auto res = necessity_test(kExpWeight, seq);
        REQUIRE(res.fired);
        REQUIRE(res.admissible);
        REQUIRE(res.normal);
        REQUIRE(res.report.classification == TailClass::Convergent);
    }
    // dense sequences: integral diverges, no incompleteness claim
    for (double d : {0.5, 1.0, 2.0}) {
        const auto res = necessity_test(kExpWeight, ExponentSequence::arithmetic(1.0, d));
        REQUIRE_FALSE(res.fired);
        REQUIRE(res.report.classification == TailClass::Divergent);
        REQUIRE(res.report.method == TailMethod::ExactAsymptotic);
    }
    // calibration gap between the sharp envelope and the r-evaluated bound
    const auto res = necessity_test(kExpWeight, ExponentSequence::geometric(1.0, 2.0));
    REQUIRE(res.C_cal >= 0.0);
    for (const auto& s : res.samples) REQUIRE(s.f_sharp <= s.f_thm4 + res.C_cal + 1e-12);
}

TEST_CASE("sufficiency engine on the exponential weight") {
    const auto res = sufficiency_test(kExpWeight, ExponentSequence::arithmetic(1.0, 1.0));
    REQUIRE(res.fired);
    REQUIRE(res.gap_d == 1.0);
    REQUIRE(std::isfinite(res.log_B_inf));
    REQUIRE(res.doubling.first >= 1e-6);
    REQUIRE(res.doubling.second <= 1e6);
    // B = inf x/phi^alpha is bounded below by the Stirling envelope minimum
    const StirlingEnvelopeParams p(1.0, 1.0);
    double b_min = 1e300;
    for (double x = 0.25; x <= 16.0; x *= 1.1)
        b_min = std::min(b_min, stirling_envelope_b(p, x));
    REQUIRE(std::exp(res.log_B_inf) >= b_min - 1e-9);

    // gaps tending to zero disable the sufficiency route
    const auto gf = sufficiency_test(kExpWeight, ExponentSequence::power(1.0, 0.5));
    REQUIRE_FALSE(gf.fired);
    REQUIRE_FALSE(gf.gap_d.has_value());
    REQUIRE(gf.reason.find("GapFail") == 0);

    // sparse sequence: h/r^2 integrable, engine stays silent
    const auto geo = sufficiency_test(kExpWeight, ExponentSequence::geometric(1.0, 2.0));
    REQUIRE_FALSE(geo.fired);
    REQUIRE(geo.report.classification == TailClass::Convergent);
}

TEST_CASE("closed-form dichotomy") {
    const auto cf = closed_form_test(kExpWeight, ExponentSequence::arithmetic(1.0, 1.0));
    REQUIRE(cf.has_value());
    REQUIRE(cf->applicable);
    REQUIRE(cf->verdict == Verdict::Complete);
    const auto cf2 = closed_form_test(kExpWeight, ExponentSequence::power(1.0, 2.0));
    REQUIRE(cf2->verdict == Verdict::Incomplete);
    // the boundary case 2 alpha rho = 1 is complete (divergent tail)
    const auto cfb = closed_form_test(kExpWeight, ExponentSequence::arithmetic(1.0, 2.0));
    REQUIRE(cfb->verdict == Verdict::Complete);
    REQUIRE(cfb->report.method == TailMethod::ExactAsymptotic);

    // outside the closed-form family
    REQUIRE_FALSE(closed_form_test(WeightModel::gamma_exp(0.5, 1.0, 1.0),
                                   ExponentSequence::arithmetic(1.0, 1.0))
                      .has_value());
    REQUIRE_FALSE(closed_form_test(kExpWeight, ExponentSequence::power(1.0, 0.5)).has_value());
    // excluded exponent for alpha < 1: a_k = (1/alpha - 1)/2
    const WeightModel w4 = WeightModel::gamma_exp(0.0, 1.0, 0.25);
    REQUIRE_FALSE(
        closed_form_test(w4, ExponentSequence::explicit_list({1.0, 1.5, 2.0})).has_value());
    REQUIRE(closed_form_test(w4, ExponentSequence::explicit_list({1.0, 1.6, 2.0})).has_value());
}

TEST_CASE("combined decision concordance battery") {
    struct Row {
        ExponentSequence seq;
        Verdict expect;
    };
    const std::vector<Row> rows = {
        {ExponentSequence::arithmetic(1.0, 0.5), Verdict::Complete},
        {ExponentSequence::arithmetic(1.0, 1.0), Verdict::Complete},
        {ExponentSequence::arithmetic(1.0, 2.0), Verdict::Complete},
        {ExponentSequence::arithmetic(1.0, 4.0), Verdict::Incomplete},
        {ExponentSequence::power(1.0, 2.0), Verdict::Incomplete},
        {ExponentSequence::geometric(1.0, 2.0), Verdict::Incomplete},
    };
    for (const auto& row : rows) {
        const auto rep = decide(kExpWeight, row.seq);
        REQUIRE(rep.verdict == row.expect);
        REQUIRE(rep.verdict != Verdict::Inconsistent);
        // the closed form applies to all battery rows and must agree
        REQUIRE(rep.closed_form.has_value());
        REQUIRE(rep.closed_form->applicable);
        REQUIRE(rep.closed_form->verdict == row.expect);
    }
}

TEST_CASE("indeterminate outcomes are honest") {
    // borderline-ish: d slightly above 2 -> exact path decides Incomplete,
    // but a finite explicit list can never fire either engine
    const auto ex = ExponentSequence::explicit_list({1.0, 2.0, 3.0});
    const auto rep = decide(kExpWeight, ex);
    // finite lists are never complete, and necessity fires (bounded m)
    REQUIRE(rep.verdict == Verdict::Incomplete);
    REQUIRE_FALSE(rep.sufficiency.fired);
}
