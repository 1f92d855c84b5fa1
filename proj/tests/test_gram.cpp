#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "muntz/gram.hpp"

#include "oracles.hpp"

using namespace muntz;

namespace {

const WeightModel kExpWeight = WeightModel::gamma_exp(0.0, 1.0, 1.0);

// K(x) for w^2 = e^{-2t} at half-integer 2x, as a double
double K_int(int two_x) {
    return oracle::factorial_q(unsigned(two_x)).convert_to<double>() / std::ldexp(1.0, two_x + 1);
}

} // namespace

TEST_CASE("distance on hand-checked examples") {
    // exps = [1], b = 2: dist^2 = K(2) - K(3/2)^2 / K(1) = 3/16
    const auto gs = build_gram(kExpWeight, {1.0});
    REQUIRE(distance_to_span(gs, 2.0) ==
            Catch::Approx(std::sqrt(3.0 / 16.0)).epsilon(1e-9));
    // the same through the exact rational oracle
    REQUIRE(oracle::gram_distance_exact({1}, 2) ==
            Catch::Approx(std::sqrt(3.0 / 16.0)).epsilon(1e-12));
    // exps = [1, 2]
    const auto gs2 = build_gram(kExpWeight, {1.0, 2.0});
    REQUIRE(distance_to_span(gs2, 3.0) ==
            Catch::Approx(oracle::gram_distance_exact({1, 2}, 3)).epsilon(1e-9));
    // norm of the target alone: dist to the empty-ish far space stays below
    REQUIRE(distance_to_span(gs, 2.0) < std::sqrt(K_int(4)));
}

TEST_CASE("all small integer-exponent configurations match the rational oracle") {
    // every nonempty subset of {1..6}, targets inside and outside the span
    for (unsigned mask = 1; mask < 64; ++mask) {
        std::vector<double> exps;
        std::vector<int> iexps;
        for (int k = 1; k <= 6; ++k)
            if (mask & (1u << (k - 1))) {
                exps.push_back(double(k));
                iexps.push_back(k);
            }
        const auto gs = build_gram(kExpWeight, exps);
        for (int b : {7, 9}) {
            INFO("mask = " << mask << " b = " << b);
            const double ref = oracle::gram_distance_exact(iexps, b);
            REQUIRE(distance_to_span(gs, double(b)) == Catch::Approx(ref).epsilon(1e-9));
        }
        // a target inside the span has distance 0
        REQUIRE(distance_to_span(gs, exps.front()) ==
                Catch::Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("distance is minimal over explicit competitor combinations") {
    const std::vector<int> iexps = {1, 2, 3};
    const std::vector<double> exps = {1.0, 2.0, 3.0};
    const int b = 4;
    const auto gs = build_gram(kExpWeight, exps);
    const double dist = distance_to_span(gs, double(b));
    std::mt19937 rng(171717);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double c1 = U(rng), c2 = U(rng), c3 = U(rng);
        // || t^b - sum c_i t^{a_i} ||^2 expanded in moments
        const double cs[3] = {c1, c2, c3};
        double n2 = K_int(2 * b);
        for (int i = 0; i < 3; ++i) {
            n2 -= 2.0 * cs[i] * K_int(iexps[i] + b);
            for (int j = 0; j < 3; ++j) n2 += cs[i] * cs[j] * K_int(iexps[i] + iexps[j]);
        }
        REQUIRE(dist <= std::sqrt(std::max(n2, 0.0)) + 1e-9);
    }
}

TEST_CASE("nesting: distances shrink as the span grows") {
    std::vector<double> exps;
    double prev = 1e300;
    for (int k = 1; k <= 10; ++k) {
        exps.push_back(double(k));
        const auto gs = build_gram(kExpWeight, exps);
        const double d = distance_to_span(gs, 11.5);
        REQUIRE(d <= prev + 1e-12);
        REQUIRE(d >= 0.0);
        prev = d;
    }
}

TEST_CASE("error sweep: decay for dense exponents, plateau for sparse") {
    const auto rows_a =
        error_sweep(kExpWeight, ExponentSequence::arithmetic(1.0, 1.0), 2.5, 20);
    REQUIRE(rows_a.size() == 20);
    REQUIRE(rows_a.front().n == 1);
    REQUIRE(rows_a.back().n == 20);
    for (std::size_t i = 1; i < rows_a.size(); ++i) {
        REQUIRE(rows_a[i].dist <= rows_a[i - 1].dist + 1e-12);
    }
    REQUIRE(rows_a.back().dist < 0.5 * rows_a[1].dist);

    const auto rows_p = error_sweep(kExpWeight, ExponentSequence::power(1.0, 2.0), 2.5, 12);
    REQUIRE(rows_p.size() == 12);
    // plateau: the tail of the sweep stops improving
    REQUIRE(rows_p[11].dist > 0.8 * rows_p[5].dist);
    REQUIRE(rows_p[11].dist > 0.05);

    // finite explicit sequences truncate at their length
    const auto rows_e = error_sweep(
        kExpWeight, ExponentSequence::explicit_list({1.0, 2.0, 3.0}), 4.0, 10);
    REQUIRE(rows_e.size() == 3);
}

TEST_CASE("conditioning is tracked and capped") {
    const auto rows = error_sweep(kExpWeight, ExponentSequence::arithmetic(1.0, 1.0), 2.5, 30,
                                  PrecisionMode::Compensated, 1e24);
    for (const auto& row : rows) {
        REQUIRE(row.cond_estimate >= 1.0);
        REQUIRE(row.cond_estimate <= 1e24);
    }
    // a tight cutoff truncates the sweep early but never throws
    const auto tight = error_sweep(kExpWeight, ExponentSequence::arithmetic(1.0, 1.0), 2.5, 30,
                                   PrecisionMode::Compensated, 1e6);
    REQUIRE(tight.size() < 30);
    REQUIRE_FALSE(tight.empty());
}

TEST_CASE("double vs compensated precision modes") {
    const std::vector<double> exps = {1.0, 2.0, 3.0, 4.0};
    const auto gc = build_gram(kExpWeight, exps, PrecisionMode::Compensated);
    const auto gd = build_gram(kExpWeight, exps, PrecisionMode::Double);
    REQUIRE(distance_to_span(gd, 5.0) ==
            Catch::Approx(distance_to_span(gc, 5.0)).epsilon(1e-6));
    // the compensated mode survives deeper sweeps than plain double
    const auto deep_c = error_sweep(kExpWeight, ExponentSequence::arithmetic(1.0, 0.5), 3.25,
                                    24, PrecisionMode::Compensated);
    const auto deep_d = error_sweep(kExpWeight, ExponentSequence::arithmetic(1.0, 0.5), 3.25,
                                    24, PrecisionMode::Double);
    REQUIRE(deep_c.size() >= deep_d.size());
}

TEST_CASE("gram input guards") {
    REQUIRE_THROWS_AS(build_gram(kExpWeight, {}), DomainError);
    REQUIRE_THROWS_AS(build_gram(kExpWeight, {-1.0}), MomentDivergesError);
    const auto gs = build_gram(kExpWeight, {1.0});
    REQUIRE_THROWS_AS(distance_to_span(gs, -0.75), MomentDivergesError);
}
