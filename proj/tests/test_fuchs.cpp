#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "muntz/fuchs.hpp"

using namespace muntz;

namespace {

// long direct partial product; the omitted factors contribute
// O(|z|^3 sum_{k>N} a_k^{-3})
std::complex<double> log_H_brute(const ExponentSequence& seq, std::complex<double> z,
                                 std::size_t N) {
    CompensatedSum re, im;
    for (std::size_t k = 1; k <= N; ++k) {
        if (seq.finite() && k > seq.size()) break;
        const double a = seq.a(k);
        const std::complex<double> f = std::log((a - z) / (a + z)) + 2.0 * z / a;
        re.add(f.real());
        im.add(f.imag());
    }
    return {re.value(), im.value()};
}

} // namespace

TEST_CASE("product normalization and zeros") {
    const FuchsProduct fp(ExponentSequence::arithmetic(1.0, 1.0));
    const auto h0 = eval_H(fp, {0.0, 0.0});
    REQUIRE(h0.modulus.log_mag == 0.0);
    REQUIRE(h0.modulus.sign == 1);
    REQUIRE(h0.arg == 0.0);
    // exact zeros at the exponents
    for (double a : {1.0, 2.0, 5.0}) {
        const auto hz = eval_H(fp, {a, 0.0});
        REQUIRE(hz.modulus.is_zero());
    }
    REQUIRE_THROWS_AS(eval_H(fp, {-0.5, 1.0}), DomainError);
}

TEST_CASE("unimodular on the imaginary axis") {
    for (const auto& seq :
         {ExponentSequence::arithmetic(1.0, 1.0), ExponentSequence::geometric(1.0, 2.0),
          ExponentSequence::explicit_list({1.0, 2.5, 7.0})}) {
        const FuchsProduct fp(seq);
        for (double y : {0.1, 1.0, 10.0, 100.0}) {
            INFO("y = " << y);
            const auto h = eval_H(fp, {0.0, y});
            REQUIRE(std::fabs(h.modulus.log_mag) <= 1e-8);
        }
    }
}

TEST_CASE("series tail agrees with a long direct product") {
    const auto seq = ExponentSequence::arithmetic(1.0, 1.0);
    const FuchsProduct fp(seq);
    for (std::complex<double> z : {std::complex<double>(0.7, 0.3),
                                   std::complex<double>(2.5, 1.0),
                                   std::complex<double>(0.0, 4.0),
                                   std::complex<double>(12.3, 5.0)}) {
        INFO("z = " << z.real() << " + " << z.imag() << "i");
        const auto h = eval_H(fp, z);
        const auto ref = log_H_brute(seq, z, 4000000);
        REQUIRE(h.modulus.log_mag == Catch::Approx(ref.real()).margin(1e-8));
        REQUIRE(h.arg == Catch::Approx(ref.imag()).margin(1e-8));
    }
}

TEST_CASE("explicit products evaluate factor by factor") {
    const auto seq = ExponentSequence::explicit_list({1.0, 3.0});
    const FuchsProduct fp(seq);
    const std::complex<double> z(2.0, 1.0);
    const std::complex<double> manual = std::log((1.0 - z) / (1.0 + z)) + 2.0 * z +
                                        std::log((3.0 - z) / (3.0 + z)) + 2.0 * z / 3.0;
    const auto h = eval_H(fp, z);
    REQUIRE(h.modulus.log_mag == Catch::Approx(manual.real()).margin(1e-13));
    REQUIRE(h.arg == Catch::Approx(manual.imag()).margin(1e-13));
}

TEST_CASE("upper bound constant on the imaginary axis is one") {
    const FuchsProduct fp(ExponentSequence::arithmetic(1.0, 1.0));
    std::vector<std::complex<double>> grid;
    for (double y : {0.1, 0.5, 1.0, 5.0, 20.0}) grid.emplace_back(0.0, y);
    const auto rep = check_upper_bound(fp, grid);
    REQUIRE(rep.C_fit == 1.0);
    REQUIRE(rep.max_violation <= 1e-9);
}

TEST_CASE("half-plane bounds: fitted constants stable under refinement") {
    const auto seq = ExponentSequence::arithmetic(1.0, 1.0);
    const FuchsProduct fp(seq);
    auto make_grid = [&](int refine) {
        // midpoints between consecutive exponents, rays into the upper
        // quarter plane
        std::vector<std::complex<double>> g;
        for (int k = 1; k <= 6 * refine; ++k) {
            const double x = seq.a(std::size_t(k)) + 0.5;
            for (double t : {0.0, 0.5, 2.0}) g.emplace_back(x, t * x);
        }
        for (double y : {0.1, 1.0, 10.0}) g.emplace_back(0.0, y);
        return g;
    };
    const auto g1 = make_grid(1);
    const auto g2 = make_grid(2);
    const auto up1 = check_upper_bound(fp, g1);
    const auto up2 = check_upper_bound(fp, g2);
    REQUIRE(up1.C_fit >= 1.0);
    REQUIRE(up1.max_violation <= 1e-9);
    REQUIRE(up2.max_violation <= 1e-9);
    // refinement may only tighten within a modest factor
    REQUIRE(std::fabs(std::log(up2.C_fit) - std::log(up1.C_fit)) <= std::log(2.0));

    const auto lo1 = check_lower_bound(fp, g1);
    const auto lo2 = check_lower_bound(fp, g2);
    REQUIRE(lo1.C2_fit > 0.0);
    REQUIRE(lo1.min_margin >= -1e-9);
    REQUIRE(lo2.min_margin >= -1e-9);
    REQUIRE(std::fabs(std::log(lo2.C2_fit) - std::log(lo1.C2_fit)) <= std::log(2.0));
    // the two-sided sandwich is ordered
    REQUIRE(lo1.C2_fit <= up1.C_fit + 1e-12);
}

TEST_CASE("exclusion balls around the zeros") {
    const auto seq = ExponentSequence::arithmetic(1.0, 1.0);
    const FuchsProduct fp(seq);
    REQUIRE(fp.exclusion_radius.has_value());
    REQUIRE(*fp.exclusion_radius == Catch::Approx(1.0 / 3.0));
    // a grid point too close to a zero is rejected
    const std::vector<std::complex<double>> bad = {{2.1, 0.0}};
    REQUIRE_THROWS_AS(check_lower_bound(fp, bad), GridViolationError);
    // sequences without a uniform gap cannot support the lower bound
    const FuchsProduct nogap(ExponentSequence::power(1.0, 0.5));
    REQUIRE_FALSE(nogap.exclusion_radius.has_value());
    const std::vector<std::complex<double>> ok = {{0.0, 1.0}};
    REQUIRE_THROWS_AS(check_lower_bound(nogap, ok), GridViolationError);
    // the upper bound needs no exclusion
    REQUIRE_NOTHROW(check_upper_bound(nogap, ok));
}
