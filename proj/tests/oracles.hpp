#ifndef MUNTZ_TESTS_ORACLES_HPP
#define MUNTZ_TESTS_ORACLES_HPP

// Independent reference implementations used only by the tests.  Everything
// here goes through Boost (special functions, multiprecision, quadrature) so
// that agreement with the library is a genuine cross-check, not a tautology.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using rational = boost::multiprecision::cpp_rational;

inline double lgamma_ref(double x) { return boost::math::lgamma(x); }
inline double digamma_ref(double x) { return boost::math::digamma(x); }

inline mp50 lgamma_mp(const mp50& x) { return boost::math::lgamma(x); }

// K(x) = int_0^inf t^{2x} w2(t) dt at 50 digits; the weight enters through
// log w2 so huge arguments never overflow before the exponential wins
inline mp50 moment_mp(const std::function<mp50(const mp50&)>& log_w2, const mp50& x) {
    boost::math::quadrature::tanh_sinh<mp50> unit;
    boost::math::quadrature::exp_sinh<mp50> tail;
    auto f = [&](const mp50& t) {
        if (t <= 0) return mp50(0);
        return exp(2 * x * log(t) + log_w2(t));
    };
    const mp50 a = unit.integrate(f, mp50(0), mp50(1));
    auto g = [&](const mp50& s) { return f(1 + s); };
    return a + tail.integrate(g);
}

// factorial as an exact rational
inline rational factorial_q(unsigned n) {
    boost::multiprecision::cpp_int f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return rational(f);
}

// K(x) for w^2 = e^{-2t} at integer or half-integer 2x: Gamma(2x+1)/2^{2x+1}.
// Half-integer arguments carry a factor sqrt(pi); we track the rational part
// and the power of sqrt(pi) separately.
struct GammaHalf {
    rational q;   // rational coefficient
    int sqrt_pi;  // 0 or 1

    double value() const {
        double v = q.convert_to<double>();
        if (sqrt_pi) v *= std::sqrt(3.14159265358979323846);
        return v;
    }
};

// Gamma(m/2) for positive integer m
inline GammaHalf gamma_half(int m) {
    if (m <= 0) throw std::invalid_argument("gamma_half: need positive argument");
    if (m % 2 == 0) return {factorial_q(unsigned(m / 2 - 1)), 0};
    // Gamma(1/2) = sqrt(pi); Gamma(z+1) = z Gamma(z)
    rational q = 1;
    for (int k = 1; k < m; k += 2) q *= rational(k, 2); // 1/2 * 3/2 * ... * (m-2)/2
    return {q, 1};
}

// exact dist(t^b, span{t^{a_i}}) in L^2 with w^2 = e^{-2t}, all exponents
// positive integers: Gaussian elimination over the rationals
inline double gram_distance_exact(const std::vector<int>& exps, int b) {
    auto K = [](int two_x) { // K(x) with 2x = two_x integer: (two_x)! / 2^{two_x+1}
        rational r = factorial_q(unsigned(two_x));
        boost::multiprecision::cpp_int d = 1;
        d <<= (two_x + 1);
        return r / rational(d);
    };
    const std::size_t n = exps.size();
    std::vector<std::vector<rational>> A(n, std::vector<rational>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) A[i][j] = K(exps[i] + exps[j]);
        A[i][n] = K(exps[i] + b);
    }
    // solve G y = c
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col; r < n; ++r)
            if (abs(A[r][col]) > abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const rational f = A[r][col] / A[col][col];
            for (std::size_t c = col; c <= n; ++c) A[r][c] -= f * A[col][c];
        }
    }
    rational dist2 = K(2 * b);
    for (std::size_t i = 0; i < n; ++i) dist2 -= A[i][n] / A[i][i] * K(exps[i] + b);
    const double v = dist2.convert_to<double>();
    return v > 0 ? std::sqrt(v) : 0.0;
}

// brute-force maximization of v_r(x) = 2 x m - L(x) on a fine grid
inline double envelope_brute(const std::function<double(double)>& logK, double m, double r,
                             int n_pts = 20000) {
    double best = -1e300;
    for (int i = 1; i <= n_pts; ++i) {
        const double x = r * double(i) / double(n_pts);
        best = std::max(best, 2.0 * x * m - 0.5 * logK(x));
    }
    return best;
}

} // namespace oracle

#endif
