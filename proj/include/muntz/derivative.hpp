#ifndef MUNTZ_DERIVATIVE_HPP
#define MUNTZ_DERIVATIVE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "muntz/errors.hpp"

namespace muntz {

// d/dx F_log(x) by central differences with Richardson extrapolation
// (Ridders' scheme).  `scale` is the characteristic step of F_log near x.
inline double log_derivative(const std::function<double(double)>& F_log, double x, double scale) {
    if (scale <= 0) throw DomainError("log_derivative: scale must be positive");
    constexpr int kTab = 12;
    constexpr double kShrink = 1.6;
    std::array<std::array<double, kTab>, kTab> a{};
    double h = scale * 0.5;
    const double h_min = std::max(std::fabs(x), 1.0) * 1e-12;
    a[0][0] = (F_log(x + h) - F_log(x - h)) / (2 * h);
    double ans = a[0][0];
    double err = std::numeric_limits<double>::max();
    for (int i = 1; i < kTab; ++i) {
        h /= kShrink;
        if (h < h_min)
            throw StepUnderflowError("log_derivative: step underflow at h=" + std::to_string(h));
        a[0][i] = (F_log(x + h) - F_log(x - h)) / (2 * h);
        double fac = kShrink * kShrink;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= kShrink * kShrink;
            const double errt = std::max(std::fabs(a[j][i] - a[j - 1][i]),
                                         std::fabs(a[j][i] - a[j - 1][i - 1]));
            if (errt <= err) {
                err = errt;
                ans = a[j][i];
            }
        }
        if (std::fabs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
    }
    return ans;
}

} // namespace muntz

#endif
