#ifndef MUNTZ_DD_LINALG_HPP
#define MUNTZ_DD_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "muntz/compensated.hpp"

namespace muntz {

using DDMatrix = std::vector<std::vector<DoubleDouble>>;

// Cholesky A = L L^T in double-double precision.  Returns the index of the
// pivot where positive definiteness was lost, or -1 on success; L is valid
// for the leading minor up to that pivot.
inline int dd_cholesky(const DDMatrix& A, DDMatrix& L) {
    const std::size_t n = A.size();
    L.assign(n, std::vector<DoubleDouble>(n, DoubleDouble(0.0)));
    for (std::size_t j = 0; j < n; ++j) {
        DoubleDouble diag = A[j][j];
        for (std::size_t k = 0; k < j; ++k) diag -= L[j][k] * L[j][k];
        if (!(diag.hi > 0)) return int(j);
        L[j][j] = dd_sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            DoubleDouble s = A[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
            L[i][j] = s / L[j][j];
        }
    }
    return -1;
}

// Solve L y = b (forward substitution).
inline std::vector<DoubleDouble> dd_forward_solve(const DDMatrix& L,
                                                  const std::vector<DoubleDouble>& b) {
    const std::size_t n = b.size();
    std::vector<DoubleDouble> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        DoubleDouble s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= L[i][k] * y[k];
        y[i] = s / L[i][i];
    }
    return y;
}

// Largest eigenvalue of a symmetric tridiagonal matrix (diag d, off-diag e)
// by Sturm-sequence bisection.
inline double tridiag_largest_eigenvalue(const std::vector<double>& d,
                                         const std::vector<double>& e) {
    const std::size_t n = d.size();
    double lo = d[0], hi = d[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::fabs(e[i - 1]) : 0.0) +
                         (i + 1 < n ? std::fabs(e[i]) : 0.0);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    auto count_below = [&](double x) {
        // number of eigenvalues < x
        int cnt = 0;
        double q = d[0] - x;
        if (q < 0) ++cnt;
        for (std::size_t i = 1; i < n; ++i) {
            const double denom = (q == 0.0) ? 1e-300 : q;
            q = d[i] - x - e[i - 1] * e[i - 1] / denom;
            if (q < 0) ++cnt;
        }
        return cnt;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) == int(n))
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace muntz

#endif
