#ifndef MUNTZ_COMPENSATED_HPP
#define MUNTZ_COMPENSATED_HPP

#include <cmath>
#include <limits>

#include "muntz/errors.hpp"

namespace muntz {

// Two-word (double-double) value, hi + lo with |lo| <= ulp(hi)/2.
// The usual error-free transformations; see Dekker/Knuth.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    DoubleDouble() = default;
    DoubleDouble(double h) : hi(h), lo(0.0) {}
    DoubleDouble(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
    double to_double() const { return hi + lo; }
};

namespace detail {

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double v = s - a;
    const double e = (a - (s - v)) + (b - v);
    return {s, e};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    const double e = b - (s - a);
    return {s, e};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    const double e = std::fma(a, b, -p);
    return {p, e};
}

} // namespace detail

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble s = detail::two_sum(a.hi, b.hi);
    DoubleDouble t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
    const double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * DoubleDouble(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * DoubleDouble(q2);
    const double q3 = r.hi / b.hi;
    DoubleDouble q = detail::quick_two_sum(q1, q2);
    return q + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, const DoubleDouble& b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, const DoubleDouble& b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, const DoubleDouble& b) { return a = a * b; }
inline DoubleDouble& operator/=(DoubleDouble& a, const DoubleDouble& b) { return a = a / b; }

inline bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
inline bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
inline bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

inline DoubleDouble dd_abs(const DoubleDouble& a) { return a.hi < 0 ? -a : a; }

inline DoubleDouble dd_sqrt(const DoubleDouble& a) {
    if (a.hi < 0) throw DomainError("dd_sqrt: negative argument");
    if (a.hi == 0) return {0.0, 0.0};
    const double y = std::sqrt(a.hi);
    // one Newton step: y + (a - y^2) / (2 y)
    DoubleDouble r = a - detail::two_prod(y, y);
    return DoubleDouble(y) + r / DoubleDouble(2.0 * y);
}

inline DoubleDouble dd_ldexp(const DoubleDouble& a, int n) {
    return {std::ldexp(a.hi, n), std::ldexp(a.lo, n)};
}

namespace dd_const {
inline const DoubleDouble ln2{6.931471805599452862e-01, 2.3190468138462995584e-17};
// log(2*pi)
inline const DoubleDouble log_2pi{1.8378770664093455557, -7.7565883161344829013e-17};
} // namespace dd_const

inline DoubleDouble dd_exp(const DoubleDouble& a) {
    if (a.hi > 700.0) throw DomainError("dd_exp: overflow");
    if (a.hi < -745.0) return {0.0, 0.0};
    const double m = std::round(a.hi / 0.6931471805599453);
    DoubleDouble r = a - dd_const::ln2 * DoubleDouble(m);
    r = dd_ldexp(r, -9); // |r| < 7e-4
    // Taylor of exp(r)
    DoubleDouble term(1.0), sum(1.0);
    for (int k = 1; k <= 14; ++k) {
        term = term * r / DoubleDouble(double(k));
        sum += term;
    }
    for (int i = 0; i < 9; ++i) sum = sum * sum;
    return dd_ldexp(sum, int(m));
}

inline DoubleDouble dd_log(const DoubleDouble& a) {
    if (a.hi <= 0) throw DomainError("dd_log: nonpositive argument");
    const double y0 = std::log(a.hi);
    // Newton on exp(y) = a
    DoubleDouble e = dd_exp(DoubleDouble(-y0));
    return DoubleDouble(y0) + a * e - DoubleDouble(1.0);
}

// Neumaier running sum for plain doubles.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace muntz

#endif
