#ifndef MUNTZ_LOG_SCALE_HPP
#define MUNTZ_LOG_SCALE_HPP

#include <cmath>
#include <limits>

#include "muntz/errors.hpp"

namespace muntz {

// Signed number stored as (sign, natural log of magnitude).  Keeps
// Gamma(20001)-scale quantities representable; log_mag is meaningless
// when sign == 0.
struct LogScaleValue {
    int sign = 0;
    double log_mag = -std::numeric_limits<double>::infinity();

    LogScaleValue() = default;
    LogScaleValue(int s, double lm) : sign(s), log_mag(lm) {}

    static LogScaleValue zero() { return {}; }

    static LogScaleValue from_value(double x) {
        if (x == 0.0) return zero();
        if (!std::isfinite(x)) throw NonFiniteError("LogScaleValue: non-finite input");
        return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
    }

    // encodes exp(lm) > 0
    static LogScaleValue from_log(double lm) {
        if (std::isnan(lm)) throw NonFiniteError("LogScaleValue: NaN log magnitude");
        if (lm == -std::numeric_limits<double>::infinity()) return zero();
        return {1, lm};
    }

    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_mag);
    }

    bool is_zero() const { return sign == 0; }

    LogScaleValue operator-() const { return {-sign, log_mag}; }

    LogScaleValue operator*(const LogScaleValue& o) const {
        if (sign == 0 || o.sign == 0) return zero();
        return {sign * o.sign, log_mag + o.log_mag};
    }

    LogScaleValue operator/(const LogScaleValue& o) const {
        if (o.sign == 0) throw DomainError("LogScaleValue: division by zero");
        if (sign == 0) return zero();
        return {sign * o.sign, log_mag - o.log_mag};
    }

    // Pivot on the larger magnitude; never overflows in the log domain.
    LogScaleValue operator+(const LogScaleValue& o) const {
        if (sign == 0) return o;
        if (o.sign == 0) return *this;
        const LogScaleValue& big = (log_mag >= o.log_mag) ? *this : o;
        const LogScaleValue& sml = (log_mag >= o.log_mag) ? o : *this;
        const double delta = sml.log_mag - big.log_mag; // <= 0
        if (big.sign == sml.sign)
            return {big.sign, big.log_mag + std::log1p(std::exp(delta))};
        const double t = std::exp(delta);
        if (t >= 1.0) return zero(); // equal magnitudes, opposite signs
        return {big.sign, big.log_mag + std::log1p(-t)};
    }

    LogScaleValue operator-(const LogScaleValue& o) const { return *this + (-o); }

    // |x|^e * sgn handling for positive values only
    LogScaleValue pow(double e) const {
        if (sign == 0) return e > 0 ? zero() : throw DomainError("LogScaleValue: 0^nonpositive");
        if (sign < 0) throw DomainError("LogScaleValue: pow of negative value");
        return {1, e * log_mag};
    }
};

inline bool log_less(const LogScaleValue& a, const LogScaleValue& b) {
    if (a.sign != b.sign) return a.sign < b.sign;
    if (a.sign == 0) return false;
    return a.sign > 0 ? a.log_mag < b.log_mag : a.log_mag > b.log_mag;
}

} // namespace muntz

#endif
