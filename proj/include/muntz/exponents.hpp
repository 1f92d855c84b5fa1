#ifndef MUNTZ_EXPONENTS_HPP
#define MUNTZ_EXPONENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "muntz/compensated.hpp"
#include "muntz/errors.hpp"
#include "muntz/log_scale.hpp"
#include "muntz/special.hpp"

namespace muntz {

enum class MuntzClass { Divergent, Convergent, UnknownFinite };

struct MuntzSumReport {
    MuntzClass cls;
    std::optional<double> partial_sum; // attached for Explicit lists
};

// Growth class of the counting function m(r); `exact` means derived
// structurally rather than fitted.
struct CountingProfile {
    std::optional<double> rho_log; // m(r) = rho_log * log r + O(1)
    bool bounded = false;
    bool exact = false;
};

class ExponentSequence {
  public:
    enum class Kind { Explicit, Arithmetic, Power, Geometric };

    static ExponentSequence explicit_list(std::vector<double> values) {
        if (values.empty()) throw DomainError("ExponentSequence: empty list");
        std::sort(values.begin(), values.end());
        if (values.front() <= 0) throw DomainError("ExponentSequence: exponents must be positive");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] <= values[i - 1])
                throw DomainError("ExponentSequence: exponents must be strictly increasing");
        ExponentSequence s;
        s.kind_ = Kind::Explicit;
        s.values_ = std::move(values);
        return s;
    }

    // a_k = a1 + (k-1) d
    static ExponentSequence arithmetic(double a1, double d) {
        if (!(a1 > 0) || !(d > 0)) throw DomainError("ExponentSequence: need a1 > 0, d > 0");
        ExponentSequence s;
        s.kind_ = Kind::Arithmetic;
        s.p1_ = a1;
        s.p2_ = d;
        return s;
    }

    // a_k = c k^p
    static ExponentSequence power(double c, double p) {
        if (!(c > 0) || !(p > 0)) throw DomainError("ExponentSequence: need c > 0, p > 0");
        ExponentSequence s;
        s.kind_ = Kind::Power;
        s.p1_ = c;
        s.p2_ = p;
        return s;
    }

    // a_k = a1 q^{k-1}
    static ExponentSequence geometric(double a1, double q) {
        if (!(a1 > 0) || !(q > 1)) throw DomainError("ExponentSequence: need a1 > 0, q > 1");
        ExponentSequence s;
        s.kind_ = Kind::Geometric;
        s.p1_ = a1;
        s.p2_ = q;
        return s;
    }

    Kind kind() const { return kind_; }
    bool finite() const { return kind_ == Kind::Explicit; }
    std::size_t size() const { return values_.size(); } // Explicit only
    const std::vector<double>& values() const { return values_; }

    // k is 1-based
    double a(std::size_t k) const {
        switch (kind_) {
            case Kind::Explicit:
                if (k == 0 || k > values_.size())
                    throw DomainError("ExponentSequence: index out of range");
                return values_[k - 1];
            case Kind::Arithmetic: return p1_ + double(k - 1) * p2_;
            case Kind::Power: return p1_ * std::pow(double(k), p2_);
            case Kind::Geometric: return p1_ * std::pow(p2_, double(k - 1));
        }
        return 0;
    }

    double a1() const { return kind_ == Kind::Explicit ? values_.front() : p1_; }

    // number of k with a_k < r (strict; ties excluded)
    std::size_t count_below(double r) const {
        if (!(r > a1())) return 0;
        if (kind_ == Kind::Explicit)
            return std::size_t(std::lower_bound(values_.begin(), values_.end(), r) -
                               values_.begin());
        // analytic guess, then fix up against the actual terms
        double guess = 1;
        switch (kind_) {
            case Kind::Arithmetic: guess = (r - p1_) / p2_ + 1.0; break;
            case Kind::Power: guess = std::pow(r / p1_, 1.0 / p2_); break;
            case Kind::Geometric: guess = std::log(r / p1_) / std::log(p2_) + 1.0; break;
            default: break;
        }
        std::size_t n = std::size_t(std::max(1.0, std::floor(guess)));
        while (n >= 1 && a(n) >= r) --n;
        while (a(n + 1) < r) ++n;
        return n;
    }

    // m(r) of the counting function: 1/a1 below a1, else sum_{a_k < r} 1/a_k.
    // Structured variants use closed partial-sum forms (harmonic numbers via
    // digamma), so huge r costs O(1).
    double m_of_r(double r) const {
        if (!(r >= 0)) throw DomainError("m_of_r: r must be nonnegative");
        if (r <= a1()) return 1.0 / a1();
        const std::size_t n = count_below(r);
        if (n == 0) return 1.0 / a1();
        switch (kind_) {
            case Kind::Explicit: {
                CompensatedSum s;
                for (std::size_t i = 0; i < n; ++i) s.add(1.0 / values_[i]);
                return s.value();
            }
            case Kind::Arithmetic: {
                const double t = p1_ / p2_;
                return (digamma(t + double(n)) - digamma(t)) / p2_;
            }
            case Kind::Power: {
                if (p2_ == 1.0) return (digamma(1.0 + double(n)) - digamma(1.0)) / p1_;
                return partial_zeta(p2_, n) / p1_;
            }
            case Kind::Geometric: {
                const double rq = 1.0 / p2_;
                return (1.0 - std::pow(rq, double(n))) / (p1_ * (1.0 - rq));
            }
        }
        return 0;
    }

    // Psi(r) = e^{2 m(r)}, kept in log scale
    LogScaleValue psi(double r) const { return LogScaleValue::from_log(2.0 * m_of_r(r)); }

    // largest structural lower bound on gaps a_{k+1} - a_k, or nullopt when
    // the infimum of gaps is 0
    std::optional<double> gap_check(int probe_count = 2) const {
        switch (kind_) {
            case Kind::Explicit: {
                if (values_.size() < 2) return values_.front();
                std::size_t limit = values_.size();
                if (probe_count >= 2) limit = std::min(limit, std::size_t(probe_count));
                double d = std::numeric_limits<double>::infinity();
                for (std::size_t i = 1; i < limit; ++i)
                    d = std::min(d, values_[i] - values_[i - 1]);
                return d > 0 ? std::optional<double>(d) : std::nullopt;
            }
            case Kind::Arithmetic: return p2_;
            case Kind::Power:
                if (p2_ >= 1.0) return p1_ * (std::pow(2.0, p2_) - 1.0); // gap min at k=1
                return std::nullopt;                                      // gaps -> 0
            case Kind::Geometric: return p1_ * (p2_ - 1.0);
        }
        return std::nullopt;
    }

    MuntzSumReport muntz_sum_class() const {
        switch (kind_) {
            case Kind::Explicit: {
                CompensatedSum s;
                for (double v : values_) s.add(1.0 / v);
                return {MuntzClass::UnknownFinite, s.value()};
            }
            case Kind::Arithmetic: return {MuntzClass::Divergent, std::nullopt};
            case Kind::Power:
                return {p2_ <= 1.0 ? MuntzClass::Divergent : MuntzClass::Convergent,
                        std::nullopt};
            case Kind::Geometric: return {MuntzClass::Convergent, std::nullopt};
        }
        return {MuntzClass::UnknownFinite, std::nullopt};
    }

    CountingProfile m_asymptotics() const {
        switch (kind_) {
            case Kind::Explicit: return {0.0, true, false}; // finite list
            case Kind::Arithmetic: return {1.0 / p2_, false, true};
            case Kind::Power:
                if (p2_ > 1.0) return {0.0, true, true};
                if (p2_ == 1.0) return {1.0 / p1_, false, true};
                return {std::nullopt, false, false}; // m grows polynomially
            case Kind::Geometric: return {0.0, true, true};
        }
        return {std::nullopt, false, false};
    }

    // sum_{a_k > A} a_k^{-q}; requires convergence (q large enough)
    double sum_inv_pow_tail(double q, double A) const {
        if (kind_ == Kind::Explicit) {
            CompensatedSum s;
            for (double v : values_)
                if (v > A) s.add(std::pow(v, -q));
            return s.value();
        }
        std::size_t k0 = count_below(A) + 1;
        while (a(k0) <= A) ++k0;
        if (kind_ == Kind::Geometric) {
            const double ratio = std::pow(p2_, -q);
            return std::pow(a(k0), -q) / (1.0 - ratio);
        }
        if (kind_ == Kind::Power && p2_ * q <= 1.0)
            throw TailBoundError("sum_inv_pow_tail: divergent tail");
        // direct terms then Euler-Maclaurin remainder
        const std::size_t direct = 2000;
        CompensatedSum s;
        for (std::size_t k = k0; k < k0 + direct; ++k) s.add(std::pow(a(k), -q));
        const double kk = double(k0 + direct);
        double integral, f_a, fp_a;
        if (kind_ == Kind::Arithmetic) {
            const double A1 = p1_ + (kk - 1.0) * p2_;
            integral = std::pow(A1, 1.0 - q) / (p2_ * (q - 1.0));
            f_a = std::pow(A1, -q);
            fp_a = -q * p2_ * std::pow(A1, -q - 1.0);
        } else { // Power
            const double pq = p2_ * q;
            integral = std::pow(p1_, -q) * std::pow(kk, 1.0 - pq) / (pq - 1.0);
            f_a = std::pow(p1_, -q) * std::pow(kk, -pq);
            fp_a = -pq * std::pow(p1_, -q) * std::pow(kk, -pq - 1.0);
        }
        s.add(integral + 0.5 * f_a - fp_a / 12.0);
        return s.value();
    }

  private:
    static double partial_zeta(double p, std::size_t n) {
        const std::size_t direct = std::min<std::size_t>(n, 100000);
        CompensatedSum s;
        for (std::size_t k = 1; k <= direct; ++k) s.add(std::pow(double(k), -p));
        if (direct < n) {
            // sum_{k=a}^{b} k^{-p} by Euler-Maclaurin
            const double aa = double(direct + 1), bb = double(n);
            const double integral = (std::pow(bb, 1.0 - p) - std::pow(aa, 1.0 - p)) / (1.0 - p);
            s.add(integral + 0.5 * (std::pow(aa, -p) + std::pow(bb, -p)));
            s.add((-p) * (std::pow(bb, -p - 1.0) - std::pow(aa, -p - 1.0)) / 12.0);
        }
        return s.value();
    }

    Kind kind_ = Kind::Explicit;
    std::vector<double> values_;
    double p1_ = 0, p2_ = 0;
};

} // namespace muntz

#endif
