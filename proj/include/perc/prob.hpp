#pragma once

#include <cmath>

namespace perc {

// log(1 - exp(x)) for x <= 0, accurate on both ends (Maechler's split).
inline double log1mexp(double x) noexcept {
    if (x > -0.6931471805599453) return std::log(-std::expm1(x));
    return std::log1p(-std::exp(x));
}

// A probability carried together with log(value) and log(1 - value), so that
// quantities such as p^(W^2) or (1 - p^W)^L survive when the plain value would
// round to 0 or 1.
class Prob {
  public:
    constexpr Prob() = default;

    // Throws std::domain_error unless value is in [0, 1].
    static Prob from_value(double value);
    // log_value in [-inf, 0].
    static Prob from_log(double log_value);
    // From log(1 - value), in [-inf, 0].
    static Prob from_log_complement(double log_complement);
    // From a value and its complement computed independently; value + complement
    // must be 1 up to rounding.
    static Prob from_split(double value, double complement);

    double value() const noexcept { return value_; }
    double complement() const noexcept { return -std::expm1(log_complement_); }
    double log_value() const noexcept { return log_value_; }
    double log_complement() const noexcept { return log_complement_; }

    // value^k for k >= 0, computed as exp(k log value); 0^0 = 1.
    Prob pow(double k) const;
    Prob not_() const noexcept {
        Prob q;
        q.value_ = complement();
        q.log_value_ = log_complement_;
        q.log_complement_ = log_value_;
        return q;
    }

  private:
    double value_ = 0.0;
    double log_value_ = -INFINITY;
    double log_complement_ = 0.0;
};

}  // namespace perc
