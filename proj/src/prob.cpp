#include "perc/prob.hpp"

#include <stdexcept>
#include <string>

namespace perc {

Prob Prob::from_value(double value) {
    if (!(value >= 0.0 && value <= 1.0))
        throw std::domain_error("probability " + std::to_string(value) + " outside [0, 1]");
    Prob p;
    p.value_ = value;
    p.log_value_ = std::log(value);
    p.log_complement_ = std::log1p(-value);
    return p;
}

Prob Prob::from_log(double log_value) {
    if (!(log_value <= 0.0)) throw std::domain_error("log-probability must be <= 0");
    Prob p;
    p.value_ = std::exp(log_value);
    p.log_value_ = log_value;
    p.log_complement_ = log1mexp(log_value);
    return p;
}

Prob Prob::from_log_complement(double log_complement) {
    return from_log(log_complement).not_();
}

Prob Prob::from_split(double value, double complement) {
    if (!(value >= 0.0 && complement >= 0.0) || std::abs(value + complement - 1.0) > 1e-9)
        throw std::domain_error("inconsistent probability split");
    Prob p;
    p.value_ = value;
    p.log_value_ = std::log(value);
    p.log_complement_ = std::log(complement);
    return p;
}

Prob Prob::pow(double k) const {
    if (k < 0.0) throw std::domain_error("negative probability exponent");
    if (k == 0.0) return from_value(1.0);
    return from_log(k * log_value_);
}

}  // namespace perc
