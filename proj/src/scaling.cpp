#include "perc/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace perc {

namespace {

// floor() that tolerates rounding just below an integer, e.g. (ln 1024 / ln 2)
// evaluating to 9.999999999999998.
double tolerant_floor(double v) { return std::floor(v + 1e-12 * std::max(1.0, std::abs(v))); }

struct Neumaier {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

std::int64_t raw_width(const ScalingSpec& spec, std::uint64_t n) {
    const double base = spec.c1() * std::log(static_cast<double>(n));
    const double grown = std::pow(base, spec.tau());
    return static_cast<std::int64_t>(tolerant_floor(grown)) + spec.c2();
}

ScalingSpec::ScalingSpec(double tau, double c1, std::int64_t c2, double p, Model model)
    : tau_(tau), c1_(c1), c2_(c2), p_(p), model_(model) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be >= 0");
    if (!(c1 > 0.0) || !std::isfinite(c1)) throw std::invalid_argument("C1 must be > 0");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("scaling p must lie in (0, 1)");
    if (model == Model::bond && c2 != 0)
        throw std::invalid_argument("bond width law has no offset (C2 must be 0)");

    // W(n) is nondecreasing in n: double until W >= 1, then bisect.
    std::uint64_t hi = 1;
    while (raw_width(*this, hi) < 1) {
        if (hi >= (std::uint64_t{1} << 62))
            throw std::invalid_argument("width law never reaches 1 for representable depths");
        hi *= 2;
    }
    std::uint64_t lo = hi / 2;  // W(lo) < 1 unless hi == 1
    if (hi == 1) {
        n_min_ = 1;
        return;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (raw_width(*this, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    n_min_ = hi;
}

std::uint64_t width_at(const ScalingSpec& spec, std::uint64_t n) {
    if (n < spec.n_min())
        throw std::invalid_argument("depth " + std::to_string(n) + " is below n_min = " +
                                    std::to_string(spec.n_min()));
    return static_cast<std::uint64_t>(raw_width(spec, n));
}

double diagnostic(const ScalingSpec& spec, std::uint64_t n) {
    const double w = static_cast<double>(width_at(spec, n));
    return std::exp(std::log(static_cast<double>(n)) + w * std::log(spec.p()));
}

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::limit_one: return "limit_one";
        case Regime::limit_zero: return "limit_zero";
        case Regime::critical_interval: return "critical_interval";
        case Regime::unknown: return "unknown";
    }
    return "unknown";
}

std::vector<std::uint64_t> default_ladder() { return {100, 1000, 10000, 100000, 1000000}; }

bool at_threshold(double p, double c1) {
    const double pc = std::exp(-1.0 / c1);
    return std::abs(p - pc) <= 1e-12 * pc;
}

namespace {

std::vector<DiagnosticPoint> ladder_diagnostics(const ScalingSpec& spec) {
    std::vector<DiagnosticPoint> out;
    for (auto n : default_ladder()) {
        if (n < spec.n_min()) continue;
        out.push_back({n, width_at(spec, n), diagnostic(spec, n)});
    }
    return out;
}

}  // namespace

RegimeReport classify_site(const ScalingSpec& spec) {
    if (spec.model() != Model::site) throw std::invalid_argument("classify_site needs a site spec");
    RegimeReport r;
    r.diagnostics = ladder_diagnostics(spec);
    if (spec.tau() > 1.0) {
        r.regime = Regime::limit_one;
        r.p_critical = 1.0;
    } else if (spec.tau() < 1.0) {
        r.regime = Regime::limit_zero;
        r.p_critical = 0.0;
    } else {
        const double pc = std::exp(-1.0 / spec.c1());
        r.p_critical = pc;
        if (at_threshold(spec.p(), spec.c1())) {
            const double c2 = static_cast<double>(spec.c2());
            r.regime = Regime::critical_interval;
            r.a = std::exp(-std::exp((1.0 - c2) / spec.c1()));
            r.b = std::exp(-std::exp(-c2 / spec.c1()));
        } else {
            r.regime = spec.p() < pc ? Regime::limit_one : Regime::limit_zero;
        }
    }
    return r;
}

RegimeReport classify_bond(const ScalingSpec& spec) {
    if (spec.model() != Model::bond) throw std::invalid_argument("classify_bond needs a bond spec");
    RegimeReport r;
    r.diagnostics = ladder_diagnostics(spec);
    const double tau = spec.tau();
    const double pc = std::exp(-1.0 / spec.c1());
    const bool on_threshold = at_threshold(spec.p(), spec.c1());
    if (tau > 1.0) {
        r.regime = Regime::limit_one;
        r.p_critical = 1.0;
    } else if (tau == 1.0 && spec.p() < pc && !on_threshold) {
        r.regime = Regime::limit_one;
    } else if (tau == 0.5 && spec.p() > pc && !on_threshold) {
        r.regime = Regime::limit_zero;
    } else if (tau < 0.5) {
        r.regime = Regime::limit_zero;
        r.p_critical = 0.0;
    } else {
        r.regime = Regime::unknown;
    }
    return r;
}

RegimeReport classify(const ScalingSpec& spec) {
    return spec.model() == Model::site ? classify_site(spec) : classify_bond(spec);
}

LrSchedule::LrSchedule(double alpha, double rho) : alpha_(alpha), rho_(rho) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
}

double LrSchedule::step(std::uint64_t t) const noexcept {
    return alpha_ / std::pow(static_cast<double>(t) + 1.0, rho_);
}

double lr_sum(const LrSchedule& sched, std::uint64_t steps) {
    if (steps == 0) throw std::invalid_argument("lr_sum needs T >= 1");
    Neumaier acc;
    for (std::uint64_t t = 0; t < steps; ++t) acc.add(sched.step(t));
    return acc.value();
}

std::vector<double> lr_prefix_sums(const LrSchedule& sched, std::uint64_t steps) {
    std::vector<double> out;
    out.reserve(steps);
    Neumaier acc;
    for (std::uint64_t t = 0; t < steps; ++t) {
        acc.add(sched.step(t));
        out.push_back(acc.value());
    }
    return out;
}

TrainingBudget training_budget(std::uint64_t n, std::uint64_t width, double p,
                               const LrSchedule& sched, double c) {
    if (n == 0 || width == 0) throw std::invalid_argument("budget needs n >= 1 and W >= 1");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("budget p must lie in (0, 1]");
    const bool harmonic = sched.rho() == 1.0;
    const double c_max = harmonic ? 1.0 : 1.0 / (1.0 - sched.rho());
    if (!(c > 0.0 && c < c_max))
        throw std::invalid_argument("c must lie in (0, " + std::to_string(c_max) + ")");

    const double w = static_cast<double>(width);
    // log of the exponent c n p^(W^2)
    const double log_rate = std::log(c) + std::log(static_cast<double>(n)) + w * w * std::log(p);
    const double rate = std::exp(log_rate);
    if (harmonic) return {std::exp(rate), rate};
    return {rate, log_rate};
}

}  // namespace perc
