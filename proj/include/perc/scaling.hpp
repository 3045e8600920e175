#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perc/topology.hpp"

namespace perc {

// Width law W(n) = floor((C1 ln n)^tau) + C2 for a network of depth n.
// The logarithm is natural: the threshold exp(-1/C1) only matches that base.
class ScalingSpec {
  public:
    // Throws std::invalid_argument for tau < 0, c1 <= 0, p outside (0, 1),
    // a nonzero c2 under the bond model, or a law that never reaches width 1.
    ScalingSpec(double tau, double c1, std::int64_t c2, double p, Model model);

    double tau() const noexcept { return tau_; }
    double c1() const noexcept { return c1_; }
    std::int64_t c2() const noexcept { return c2_; }
    double p() const noexcept { return p_; }
    Model model() const noexcept { return model_; }

    // Smallest depth n with W(n) >= 1.
    std::uint64_t n_min() const noexcept { return n_min_; }

  private:
    double tau_;
    double c1_;
    std::int64_t c2_;
    double p_;
    Model model_;
    std::uint64_t n_min_ = 1;
};

// W(n) without the n_min check; may be < 1.
std::int64_t raw_width(const ScalingSpec& spec, std::uint64_t n);

// Throws std::invalid_argument for n < spec.n_min().
std::uint64_t width_at(const ScalingSpec& spec, std::uint64_t n);

// n p^(W(n)), evaluated in log space. Its trend along n predicts the limit:
// -> 0 means the crossing probability tends to 1, -> inf means it tends to 0.
double diagnostic(const ScalingSpec& spec, std::uint64_t n);

enum class Regime { limit_one, limit_zero, critical_interval, unknown };

const char* to_string(Regime r) noexcept;

struct DiagnosticPoint {
    std::uint64_t n;
    std::uint64_t width;
    double value;  // n p^W
};

struct RegimeReport {
    Regime regime = Regime::unknown;
    // Critical removal probability when the classification determines it.
    std::optional<double> p_critical;
    // Oscillation range of the crossing probability; set only for
    // Regime::critical_interval, with 0 < a <= b < 1.
    std::optional<double> a;
    std::optional<double> b;
    std::vector<DiagnosticPoint> diagnostics;
};

// Depth ladder used for diagnostics and regime checks.
std::vector<std::uint64_t> default_ladder();

// p == exp(-1/C1) test used by the classifiers (relative tolerance 1e-12).
bool at_threshold(double p, double c1);

RegimeReport classify_site(const ScalingSpec& spec);
RegimeReport classify_bond(const ScalingSpec& spec);
RegimeReport classify(const ScalingSpec& spec);

// Step sizes alpha / (t+1)^rho.
class LrSchedule {
  public:
    LrSchedule(double alpha, double rho);
    double alpha() const noexcept { return alpha_; }
    double rho() const noexcept { return rho_; }
    double step(std::uint64_t t) const noexcept;

  private:
    double alpha_;
    double rho_;
};

// sum_{t=0}^{T-1} alpha / (t+1)^rho, Neumaier-compensated. Requires T >= 1.
double lr_sum(const LrSchedule& sched, std::uint64_t steps);

// All prefix sums: out[k] = lr_sum(sched, k + 1), k in 0..T-1.
std::vector<double> lr_prefix_sums(const LrSchedule& sched, std::uint64_t steps);

// Largest training horizon for which a dropconnect network of depth n, width W
// still provably fails to move: T = exp(c n p^(W^2)) for rho < 1 and
// T = exp(exp(c n p^(W^2))) for rho = 1. Reported in log space.
struct TrainingBudget {
    double log_steps;      // ln T
    double log_log_steps;  // ln ln T
};

// Throws std::invalid_argument unless c is in (0, 1/(1-rho)) for rho < 1 or
// (0, 1) for rho = 1.
TrainingBudget training_budget(std::uint64_t n, std::uint64_t width, double p,
                               const LrSchedule& sched, double c);

}  // namespace perc
