#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "perc/nn.hpp"
#include "perc/prob.hpp"
#include "perc/scaling.hpp"
#include "perc/topology.hpp"

namespace perc {

struct TrainConfig {
    Topology topology{2, 1};
    nn::Activation activation = nn::Activation::tanh;
    nn::FilterKind filter;
    LrSchedule schedule{1.0, 1.0};
    std::uint64_t steps = 0;
    std::size_t batch_size = 1;
    std::uint64_t data_seed = 1;
    std::uint64_t filter_seed = 2;
    std::uint64_t init_seed = 3;
    std::uint64_t trials = 1;
    double noise_std = 0.0;

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct TrialResult {
    double displacement = 0.0;  // ||w_T - w_0||_2
    std::uint64_t nopath_steps = 0;
    double max_masked_grad_norm = 0.0;
};

struct TrainReport {
    std::vector<TrialResult> trials;
    double mean_displacement = 0.0;
    // Sample standard deviation of the displacement over trials (0 for one trial).
    double displacement_std = 0.0;
    double nopath_fraction = 0.0;
    std::uint64_t nopath_steps = 0;
    std::uint64_t total_steps = 0;
    // No-path steps whose update vector was not bitwise zero. Always 0 for
    // bias-free networks; kept as a checked count.
    std::uint64_t nonzero_nopath_updates = 0;
    double max_masked_grad_norm = 0.0;  // empirical M
    double lr_total = 0.0;              // sum of step sizes over T steps (0 when T = 0)
    double theta = 0.0;                 // exact crossing probability of one filter
    double bound = 0.0;                 // M * theta * lr_total
    std::vector<double> losses;         // per step, mean over trials of the dropout loss
};

// Exact crossing probability of one sampled filter of this kind on a network
// with all weights nonzero. Modified filters share their base's value.
Prob filter_crossing_probability(const nn::FilterKind& kind, const Topology& topo);

// M * theta * lr_total.
double theorem_bound(double theta, double lr_total, double max_grad_norm);

// Teacher network and per-step batches shared by every trial of a run.
class TeacherData {
  public:
    TeacherData(const Topology& topo, nn::Activation act, std::uint64_t seed, double noise_std);
    nn::Batch batch(std::uint64_t step, std::size_t size) const;
    const nn::MlpParams& teacher() const noexcept { return teacher_; }

  private:
    nn::MlpParams teacher_;
    std::uint64_t seed_;
    double noise_std_;
};

// Dropout SGD: w_{t+1} = w_t - alpha_t f_t (.) g(f_t (.) w_t, xi_t), repeated
// for cfg.trials independent initialisations. Trial k uses streams derived
// from (seed, k); trials run concurrently and are reduced in index order.
TrainReport run_dropout_sgd(const TrainConfig& cfg);

struct Decomposition {
    std::uint64_t trials = 0;
    std::uint64_t path_trials = 0;
    double theta_hat = 0.0;
    std::optional<double> d_path;    // mean loss given a crossing; empty if none observed
    std::optional<double> d_nopath;  // mean loss given no crossing; empty if none observed
    double d_total = 0.0;
    // theta_hat d_path + (1 - theta_hat) d_nopath over the same partition
    double recombined = 0.0;
    // mean over the batch of 0.5 ||y||^2, the loss of the zero function
    double zero_output_loss = 0.0;
    // every no-path trial gave the same loss with the inputs replaced by zeros
    bool nopath_input_independent = true;
};

// Splits the dropout objective at fixed weights by whether the sampled filter
// leaves an input-output path.
Decomposition objective_decomposition(const nn::MlpParams& params, const nn::FilterKind& kind,
                                      const nn::Batch& batch, std::uint64_t trials,
                                      std::uint64_t seed);

}  // namespace perc
