#include "perc/trainer.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "perc/exact.hpp"
#include "perc/parallel.hpp"
#include "perc/rng.hpp"

namespace perc {

void TrainConfig::validate() const {
    require_hidden_layers(topology, "training");
    if (!(filter.p >= 0.0 && filter.p <= 1.0))
        throw std::invalid_argument("filter p must lie in [0, 1]");
    if (batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (!(noise_std >= 0.0)) throw std::invalid_argument("noise std must be >= 0");
}

Prob filter_crossing_probability(const nn::FilterKind& kind, const Topology& topo) {
    const Prob p = Prob::from_value(kind.p);
    return kind.base == nn::FilterBase::dropconnect ? theta_bond_dp(p, topo) : theta_site(p, topo);
}

double theorem_bound(double theta, double lr_total, double max_grad_norm) {
    if (theta < 0.0 || lr_total < 0.0 || max_grad_norm < 0.0)
        throw std::invalid_argument("theorem_bound arguments must be nonnegative");
    return max_grad_norm * theta * lr_total;
}

TeacherData::TeacherData(const Topology& topo, nn::Activation act, std::uint64_t seed,
                         double noise_std)
    : teacher_([&] {
          Stream rng(seed, 0);
          return nn::MlpParams::random(topo, act, rng);
      }()),
      seed_(derive_seed(seed, 1)),
      noise_std_(noise_std) {}

nn::Batch TeacherData::batch(std::uint64_t step, std::size_t size) const {
    const std::size_t w = teacher_.topology().width();
    const auto all = nn::FilterMask::full(teacher_.topology());
    Stream rng(seed_, step);
    nn::Batch out;
    for (std::size_t b = 0; b < size; ++b) {
        nn::Vector x(w);
        for (auto& v : x) v = rng.normal();
        nn::Vector y = nn::forward(teacher_, all, x);
        if (noise_std_ > 0.0)
            for (auto& v : y) v += noise_std_ * rng.normal();
        out.inputs.push_back(std::move(x));
        out.targets.push_back(std::move(y));
    }
    return out;
}

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

struct TrialTrace {
    TrialResult result;
    std::uint64_t nonzero_nopath_updates = 0;
    std::vector<double> losses;
};

TrialTrace run_trial(const TrainConfig& cfg, const TeacherData& data, std::uint64_t trial) {
    const Topology& topo = cfg.topology;
    Stream init_rng(cfg.init_seed, trial);
    nn::MlpParams params = nn::MlpParams::random(topo, cfg.activation, init_rng);
    const std::vector<double> w0(params.weights().begin(), params.weights().end());
    const std::uint64_t filter_seed = derive_seed(cfg.filter_seed, trial);

    TrialTrace tr;
    tr.losses.reserve(cfg.steps);
    std::vector<double> before(topo.edge_count());
    for (std::uint64_t t = 0; t < cfg.steps; ++t) {
        Stream filter_rng(filter_seed, t);
        const nn::FilterMask mask = nn::sample_filter(cfg.filter, topo, filter_rng);
        const nn::Batch batch = data.batch(t, cfg.batch_size);
        tr.losses.push_back(nn::loss(params, mask, batch));
        const bool path = crossing(nn::connectivity(params, mask));

        const std::vector<double> grad = nn::gradient(params, mask, batch);
        tr.result.max_masked_grad_norm = std::max(tr.result.max_masked_grad_norm, norm2(grad));

        auto w = params.weights();
        std::copy(w.begin(), w.end(), before.begin());
        const double step = cfg.schedule.step(t);
        for (std::size_t k = 0; k < w.size(); ++k)
            if (mask.keep.test(k)) w[k] -= step * grad[k];

        if (!path) {
            tr.result.nopath_steps += 1;
            bool zero = std::memcmp(before.data(), w.data(), w.size() * sizeof(double)) == 0;
            for (double g : grad) zero = zero && g == 0.0;
            if (!zero) tr.nonzero_nopath_updates += 1;
        }
    }

    double sq = 0.0;
    for (std::size_t k = 0; k < w0.size(); ++k) {
        const double d = params.weights()[k] - w0[k];
        sq += d * d;
    }
    tr.result.displacement = std::sqrt(sq);
    return tr;
}

}  // namespace

TrainReport run_dropout_sgd(const TrainConfig& cfg) {
    cfg.validate();
    const TeacherData data(cfg.topology, cfg.activation, cfg.data_seed, cfg.noise_std);

    std::vector<TrialTrace> traces(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t k) { traces[k] = run_trial(cfg, data, k); });

    TrainReport rep;
    rep.losses.assign(cfg.steps, 0.0);
    double sum = 0.0;
    for (const auto& tr : traces) {
        rep.trials.push_back(tr.result);
        sum += tr.result.displacement;
        rep.nopath_steps += tr.result.nopath_steps;
        rep.nonzero_nopath_updates += tr.nonzero_nopath_updates;
        rep.max_masked_grad_norm = std::max(rep.max_masked_grad_norm, tr.result.max_masked_grad_norm);
        for (std::uint64_t t = 0; t < cfg.steps; ++t) rep.losses[t] += tr.losses[t];
    }
    const double n = static_cast<double>(cfg.trials);
    for (auto& l : rep.losses) l /= n;
    rep.mean_displacement = sum / n;
    if (cfg.trials > 1) {
        double ss = 0.0;
        for (const auto& tr : traces) {
            const double d = tr.result.displacement - rep.mean_displacement;
            ss += d * d;
        }
        rep.displacement_std = std::sqrt(ss / (n - 1.0));
    }
    rep.total_steps = cfg.steps * cfg.trials;
    rep.nopath_fraction = rep.total_steps == 0 ? 0.0
                                               : static_cast<double>(rep.nopath_steps) /
                                                     static_cast<double>(rep.total_steps);
    rep.lr_total = cfg.steps == 0 ? 0.0 : lr_sum(cfg.schedule, cfg.steps);
    rep.theta = filter_crossing_probability(cfg.filter, cfg.topology).value();
    rep.bound = theorem_bound(rep.theta, rep.lr_total, rep.max_masked_grad_norm);
    return rep;
}

Decomposition objective_decomposition(const nn::MlpParams& params, const nn::FilterKind& kind,
                                      const nn::Batch& batch, std::uint64_t trials,
                                      std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("objective_decomposition needs trials >= 1");
    const Topology& topo = params.topology();
    nn::validate_batch(topo, batch);

    nn::Batch zeroed = batch;
    for (auto& x : zeroed.inputs) std::fill(x.begin(), x.end(), 0.0);

    Decomposition d;
    d.trials = trials;
    double path_sum = 0.0, nopath_sum = 0.0;
    for (std::uint64_t k = 0; k < trials; ++k) {
        Stream rng(seed, k);
        const nn::FilterMask mask = nn::sample_filter(kind, topo, rng);
        const double l = nn::loss(params, mask, batch);
        if (crossing(nn::connectivity(params, mask))) {
            d.path_trials += 1;
            path_sum += l;
        } else {
            nopath_sum += l;
            if (nn::loss(params, mask, zeroed) != l) d.nopath_input_independent = false;
        }
    }
    const double n = static_cast<double>(trials);
    const std::uint64_t nopath_trials = trials - d.path_trials;
    d.theta_hat = static_cast<double>(d.path_trials) / n;
    d.d_total = (path_sum + nopath_sum) / n;
    if (d.path_trials > 0) d.d_path = path_sum / static_cast<double>(d.path_trials);
    if (nopath_trials > 0) d.d_nopath = nopath_sum / static_cast<double>(nopath_trials);
    d.recombined = d.theta_hat * d.d_path.value_or(0.0) + (1.0 - d.theta_hat) * d.d_nopath.value_or(0.0);

    double zero_loss = 0.0;
    for (const auto& y : batch.targets) {
        double sq = 0.0;
        for (double v : y) sq += v * v;
        zero_loss += 0.5 * sq;
    }
    d.zero_output_loss = zero_loss / static_cast<double>(batch.size());
    return d;
}

}  // namespace perc
