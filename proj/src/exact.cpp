#include "perc/exact.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace perc {

namespace {

// k * log(x) with the convention 0 * log(0) = 0.
double weighted_log(double k, double log_x) { return k == 0.0 ? 0.0 : k * log_x; }

}  // namespace

double binomial_log_pmf(std::size_t n, std::size_t k, double log_q, double log_1mq) {
    if (k > n) return -INFINITY;
    const double dn = static_cast<double>(n), dk = static_cast<double>(k);
    const double log_choose = std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
    return log_choose + weighted_log(dk, log_q) + weighted_log(dn - dk, log_1mq);
}

TransitionKernel::TransitionKernel(std::size_t width, Prob removal)
    : width_(width), removal_(removal), rows_((width + 1) * (width + 1), 0.0) {
    if (width == 0) throw std::invalid_argument("kernel width must be >= 1");
    const std::size_t states = width + 1;
    rows_[0] = 1.0;
    for (std::size_t n = 1; n <= width; ++n) {
        // success probability 1 - p^n; log(1 - q) = n log p
        const double log_fail = weighted_log(static_cast<double>(n), removal.log_value());
        const double log_success = log1mexp(log_fail);
        double* r = rows_.data() + n * states;
        double total = 0.0;
        for (std::size_t m = 0; m <= width; ++m) {
            r[m] = std::exp(binomial_log_pmf(width, m, log_success, log_fail));
            total += r[m];
        }
        // lgamma rounding grows with W; renormalise so rows stay stochastic
        for (std::size_t m = 0; m <= width; ++m) r[m] /= total;
    }
}

std::vector<double> TransitionKernel::step(const std::vector<double>& dist) const {
    const std::size_t states = width_ + 1;
    std::vector<double> out(states, 0.0);
    for (std::size_t n = 0; n < states; ++n) {
        const double mass = dist[n];
        if (mass == 0.0) continue;
        const double* r = row(n);
        for (std::size_t m = 0; m < states; ++m) out[m] += mass * r[m];
    }
    return out;
}

Prob theta_site(Prob p, const Topology& topo) {
    require_hidden_layers(topo, "site percolation");
    const double log_layer_open = log1mexp(weighted_log(static_cast<double>(topo.width()), p.log_value()));
    return Prob::from_log(weighted_log(static_cast<double>(topo.depth()), log_layer_open));
}

Prob theta_bond_dp(Prob p, const Topology& topo) {
    const TransitionKernel kernel(topo.width(), p);
    std::vector<double> dist(topo.width() + 1, 0.0);
    dist[topo.width()] = 1.0;
    for (std::size_t l = 0; l < topo.edge_layers(); ++l) dist = kernel.step(dist);

    double alive = 0.0;
    for (std::size_t m = 1; m < dist.size(); ++m) alive += dist[m];
    // Mass only leaks to 0 through rounding, so renormalise the split.
    const double total = alive + dist[0];
    return Prob::from_split(alive / total, dist[0] / total);
}

Prob theta_bruteforce(Model model, Prob p, const Topology& topo) {
    const std::size_t k = model == Model::bond ? topo.edge_count() : topo.hidden_vertex_count();
    if (model == Model::site) require_hidden_layers(topo, "site percolation");
    if (k > bruteforce_flag_budget)
        throw std::invalid_argument("brute force needs " + std::to_string(k) +
                                    " flags, budget is " +
                                    std::to_string(bruteforce_flag_budget));

    // crossing configurations grouped by number of present flags
    std::vector<double> crossing_by_count(k + 1, 0.0), total_by_count(k + 1, 0.0);
    const std::uint64_t configs = std::uint64_t{1} << k;
    for (std::uint64_t bits = 0; bits < configs; ++bits) {
        const auto present = BitMask::from_word(k, bits);
        const bool crosses = model == Model::bond ? crossing(BondConfig(topo, present))
                                                  : crossing(SiteConfig(topo, present));
        const auto c = static_cast<std::size_t>(std::popcount(bits));
        total_by_count[c] += 1.0;
        if (crosses) crossing_by_count[c] += 1.0;
    }

    double value = 0.0, complement = 0.0;
    for (std::size_t c = 0; c <= k; ++c) {
        const double weight = std::exp(weighted_log(static_cast<double>(c), p.log_complement()) +
                                       weighted_log(static_cast<double>(k - c), p.log_value()));
        value += crossing_by_count[c] * weight;
        complement += (total_by_count[c] - crossing_by_count[c]) * weight;
    }
    const double total = value + complement;
    return Prob::from_split(value / total, complement / total);
}

BondBounds bond_bounds(Prob p, const Topology& topo) {
    const double w = static_cast<double>(topo.width());
    const double layers = static_cast<double>(topo.edge_layers());
    const double log_lower = weighted_log(layers, log1mexp(weighted_log(w, p.log_value())));
    const double log_upper = weighted_log(layers, log1mexp(weighted_log(w * w, p.log_value())));
    return {Prob::from_log(log_lower), Prob::from_log(log_upper)};
}

Prob site_coupling_bound(Prob p, const Topology& topo) {
    return theta_site(p.pow(static_cast<double>(topo.width())), topo);
}

Prob theta(Model model, Prob p, const Topology& topo) {
    return model == Model::bond ? theta_bond_dp(p, topo) : theta_site(p, topo);
}

}  // namespace perc
