#include "perc/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "perc/parallel.hpp"

namespace perc {

BondConfig sample_bond(Prob p, const Topology& topo, Stream& rng) {
    BitMask present(topo.edge_count());
    for (std::size_t k = 0; k < present.size(); ++k) present.set(k, rng.uniform() >= p.value());
    return {topo, std::move(present)};
}

SiteConfig sample_site(Prob p, const Topology& topo, Stream& rng) {
    require_hidden_layers(topo, "site percolation");
    BitMask present(topo.hidden_vertex_count());
    for (std::size_t k = 0; k < present.size(); ++k) present.set(k, rng.uniform() >= p.value());
    return {topo, std::move(present)};
}

Config sample(Model model, Prob p, const Topology& topo, Stream& rng) {
    if (model == Model::bond) return sample_bond(p, topo, rng);
    return sample_site(p, topo, rng);
}

Estimate estimate_theta(Model model, Prob p, const Topology& topo, std::uint64_t trials,
                        std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("estimate_theta needs at least one trial");
    if (model == Model::site) require_hidden_layers(topo, "site percolation");

    // Per-block integer hit counts keep the sum independent of scheduling.
    constexpr std::uint64_t block = 4096;
    const std::uint64_t blocks = (trials + block - 1) / block;
    std::vector<std::uint64_t> hits(blocks, 0);
    parallel_for(blocks, [&](std::size_t b) {
        const std::uint64_t begin = b * block, end = std::min(trials, begin + block);
        std::uint64_t h = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            Stream rng(seed, t);
            h += crossing(sample(model, p, topo, rng)) ? 1 : 0;
        }
        hits[b] = h;
    });

    Estimate est;
    for (auto h : hits) est.hits += h;
    est.trials = trials;
    est.seed = seed;
    est.mean = static_cast<double>(est.hits) / static_cast<double>(trials);
    est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(trials));
    return est;
}

std::pair<BondConfig, BondConfig> coupled_sample_p(Prob p1, Prob p2, const Topology& topo,
                                                   Stream& rng) {
    if (p1.value() > p2.value())
        throw std::invalid_argument("coupled_sample_p requires p1 <= p2");
    const double extra_keep = p2.value() > 0.0 ? 1.0 - p1.value() / p2.value() : 0.0;
    BitMask dense(topo.edge_count()), sparse(topo.edge_count());
    for (std::size_t k = 0; k < topo.edge_count(); ++k) {
        const double u_sparse = rng.uniform();
        const double u_extra = rng.uniform();
        const bool in_sparse = u_sparse >= p2.value();
        sparse.set(k, in_sparse);
        dense.set(k, in_sparse || u_extra < extra_keep);
    }
    return {BondConfig(topo, std::move(dense)), BondConfig(topo, std::move(sparse))};
}

std::pair<BondConfig, BondConfig> coupled_sample_w(Prob p, std::size_t w1, std::size_t w2,
                                                   std::size_t depth, Stream& rng) {
    if (w1 == 0 || w1 > w2) throw std::invalid_argument("coupled_sample_w requires 1 <= w1 <= w2");
    const Topology narrow_topo(w1, depth), wide_topo(w2, depth);
    BondConfig wide = sample_bond(p, wide_topo, rng);
    BitMask narrow(narrow_topo.edge_count());
    for (std::size_t l = 0; l < narrow_topo.edge_layers(); ++l)
        for (std::size_t i = 0; i < w1; ++i)
            for (std::size_t j = 0; j < w1; ++j)
                narrow.set(narrow_topo.edge_index(l, i, j), wide.edge(l, i, j));
    return {BondConfig(narrow_topo, std::move(narrow)), std::move(wide)};
}

SiteConfig site_from_bond(const BondConfig& bond) {
    const Topology& topo = bond.topology();
    require_hidden_layers(topo, "site_from_bond");
    BitMask present(topo.hidden_vertex_count());
    for (std::size_t layer = 1; layer <= topo.depth(); ++layer)
        for (std::size_t j = 0; j < topo.width(); ++j) {
            bool indegree = false;
            for (std::size_t i = 0; i < topo.width() && !indegree; ++i)
                indegree = bond.edge(layer - 1, i, j);
            present.set(topo.site_index(layer, j), indegree);
        }
    return {topo, std::move(present)};
}

}  // namespace perc
