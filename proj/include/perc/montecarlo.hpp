#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "perc/prob.hpp"
#include "perc/rng.hpp"
#include "perc/topology.hpp"

namespace perc {

// Monte Carlo crossing-probability estimate with its normal-approximation
// standard error sqrt(mean (1 - mean) / trials).
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t hits = 0;

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

// Each flag is present iff its uniform u satisfies u >= p, i.e. with
// probability 1 - p. Uniforms are consumed in (layer, from, to) order for
// edges and (layer, i) order for hidden vertices.
BondConfig sample_bond(Prob p, const Topology& topo, Stream& rng);
SiteConfig sample_site(Prob p, const Topology& topo, Stream& rng);
Config sample(Model model, Prob p, const Topology& topo, Stream& rng);

// Trial t draws from Stream(seed, t); the result depends only on the inputs,
// not on how trials are spread across threads.
Estimate estimate_theta(Model model, Prob p, const Topology& topo, std::uint64_t trials,
                        std::uint64_t seed);

// Monotone coupling in p for p1 <= p2. The sparse graph (p2) keeps each edge
// with probability 1 - p2; every edge it misses joins the dense graph (p1)
// with probability 1 - p1/p2. Returns {dense ~ bond(p1), sparse ~ bond(p2)},
// sparse a subgraph of dense. Two uniforms are drawn per edge.
std::pair<BondConfig, BondConfig> coupled_sample_p(Prob p1, Prob p2, const Topology& topo,
                                                   Stream& rng);

// Width coupling for w1 <= w2: the width-w2 graph is sampled and the width-w1
// graph is its restriction to vertices 0..w1-1 of every layer.
// Returns {narrow, wide}.
std::pair<BondConfig, BondConfig> coupled_sample_w(Prob p, std::size_t w1, std::size_t w2,
                                                   std::size_t depth, Stream& rng);

// Keeps exactly the hidden vertices with at least one present incoming edge.
// Maps bond(p) onto site(p^W) and never destroys a crossing.
SiteConfig site_from_bond(const BondConfig& bond);

}  // namespace perc
