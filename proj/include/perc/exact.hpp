#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "perc/prob.hpp"
#include "perc/topology.hpp"

namespace perc {

// Markov kernel of the per-layer reached-vertex count under bond percolation:
// from n reached vertices, the next layer's count is Bin(W, 1 - p^n).
// State 0 is absorbing.
class TransitionKernel {
  public:
    TransitionKernel(std::size_t width, Prob removal);

    std::size_t width() const noexcept { return width_; }
    const Prob& removal_prob() const noexcept { return removal_; }

    // P(next = m | current = n), n, m in 0..W.
    double operator()(std::size_t n, std::size_t m) const noexcept {
        return rows_[n * (width_ + 1) + m];
    }
    const double* row(std::size_t n) const noexcept { return rows_.data() + n * (width_ + 1); }

    // dist' = dist * K
    std::vector<double> step(const std::vector<double>& dist) const;

  private:
    std::size_t width_;
    Prob removal_;
    std::vector<double> rows_;
};

// log pmf of Bin(n, q) at k, with q given as log q and log(1 - q).
double binomial_log_pmf(std::size_t n, std::size_t k, double log_q, double log_1mq);

// Site percolation crossing probability (1 - p^W)^L. Requires L >= 1.
Prob theta_site(Prob p, const Topology& topo);

// Bond percolation crossing probability via the reached-count Markov chain,
// O(L W^2). Accepts L = 0.
Prob theta_bond_dp(Prob p, const Topology& topo);

// Largest number of random flags theta_bruteforce will enumerate.
inline constexpr std::size_t bruteforce_flag_budget = 24;

// Exact crossing probability by enumerating all 2^k configurations.
// Throws std::invalid_argument above the flag budget.
Prob theta_bruteforce(Model model, Prob p, const Topology& topo);

struct BondBounds {
    Prob lower;  // (1 - p^W)^(L+1)
    Prob upper;  // (1 - p^(W^2))^(L+1)
};
BondBounds bond_bounds(Prob p, const Topology& topo);

// theta_site(p^W) = (1 - p^(W^2))^L, an upper bound on the bond crossing
// probability through the indegree coupling.
Prob site_coupling_bound(Prob p, const Topology& topo);

Prob theta(Model model, Prob p, const Topology& topo);

}  // namespace perc
