#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perc/bitmask.hpp"
#include "perc/rng.hpp"
#include "perc/topology.hpp"

namespace perc::nn {

// Activations with sigma(0) = 0, so a bias-free network maps 0 to 0.
enum class Activation { identity, relu, tanh };

const char* to_string(Activation a) noexcept;
Activation parse_activation(std::string_view s);

using Vector = std::vector<double>;

// Bias-free constant-width MLP. Weights are stored per edge layer in the same
// (layer, from, to) order as BondConfig: weight(l, i, j) scales the signal of
// vertex (i, l) into vertex (j, l+1). The activation is applied at every
// non-input layer, the output included.
class MlpParams {
  public:
    // All-zero weights. Requires depth >= 1.
    MlpParams(Topology topo, Activation act);
    MlpParams(Topology topo, Activation act, std::vector<double> weights);

    // Independent uniform weights on [-1/sqrt(W), 1/sqrt(W)], redrawn while
    // |w| < 1e-12 so that the unmasked connectivity graph is complete.
    static MlpParams random(Topology topo, Activation act, Stream& rng);

    const Topology& topology() const noexcept { return topo_; }
    Activation activation() const noexcept { return act_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<double> weights() noexcept { return weights_; }
    double weight(std::size_t l, std::size_t i, std::size_t j) const noexcept {
        return weights_[topo_.edge_index(l, i, j)];
    }
    double& weight(std::size_t l, std::size_t i, std::size_t j) noexcept {
        return weights_[topo_.edge_index(l, i, j)];
    }

  private:
    Topology topo_;
    Activation act_;
    std::vector<double> weights_;
};

enum class FilterBase { dropconnect, original };

struct FilterKind {
    FilterBase base = FilterBase::dropconnect;
    double p = 0.5;         // removal probability
    bool modified = false;  // zero the whole mask when it admits no crossing

    // "dropconnect", "original", "modified-dropconnect", "modified-original"
    static FilterKind parse(std::string_view name, double p);
    std::string name() const;
};

// Per-weight keep flags, same layout as the weights.
struct FilterMask {
    FilterKind kind;
    BitMask keep;

    static FilterMask full(const Topology& topo, FilterKind kind = {});
    static FilterMask zero(const Topology& topo, FilterKind kind = {});
};

// Dropconnect: every weight kept independently with probability 1 - p.
// Original: every hidden neuron kept with probability 1 - p; a weight is kept
// iff both endpoints are (input and output neurons are never dropped).
// Modified: the base mask, or the all-zero mask when the base mask alone has
// no input-output path.
FilterMask sample_filter(const FilterKind& kind, const Topology& topo, Stream& rng);

// F(x, mask (.) w).
Vector forward(const MlpParams& params, const FilterMask& mask, std::span<const double> x);

// Edge present iff the weight is kept and nonzero.
BondConfig connectivity(const MlpParams& params, const FilterMask& mask);

struct Batch {
    std::vector<Vector> inputs;
    std::vector<Vector> targets;

    std::size_t size() const noexcept { return inputs.size(); }
};

// Mean over the batch of 0.5 ||F(x, mask (.) w) - y||^2.
double loss(const MlpParams& params, const FilterMask& mask, const Batch& batch);

// mask (.) grad_w loss(mask (.) w). Entries at dropped weights are exactly 0.
// The ReLU derivative at 0 is taken as 0.
std::vector<double> gradient(const MlpParams& params, const FilterMask& mask, const Batch& batch);

// Throws std::invalid_argument on an empty batch or dimension mismatch.
void validate_batch(const Topology& topo, const Batch& batch);

}  // namespace perc::nn
