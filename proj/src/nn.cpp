#include "perc/nn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "perc/montecarlo.hpp"

namespace perc::nn {

const char* to_string(Activation a) noexcept {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::tanh: return "tanh";
    }
    return "identity";
}

Activation parse_activation(std::string_view s) {
    if (s == "identity") return Activation::identity;
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    throw std::invalid_argument("unknown activation '" + std::string(s) + "'");
}

namespace {

double activate(Activation a, double z) {
    switch (a) {
        case Activation::identity: return z;
        case Activation::relu: return z > 0.0 ? z : 0.0;
        case Activation::tanh: return std::tanh(z);
    }
    return z;
}

// Derivative expressed through the pre-activation z and output y = sigma(z).
double derivative(Activation a, double z, double y) {
    switch (a) {
        case Activation::identity: return 1.0;
        case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::tanh: return 1.0 - y * y;
    }
    return 1.0;
}

void check_input(const Topology& topo, std::span<const double> x) {
    if (x.size() != topo.width())
        throw std::invalid_argument("input has dimension " + std::to_string(x.size()) +
                                    ", network width is " + std::to_string(topo.width()));
}

void check_mask(const Topology& topo, const FilterMask& mask) {
    if (mask.keep.size() != topo.edge_count())
        throw std::invalid_argument("filter mask does not match network shape");
}

// Pre-activations and activations of every vertex layer; layer 0 holds x in both.
struct Trace {
    std::vector<Vector> pre;
    std::vector<Vector> post;
};

Trace run(const MlpParams& params, const FilterMask& mask, std::span<const double> x) {
    const Topology& topo = params.topology();
    const std::size_t w = topo.width();
    Trace tr;
    tr.pre.emplace_back(x.begin(), x.end());
    tr.post.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < topo.edge_layers(); ++l) {
        const Vector& in = tr.post.back();
        Vector z(w, 0.0);
        for (std::size_t i = 0; i < w; ++i) {
            if (in[i] == 0.0) continue;
            for (std::size_t j = 0; j < w; ++j) {
                const std::size_t k = topo.edge_index(l, i, j);
                if (mask.keep.test(k)) z[j] += params.weights()[k] * in[i];
            }
        }
        Vector y(w);
        for (std::size_t j = 0; j < w; ++j) y[j] = activate(params.activation(), z[j]);
        tr.pre.push_back(std::move(z));
        tr.post.push_back(std::move(y));
    }
    return tr;
}

}  // namespace

MlpParams::MlpParams(Topology topo, Activation act)
    : MlpParams(topo, act, std::vector<double>(topo.edge_count(), 0.0)) {}

MlpParams::MlpParams(Topology topo, Activation act, std::vector<double> weights)
    : topo_(topo), act_(act), weights_(std::move(weights)) {
    require_hidden_layers(topo_, "network");
    if (weights_.size() != topo_.edge_count())
        throw std::invalid_argument("weight vector does not match network shape");
}

MlpParams MlpParams::random(Topology topo, Activation act, Stream& rng) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(topo.width()));
    std::vector<double> w(topo.edge_count());
    for (auto& v : w) {
        do {
            v = scale * (2.0 * rng.uniform() - 1.0);
        } while (std::abs(v) < 1e-12);
    }
    return {topo, act, std::move(w)};
}

FilterKind FilterKind::parse(std::string_view name, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("filter p must lie in [0, 1]");
    FilterKind k;
    k.p = p;
    constexpr std::string_view prefix = "modified-";
    if (name.starts_with(prefix)) {
        k.modified = true;
        name.remove_prefix(prefix.size());
    }
    if (name == "dropconnect")
        k.base = FilterBase::dropconnect;
    else if (name == "original")
        k.base = FilterBase::original;
    else
        throw std::invalid_argument("unknown filter kind '" + std::string(name) + "'");
    return k;
}

std::string FilterKind::name() const {
    std::string base_name = base == FilterBase::dropconnect ? "dropconnect" : "original";
    return modified ? "modified-" + base_name : base_name;
}

FilterMask FilterMask::full(const Topology& topo, FilterKind kind) {
    return {kind, BitMask(topo.edge_count(), true)};
}
FilterMask FilterMask::zero(const Topology& topo, FilterKind kind) {
    return {kind, BitMask(topo.edge_count(), false)};
}

FilterMask sample_filter(const FilterKind& kind, const Topology& topo, Stream& rng) {
    const Prob p = Prob::from_value(kind.p);
    FilterMask mask{kind, {}};
    if (kind.base == FilterBase::dropconnect) {
        mask.keep = sample_bond(p, topo, rng).present();
    } else {
        const SiteConfig neurons = sample_site(p, topo, rng);
        mask.keep = BitMask(topo.edge_count());
        for (std::size_t l = 0; l < topo.edge_layers(); ++l)
            for (std::size_t i = 0; i < topo.width(); ++i)
                for (std::size_t j = 0; j < topo.width(); ++j)
                    mask.keep.set(topo.edge_index(l, i, j),
                                  neurons.vertex(l, i) && neurons.vertex(l + 1, j));
    }
    if (kind.modified && !crossing(BondConfig(topo, mask.keep)))
        mask.keep = BitMask(topo.edge_count(), false);
    return mask;
}

Vector forward(const MlpParams& params, const FilterMask& mask, std::span<const double> x) {
    check_input(params.topology(), x);
    check_mask(params.topology(), mask);
    return run(params, mask, x).post.back();
}

BondConfig connectivity(const MlpParams& params, const FilterMask& mask) {
    const Topology& topo = params.topology();
    check_mask(topo, mask);
    BitMask present(topo.edge_count());
    for (std::size_t k = 0; k < present.size(); ++k)
        present.set(k, mask.keep.test(k) && params.weights()[k] != 0.0);
    return {topo, std::move(present)};
}

void validate_batch(const Topology& topo, const Batch& batch) {
    if (batch.inputs.empty()) throw std::invalid_argument("batch is empty");
    if (batch.inputs.size() != batch.targets.size())
        throw std::invalid_argument("batch inputs and targets differ in length");
    for (std::size_t b = 0; b < batch.size(); ++b) {
        check_input(topo, batch.inputs[b]);
        if (batch.targets[b].size() != topo.width())
            throw std::invalid_argument("target dimension does not match network width");
    }
}

double loss(const MlpParams& params, const FilterMask& mask, const Batch& batch) {
    validate_batch(params.topology(), batch);
    check_mask(params.topology(), mask);
    double total = 0.0;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const Vector out = run(params, mask, batch.inputs[b]).post.back();
        double sq = 0.0;
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double r = out[j] - batch.targets[b][j];
            sq += r * r;
        }
        total += 0.5 * sq;
    }
    return total / static_cast<double>(batch.size());
}

std::vector<double> gradient(const MlpParams& params, const FilterMask& mask, const Batch& batch) {
    const Topology& topo = params.topology();
    validate_batch(topo, batch);
    check_mask(topo, mask);
    const std::size_t w = topo.width();
    const Activation act = params.activation();
    std::vector<double> grad(topo.edge_count(), 0.0);

    for (std::size_t b = 0; b < batch.size(); ++b) {
        const Trace tr = run(params, mask, batch.inputs[b]);
        const std::size_t out_layer = topo.edge_layers();
        Vector delta(w);
        for (std::size_t j = 0; j < w; ++j)
            delta[j] = (tr.post[out_layer][j] - batch.targets[b][j]) *
                       derivative(act, tr.pre[out_layer][j], tr.post[out_layer][j]);

        for (std::size_t l = out_layer; l-- > 0;) {
            const Vector& in = tr.post[l];
            Vector back(w, 0.0);
            for (std::size_t i = 0; i < w; ++i) {
                for (std::size_t j = 0; j < w; ++j) {
                    const std::size_t k = topo.edge_index(l, i, j);
                    if (!mask.keep.test(k)) continue;
                    grad[k] += in[i] * delta[j];
                    back[i] += params.weights()[k] * delta[j];
                }
            }
            if (l == 0) break;
            for (std::size_t i = 0; i < w; ++i)
                back[i] *= derivative(act, tr.pre[l][i], tr.post[l][i]);
            delta = std::move(back);
        }
    }
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (auto& g : grad) g *= scale;
    return grad;
}

}  // namespace perc::nn
