#include "perc/topology.hpp"

#include <stdexcept>
#include <string>

namespace perc {

Topology::Topology(std::size_t width, std::size_t depth) : width_(width), depth_(depth) {
    if (width == 0) throw std::invalid_argument("topology width must be >= 1");
}

void require_hidden_layers(const Topology& topo, const char* what) {
    if (topo.depth() == 0)
        throw std::invalid_argument(std::string(what) + " requires at least one hidden layer");
}

const char* to_string(Model m) noexcept { return m == Model::bond ? "bond" : "site"; }

Model parse_model(std::string_view s) {
    if (s == "bond") return Model::bond;
    if (s == "site") return Model::site;
    throw std::invalid_argument("unknown percolation model '" + std::string(s) + "'");
}

BondConfig::BondConfig(Topology topo, BitMask present)
    : topo_(topo), present_(std::move(present)) {
    if (present_.size() != topo_.edge_count())
        throw std::invalid_argument("bond mask has " + std::to_string(present_.size()) +
                                    " flags, topology needs " +
                                    std::to_string(topo_.edge_count()));
}

BondConfig BondConfig::full(Topology topo) { return {topo, BitMask(topo.edge_count(), true)}; }
BondConfig BondConfig::empty(Topology topo) { return {topo, BitMask(topo.edge_count(), false)}; }

SiteConfig::SiteConfig(Topology topo, BitMask present)
    : topo_(topo), present_(std::move(present)) {
    require_hidden_layers(topo_, "site configuration");
    if (present_.size() != topo_.hidden_vertex_count())
        throw std::invalid_argument("site mask has " + std::to_string(present_.size()) +
                                    " flags, topology needs " +
                                    std::to_string(topo_.hidden_vertex_count()));
}

SiteConfig SiteConfig::full(Topology topo) {
    return {topo, BitMask(topo.hidden_vertex_count(), true)};
}
SiteConfig SiteConfig::empty(Topology topo) {
    return {topo, BitMask(topo.hidden_vertex_count(), false)};
}

bool SiteConfig::vertex(std::size_t layer, std::size_t i) const noexcept {
    if (layer == 0 || layer == topo_.depth() + 1) return true;
    return present_.test(topo_.site_index(layer, i));
}

namespace {

// Forward sweep. `next_layer(l, cur, nxt)` fills layer l+1 from layer l and
// returns its count; `observe(l, set, count)` sees every layer. Stops after the
// first empty layer; later layers are reported empty.
template <class Step, class Observe>
std::size_t sweep(const Topology& topo, Step&& next_layer, Observe&& observe) {
    const std::size_t w = topo.width();
    std::vector<char> cur(w, 1), nxt(w, 0);
    std::size_t count = w;
    observe(0, cur, count);
    for (std::size_t l = 0; l < topo.edge_layers(); ++l) {
        if (count == 0) {
            observe(l + 1, cur, 0);
            continue;
        }
        count = next_layer(l, cur, nxt);
        cur.swap(nxt);
        observe(l + 1, cur, count);
    }
    return count;
}

auto bond_step(const BondConfig& config) {
    return [&config](std::size_t l, const std::vector<char>& cur, std::vector<char>& nxt) {
        const std::size_t w = config.topology().width();
        std::size_t count = 0;
        for (std::size_t j = 0; j < w; ++j) {
            char hit = 0;
            for (std::size_t i = 0; i < w && !hit; ++i) hit = cur[i] && config.edge(l, i, j);
            nxt[j] = hit;
            count += static_cast<std::size_t>(hit);
        }
        return count;
    };
}

// With every edge between present vertices implicitly kept, a present vertex
// is reached iff the previous layer has any reached vertex.
auto site_step(const SiteConfig& config) {
    return [&config](std::size_t l, const std::vector<char>&, std::vector<char>& nxt) {
        const std::size_t w = config.topology().width();
        std::size_t count = 0;
        for (std::size_t j = 0; j < w; ++j) {
            nxt[j] = config.vertex(l + 1, j) ? 1 : 0;
            count += static_cast<std::size_t>(nxt[j]);
        }
        return count;
    };
}

template <class Step>
ReachProfile profile(const Topology& topo, Step&& step) {
    ReachProfile out;
    out.reached.reserve(topo.vertex_layers());
    out.counts.reserve(topo.vertex_layers());
    sweep(topo, step, [&](std::size_t, const std::vector<char>& set, std::size_t count) {
        BitMask m(topo.width());
        if (count > 0)
            for (std::size_t i = 0; i < set.size(); ++i) m.set(i, set[i] != 0);
        out.reached.push_back(std::move(m));
        out.counts.push_back(count);
    });
    return out;
}

constexpr auto ignore = [](std::size_t, const std::vector<char>&, std::size_t) {};

}  // namespace

ReachProfile crossing_reach(const BondConfig& config) {
    return profile(config.topology(), bond_step(config));
}
ReachProfile crossing_reach(const SiteConfig& config) {
    return profile(config.topology(), site_step(config));
}
ReachProfile crossing_reach(const Config& config) {
    return std::visit([](const auto& c) { return crossing_reach(c); }, config);
}

bool crossing(const BondConfig& config) {
    return sweep(config.topology(), bond_step(config), ignore) > 0;
}
bool crossing(const SiteConfig& config) {
    return sweep(config.topology(), site_step(config), ignore) > 0;
}
bool crossing(const Config& config) {
    return std::visit([](const auto& c) { return crossing(c); }, config);
}

}  // namespace perc
