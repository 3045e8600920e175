#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "perc/bitmask.hpp"

namespace perc {

// Rectangular layered network: depth+2 vertex layers of `width` vertices,
// complete bipartite forward edges between consecutive layers.
//
// depth counts hidden layers. depth == 0 is accepted here (a single edge layer
// from input to output) because bond quantities stay meaningful there; every
// site-model and network entry point rejects it.
class Topology {
  public:
    Topology(std::size_t width, std::size_t depth);

    std::size_t width() const noexcept { return width_; }
    std::size_t depth() const noexcept { return depth_; }

    std::size_t vertex_layers() const noexcept { return depth_ + 2; }
    std::size_t edge_layers() const noexcept { return depth_ + 1; }
    std::size_t edges_per_layer() const noexcept { return width_ * width_; }
    std::size_t edge_count() const noexcept { return edges_per_layer() * edge_layers(); }
    std::size_t hidden_vertex_count() const noexcept { return width_ * depth_; }

    // Row-major (layer, from, to) index of edge (from, layer) -> (to, layer+1).
    std::size_t edge_index(std::size_t layer, std::size_t from, std::size_t to) const noexcept {
        return (layer * width_ + from) * width_ + to;
    }
    // Index of hidden vertex (i, layer), layer in 1..depth.
    std::size_t site_index(std::size_t layer, std::size_t i) const noexcept {
        return (layer - 1) * width_ + i;
    }

    friend bool operator==(const Topology&, const Topology&) = default;

  private:
    std::size_t width_;
    std::size_t depth_;
};

// Throws std::invalid_argument unless topo.depth() >= 1.
void require_hidden_layers(const Topology& topo, const char* what);

enum class Model { bond, site };

const char* to_string(Model m) noexcept;
Model parse_model(std::string_view s);

// One bond percolation sample: a presence flag per edge.
class BondConfig {
  public:
    BondConfig(Topology topo, BitMask present);
    static BondConfig full(Topology topo);
    static BondConfig empty(Topology topo);

    const Topology& topology() const noexcept { return topo_; }
    const BitMask& present() const noexcept { return present_; }
    bool edge(std::size_t layer, std::size_t from, std::size_t to) const noexcept {
        return present_.test(topo_.edge_index(layer, from, to));
    }

    friend bool operator==(const BondConfig&, const BondConfig&) = default;

  private:
    Topology topo_;
    BitMask present_;
};

// One site percolation sample: a presence flag per hidden vertex. Input and
// output layers carry no flags and are always present.
class SiteConfig {
  public:
    SiteConfig(Topology topo, BitMask present);
    static SiteConfig full(Topology topo);
    static SiteConfig empty(Topology topo);

    const Topology& topology() const noexcept { return topo_; }
    const BitMask& present() const noexcept { return present_; }
    bool vertex(std::size_t layer, std::size_t i) const noexcept;

    friend bool operator==(const SiteConfig&, const SiteConfig&) = default;

  private:
    Topology topo_;
    BitMask present_;
};

using Config = std::variant<BondConfig, SiteConfig>;

// Vertices reachable from the input layer, layer by layer.
struct ReachProfile {
    std::vector<BitMask> reached;     // one W-bit set per vertex layer 0..L+1
    std::vector<std::size_t> counts;  // |reached[l]|

    bool crosses() const noexcept { return !counts.empty() && counts.back() > 0; }
};

ReachProfile crossing_reach(const BondConfig& config);
ReachProfile crossing_reach(const SiteConfig& config);
ReachProfile crossing_reach(const Config& config);

bool crossing(const BondConfig& config);
bool crossing(const SiteConfig& config);
bool crossing(const Config& config);

}  // namespace perc
