#include <doctest.h>

#include <stdexcept>

#include "oracle.hpp"
#include "perc/rng.hpp"
#include "perc/topology.hpp"

using namespace perc;

namespace {

BitMask random_mask(std::size_t n, double keep, Stream& rng) {
    BitMask m(n);
    for (std::size_t k = 0; k < n; ++k) m.set(k, rng.uniform() < keep);
    return m;
}

std::vector<char> flags_of(const BitMask& m) {
    std::vector<char> f(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) f[k] = m.test(k);
    return f;
}

}  // namespace

TEST_SUITE("topology") {
    TEST_CASE("shape bookkeeping") {
        const Topology t(3, 4);
        CHECK(t.vertex_layers() == 6);
        CHECK(t.edge_layers() == 5);
        CHECK(t.edges_per_layer() == 9);
        CHECK(t.edge_count() == 45);
        CHECK(t.hidden_vertex_count() == 12);
        CHECK(t.edge_index(1, 2, 0) == 15);
        CHECK_THROWS_AS(Topology(0, 3), std::invalid_argument);
        CHECK_NOTHROW(Topology(2, 0));
    }

    TEST_CASE("masks must match the topology") {
        const Topology t(2, 1);
        CHECK_THROWS_AS(BondConfig(t, BitMask(7)), std::invalid_argument);
        CHECK_THROWS_AS(SiteConfig(t, BitMask(3)), std::invalid_argument);
        CHECK_THROWS_AS(SiteConfig::full(Topology(2, 0)), std::invalid_argument);
        CHECK_THROWS_AS(parse_model("lattice"), std::invalid_argument);
    }

    TEST_CASE("full and empty graphs") {
        for (std::size_t w : {1u, 2u, 5u})
            for (std::size_t l : {1u, 3u}) {
                const Topology t(w, l);
                const auto full = crossing_reach(BondConfig::full(t));
                CHECK(full.crosses());
                for (auto c : full.counts) CHECK(c == w);
                const auto site_full = crossing_reach(SiteConfig::full(t));
                for (auto c : site_full.counts) CHECK(c == w);

                const auto empty = crossing_reach(BondConfig::empty(t));
                CHECK_FALSE(empty.crosses());
                CHECK(empty.counts[0] == w);
                for (std::size_t k = 1; k < empty.counts.size(); ++k) CHECK(empty.counts[k] == 0);
                CHECK_FALSE(crossing(SiteConfig::empty(t)));
            }
    }

    TEST_CASE("reached hidden vertex without outgoing edge") {
        const Topology t(2, 1);
        BitMask m(t.edge_count());
        m.set(t.edge_index(0, 0, 0));
        m.set(t.edge_index(1, 1, 1));
        const auto r = crossing_reach(BondConfig(t, m));
        CHECK(r.counts[1] == 1);
        CHECK(r.counts[2] == 0);
        CHECK_FALSE(r.crosses());
    }

    TEST_CASE("a fully removed hidden layer cuts the site graph") {
        const Topology t(3, 2);
        BitMask m(t.hidden_vertex_count(), true);
        for (std::size_t i = 0; i < 3; ++i) m.set(t.site_index(1, i), false);
        CHECK_FALSE(crossing(SiteConfig(t, m)));
    }

    TEST_CASE("sweep agrees with graph search on random configurations") {
        Stream rng(11);
        for (int trial = 0; trial < 400; ++trial) {
            const std::size_t w = 1 + rng() % 4, l = 1 + rng() % 5;
            const Topology t(w, l);
            const double keep = 0.2 + 0.6 * rng.uniform();

            const BondConfig bond(t, random_mask(t.edge_count(), keep, rng));
            const auto seen = oracle::reachable(oracle::bond_graph(w, l, flags_of(bond.present())));
            const auto prof = crossing_reach(bond);
            bool dead = false;
            for (std::size_t layer = 0; layer < t.vertex_layers(); ++layer) {
                for (std::size_t i = 0; i < w; ++i)
                    CHECK(prof.reached[layer].test(i) == (seen[layer * w + i] != 0));
                // 0 <= N <= W and an empty layer stays empty
                CHECK(prof.counts[layer] <= w);
                if (dead) CHECK(prof.counts[layer] == 0);
                dead = dead || prof.counts[layer] == 0;
            }
            CHECK(crossing(bond) == prof.crosses());

            const SiteConfig site(t, random_mask(t.hidden_vertex_count(), keep, rng));
            const bool expected = oracle::crosses(oracle::site_graph(w, l, flags_of(site.present())));
            CHECK(crossing(site) == expected);
            bool every_layer = true;
            for (std::size_t layer = 1; layer <= l; ++layer) {
                bool any = false;
                for (std::size_t i = 0; i < w; ++i) any = any || site.vertex(layer, i);
                every_layer = every_layer && any;
            }
            CHECK(crossing(site) == every_layer);
        }
    }

    TEST_CASE("adding a flag never shrinks a reached set") {
        Stream rng(12);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t w = 1 + rng() % 4, l = 1 + rng() % 4;
            const Topology t(w, l);
            BitMask m = random_mask(t.edge_count(), 0.5, rng);
            const auto before = crossing_reach(BondConfig(t, m));
            m.set(rng() % t.edge_count());
            const auto after = crossing_reach(BondConfig(t, m));
            for (std::size_t layer = 0; layer < t.vertex_layers(); ++layer)
                CHECK(before.reached[layer].subset_of(after.reached[layer]));

            BitMask s = random_mask(t.hidden_vertex_count(), 0.5, rng);
            const auto sb = crossing_reach(SiteConfig(t, s));
            s.set(rng() % t.hidden_vertex_count());
            const auto sa = crossing_reach(SiteConfig(t, s));
            for (std::size_t layer = 0; layer < t.vertex_layers(); ++layer)
                CHECK(sb.reached[layer].subset_of(sa.reached[layer]));
        }
    }

    TEST_CASE("depth zero bond graph is a single edge layer") {
        const Topology t(2, 0);
        BitMask m(t.edge_count());
        CHECK_FALSE(crossing(BondConfig(t, m)));
        m.set(t.edge_index(0, 1, 0));
        CHECK(crossing(BondConfig(t, m)));
    }
}
