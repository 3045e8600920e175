#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracle.hpp"
#include "perc/exact.hpp"

using namespace perc;

namespace {

Prob P(double v) { return Prob::from_value(v); }

}  // namespace

TEST_SUITE("exact") {
    TEST_CASE("Prob keeps value and logs consistent") {
        for (double v : {0.0, 1e-300, 1e-20, 0.25, 0.5, 0.999999, 1.0}) {
            const Prob p = P(v);
            CHECK(p.value() == v);
            if (v > 1e-300) CHECK(std::exp(p.log_value()) == doctest::Approx(v).epsilon(1e-14));
            if (1.0 - v > 1e-300) CHECK(std::exp(p.log_complement()) == doctest::Approx(1.0 - v).epsilon(1e-14));
        }
        CHECK_THROWS_AS(P(-0.1), std::domain_error);
        CHECK_THROWS_AS(P(1.5), std::domain_error);
        CHECK_THROWS_AS(P(std::nan("")), std::domain_error);
        // p^(W^2) far below the double range still has a usable complement
        const Prob tiny = P(0.5).pow(64.0 * 64.0);
        CHECK(tiny.value() == 0.0);
        CHECK(tiny.log_value() == doctest::Approx(-4096.0 * std::log(2.0)));
        CHECK(tiny.log_complement() == 0.0);
        CHECK(P(0.0).pow(0.0).value() == 1.0);
    }

    TEST_CASE("transition kernel rows") {
        for (std::size_t w : {1u, 3u, 16u, 512u})
            for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) {
                const TransitionKernel k(w, P(p));
                CHECK(k(0, 0) == 1.0);
                for (std::size_t m = 1; m <= w; ++m) CHECK(k(0, m) == 0.0);
                for (std::size_t n = 0; n <= w; ++n) {
                    double s = 0.0;
                    for (std::size_t m = 0; m <= w; ++m) s += k(n, m);
                    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
                }
                // the full row dominates every other row stochastically
                for (std::size_t n = 0; n < w; ++n) {
                    double cum_top = 0.0, cum_n = 0.0;
                    for (std::size_t m = 0; m <= w; ++m) {
                        cum_top += k(w, m);
                        cum_n += k(n, m);
                        CHECK(cum_top <= cum_n + 1e-12);
                    }
                }
            }
        // W = 2, p = 0.5, one reached vertex: Bin(2, 1/2)
        const TransitionKernel k(2, P(0.5));
        CHECK(k(1, 0) == doctest::Approx(0.25));
        CHECK(k(1, 1) == doctest::Approx(0.5));
        CHECK(k(2, 2) == doctest::Approx(0.5625));
    }

    TEST_CASE("site closed form") {
        const double frozen = 0.421875;  // oracle::site_theta(2, 3, 0.5)
        CHECK(oracle::site_theta(2, 3, 0.5) == doctest::Approx(frozen).epsilon(1e-15));
        CHECK(theta_site(P(0.5), Topology(2, 3)).value() == doctest::Approx(frozen).epsilon(1e-15));
        for (std::size_t w : {1u, 4u})
            for (std::size_t l : {1u, 7u}) {
                CHECK(theta_site(P(0.0), Topology(w, l)).value() == 1.0);
                CHECK(theta_site(P(1.0), Topology(w, l)).value() == 0.0);
            }
        CHECK_THROWS_AS(theta_site(P(0.5), Topology(2, 0)), std::invalid_argument);
    }

    TEST_CASE("bond Markov chain") {
        CHECK(oracle::bond_theta(1, 1, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(oracle::bond_theta(2, 1, 0.5) == doctest::Approx(0.80859375).epsilon(1e-15));
        CHECK(theta_bond_dp(P(0.5), Topology(1, 1)).value() == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(theta_bond_dp(P(0.5), Topology(2, 1)).value() == doctest::Approx(0.80859375).epsilon(1e-15));
        for (std::size_t w : {1u, 3u, 10u}) {
            CHECK(theta_bond_dp(P(0.0), Topology(w, 5)).value() == 1.0);
            CHECK(theta_bond_dp(P(1.0), Topology(w, 5)).value() == 0.0);
        }
        // depth zero: some of the W^2 edges survives
        CHECK(theta_bond_dp(P(0.5), Topology(2, 0)).value() == doctest::Approx(1.0 - 0.0625));
    }

    TEST_CASE("brute force matches the graph-search oracle and the closed forms") {
        for (std::size_t w = 1; w <= 3; ++w)
            for (std::size_t l = 1; l <= 2; ++l)
                for (int k = 1; k <= 9; ++k) {
                    const double p = k / 10.0;
                    const Topology t(w, l);
                    if (w * w * (l + 1) <= bruteforce_flag_budget) {
                        const double bf = theta_bruteforce(Model::bond, P(p), t).value();
                        CHECK(std::abs(bf - oracle::bond_theta(w, l, p)) <= 1e-12);
                        CHECK(std::abs(theta_bond_dp(P(p), t).value() - bf) <= 1e-12);
                    }
                    const double bf = theta_bruteforce(Model::site, P(p), t).value();
                    CHECK(std::abs(bf - oracle::site_theta(w, l, p)) <= 1e-12);
                    CHECK(std::abs(theta_site(P(p), t).value() - bf) <= 1e-12);
                }
        CHECK(theta_bruteforce(Model::bond, P(1.0), Topology(2, 1)).value() == 0.0);
        CHECK(theta_bruteforce(Model::site, P(1.0), Topology(2, 3)).value() == 0.0);
        CHECK_THROWS_AS(theta_bruteforce(Model::bond, P(0.5), Topology(3, 2)), std::invalid_argument);
        CHECK_THROWS_AS(theta_bruteforce(Model::site, P(0.5), Topology(5, 5)), std::invalid_argument);
    }

    TEST_CASE("sandwich and coupling bounds") {
        const auto b = bond_bounds(P(0.5), Topology(2, 1));
        CHECK(b.lower.value() == doctest::Approx(0.5625).epsilon(1e-15));
        CHECK(b.upper.value() == doctest::Approx(0.87890625).epsilon(1e-15));
        CHECK(site_coupling_bound(P(0.5), Topology(2, 1)).value() == doctest::Approx(0.9375).epsilon(1e-15));
        CHECK(bond_bounds(P(0.0), Topology(3, 4)).lower.value() == 1.0);
        CHECK(bond_bounds(P(0.0), Topology(3, 4)).upper.value() == 1.0);
        CHECK(bond_bounds(P(1.0), Topology(3, 4)).lower.value() == 0.0);
        CHECK(bond_bounds(P(1.0), Topology(3, 4)).upper.value() == 0.0);
        CHECK(site_coupling_bound(P(0.0), Topology(3, 4)).value() == 1.0);
        CHECK(site_coupling_bound(P(1.0), Topology(3, 4)).value() == 0.0);

        for (std::size_t w = 1; w <= 8; ++w)
            for (std::size_t l : {1u, 2u, 5u, 16u, 32u})
                for (int k = 1; k <= 19; ++k) {
                    const Prob p = P(0.05 * k);
                    const Topology t(w, l);
                    const double dp = theta_bond_dp(p, t).value();
                    const auto bb = bond_bounds(p, t);
                    CHECK(dp - bb.lower.value() >= -1e-12);
                    CHECK(bb.upper.value() - dp >= -1e-12);
                    CHECK(site_coupling_bound(p, t).value() - dp >= -1e-12);
                }
    }

    TEST_CASE("monotone in p and W") {
        for (std::size_t l : {1u, 4u, 20u})
            for (std::size_t w = 1; w <= 6; ++w)
                for (int k = 1; k < 19; ++k) {
                    const double here = theta_bond_dp(P(0.05 * k), Topology(w, l)).value();
                    CHECK(theta_bond_dp(P(0.05 * (k + 1)), Topology(w, l)).value() <= here + 1e-12);
                    CHECK(theta_bond_dp(P(0.05 * k), Topology(w + 1, l)).value() >= here - 1e-12);
                }
    }

    TEST_CASE("deep wide chain stays finite") {
        const Prob th = theta_bond_dp(P(0.5), Topology(64, 1000000));
        CHECK_FALSE(std::isnan(th.value()));
        CHECK(th.value() >= 0.0);
        CHECK(th.value() <= 1.0);
    }
}
