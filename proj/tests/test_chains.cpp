#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "odds/chains.hpp"

using namespace odds;
using namespace odds::chains;

namespace {

TransitionKernel two_state(double p) {
    return TransitionKernel({{p, 1 - p}, {1 - p, p}});
}

// Birkhoff-style random doubly stochastic kernel with strictly positive
// entries: convex mix of permutation matrices plus a uniform floor.
TransitionKernel random_doubly_stochastic(std::size_t k, double floor_weight, RngStream& rng) {
    std::vector<std::vector<double>> m(k, std::vector<double>(k, floor_weight / k));
    double remaining = 1.0 - floor_weight;
    std::vector<std::size_t> perm(k);
    for (int shot = 0; shot < 8; ++shot) {
        const double w = shot == 7 ? remaining : remaining * rng.uniform01();
        remaining -= shot == 7 ? remaining : w;
        for (std::size_t i = 0; i < k; ++i) perm[i] = i;
        for (std::size_t i = k; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        for (std::size_t i = 0; i < k; ++i) m[perm[i]][i] += w;
    }
    return TransitionKernel(std::move(m));
}

}  // namespace

TEST_CASE("two_card_expectation: direct evaluation of (2p-1)^n") {
    CHECK(two_card_expectation(1.0, 7) == 1.0);
    CHECK(two_card_expectation(0.5, 1) == 0.0);
    CHECK(two_card_expectation(0.9, 3) == doctest::Approx(0.512).epsilon(1e-15));
}

TEST_CASE("two_card_mc: exact at p=1, near the closed form otherwise") {
    CHECK(two_card_mc(1.0, 5, 100, RngStream(1)) == 1.0);
    const double mc = two_card_mc(0.9, 3, 1000000, RngStream(2));
    CHECK(std::abs(mc - 0.512) <= 0.004);
    const double sym = two_card_mc(0.5, 10, 1000000, RngStream(3));
    CHECK(std::abs(sym) <= 0.004);
}

TEST_CASE("two_card_mc: serial equals parallel bitwise") {
    const double a = two_card_mc(0.7, 4, 200001, RngStream(5), Exec::serial);
    const double b = two_card_mc(0.7, 4, 200001, RngStream(5), Exec::parallel);
    CHECK(a == b);
}

TEST_CASE("shuffle_kernel: two cards gives [[p,1-p],[1-p,p]]") {
    const auto k = shuffle_kernel(2, DiscreteDistribution({0.3, 0.7}));
    CHECK(k.entry(0, 0) == doctest::Approx(0.3));
    CHECK(k.entry(1, 0) == doctest::Approx(0.7));
    CHECK(k.entry(0, 1) == doctest::Approx(0.7));
    CHECK(k.entry(1, 1) == doctest::Approx(0.3));
}

TEST_CASE("shuffle_kernel: uniform law uniformizes in one step") {
    const auto k = shuffle_kernel(3, DiscreteDistribution::uniform(6));
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t h = 0; h < 6; ++h) CHECK(k.entry(j, h) == doctest::Approx(1.0 / 6));
}

TEST_CASE("shuffle_kernel: lazy fixed transposition is doubly stochastic with zeros") {
    // group-table oracle: swapping cards 0,1 maps each permutation to exactly
    // one other, so each column holds 1/2 at h and 1/2 at swap(h)
    std::vector<double> law(6, 0.0);
    const auto perms = permutation_table(3);
    law[0] = 0.5;  // identity (lexicographically first)
    // find the transposition (1,0,2)
    for (std::size_t g = 0; g < perms.size(); ++g)
        if (perms[g][0] == 1 && perms[g][1] == 0 && perms[g][2] == 2) law[g] = 0.5;
    const auto k = shuffle_kernel(3, DiscreteDistribution(law));
    int zeros = 0, halves = 0;
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t h = 0; h < 6; ++h) {
            if (k.entry(j, h) == 0.0) ++zeros;
            if (k.entry(j, h) == 0.5) ++halves;
        }
    CHECK(zeros == 24);
    CHECK(halves == 12);
    CHECK(k.min_entry() == 0.0);
}

TEST_CASE("shuffle_kernel: rejects m > 5") {
    CHECK_THROWS_AS(shuffle_kernel(6, DiscreteDistribution::uniform(720)), std::invalid_argument);
}

TEST_CASE("kernel validation: rows and columns must sum to one") {
    CHECK_THROWS_AS(TransitionKernel({{0.6, 0.3}, {0.4, 0.7}}), std::invalid_argument);
    CHECK_THROWS_AS(TransitionKernel({{1.1, -0.1}, {-0.1, 1.1}}), std::invalid_argument);
}

TEST_CASE("iterate_distribution: hand-checked one step and envelope trace") {
    const auto k = two_state(0.7);
    const auto res = iterate_distribution(k, 1, DiscreteDistribution::point_mass(2, 0));
    CHECK(res.final[0] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(res.final[1] == doctest::Approx(0.3).epsilon(1e-15));
    REQUIRE(res.trace.size() == 2);
    CHECK(res.trace[1].upper - res.trace[1].lower == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("iterate_distribution: uniform is stationary for doubly stochastic kernels") {
    RngStream rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 2 + rng.below(11);
        const auto kernel = random_doubly_stochastic(k, 0.2, rng);
        const auto res = iterate_distribution(kernel, 5, DiscreteDistribution::uniform(k));
        CHECK(tv_distance(res.final, DiscreteDistribution::uniform(k)) <= 1e-12);
    }
}

TEST_CASE("iterate_distribution: spread after n steps is (2p-1)^n on two states") {
    const auto res = iterate_distribution(two_state(0.7), 5, DiscreteDistribution::point_mass(2, 0));
    const double spread = res.trace.back().upper - res.trace.back().lower;
    CHECK(spread == doctest::Approx(std::pow(0.4, 5)).epsilon(1e-12));
}

TEST_CASE("envelopes are monotone along any run") {
    RngStream rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 2 + rng.below(23);
        const auto kernel = random_doubly_stochastic(k, 0.1, rng);
        std::vector<double> w(k);
        for (auto& x : w) x = rng.uniform01() + 1e-6;
        const auto res = iterate_distribution(kernel, 30, DiscreteDistribution(std::move(w), true));
        for (std::size_t i = 1; i < res.trace.size(); ++i) {
            CHECK(res.trace[i].upper <= res.trace[i - 1].upper + 1e-12);
            CHECK(res.trace[i].lower >= res.trace[i - 1].lower - 1e-12);
        }
    }
}

TEST_CASE("borel certificate: symmetric two-state chain saturates the bound") {
    const auto k = two_state(0.7);  // eps = 0.3, factor 1 - 2*0.3 = 0.4
    std::vector<TransitionKernel> ks(8, k);
    const auto rows = borel_contraction_certificate(ks, DiscreteDistribution::point_mass(2, 0));
    REQUIRE(rows.size() == 9);
    for (const auto& r : rows) {
        CHECK(r.spread == doctest::Approx(r.bound).epsilon(1e-12));
        CHECK(r.spread <= r.bound + 1e-12);
    }
}

TEST_CASE("borel certificate: uniform start keeps zero spread") {
    std::vector<TransitionKernel> ks(5, two_state(0.8));
    const auto rows = borel_contraction_certificate(ks, DiscreteDistribution::uniform(2));
    for (const auto& r : rows) CHECK(r.spread <= 1e-15);
}

TEST_CASE("borel certificate: inhomogeneous chain follows per-step eigenvalues") {
    std::vector<TransitionKernel> ks;
    for (int i = 0; i < 10; ++i) ks.push_back(two_state(i % 2 == 0 ? 0.7 : 0.6));
    const auto rows = borel_contraction_certificate(ks, DiscreteDistribution::point_mass(2, 0));
    // spread after 10 alternating steps equals the product of per-step factors
    CHECK(rows.back().spread ==
          doctest::Approx(std::pow(0.4 * 0.2, 5)).epsilon(1e-10));
    CHECK(rows.back().spread <= std::pow(0.4, 10) + 1e-12);  // common eps = 0.3
    CHECK(rows.back().bound == doctest::Approx(std::pow(0.4, 10)).epsilon(1e-12));
}

TEST_CASE("borel certificate: refuses kernels with a zero entry") {
    std::vector<TransitionKernel> ks{two_state(1.0)};
    CHECK_THROWS_AS(borel_contraction_certificate(ks, DiscreteDistribution::uniform(2)),
                    std::domain_error);
}

TEST_CASE("doeblin contraction per step on random kernels") {
    RngStream rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 2 + rng.below(23);
        const auto kernel = random_doubly_stochastic(k, 0.3, rng);
        const double factor = 1.0 - static_cast<double>(k) * kernel.min_entry();
        const auto res = iterate_distribution(kernel, 20, DiscreteDistribution::point_mass(k, 0));
        for (std::size_t i = 1; i < res.trace.size(); ++i) {
            const double prev = res.trace[i - 1].upper - res.trace[i - 1].lower;
            const double cur = res.trace[i].upper - res.trace[i].lower;
            CHECK(cur <= factor * prev + 1e-12);
        }
    }
}

TEST_CASE("mixing_time: one-step uniformization and the two-state closed form") {
    CHECK(mixing_time(shuffle_kernel(3, DiscreteDistribution::uniform(6)), 1e-4) == 1);

    // two-state p = 0.7: tv after n steps is 0.5 * 0.4^n from a point mass;
    // the smallest n with 0.5 * 0.4^n <= 1e-3 is 7 (iteration oracle below)
    const auto k = two_state(0.7);
    CHECK(mixing_time(k, 1e-3) == 7);
    auto p = DiscreteDistribution::point_mass(2, 0);
    std::uint64_t oracle = 0;
    while (tv_distance(p, DiscreteDistribution::uniform(2)) > 1e-3) {
        p = k.apply(p);
        ++oracle;
    }
    CHECK(oracle == 7);
}

TEST_CASE("mixing_time: lazy transposition chain matches the matrix-power oracle") {
    std::vector<double> law(6, 0.0);
    const auto perms = permutation_table(3);
    law[0] = 0.5;
    for (std::size_t g = 0; g < perms.size(); ++g) {
        int moved = 0;
        for (std::size_t i = 0; i < 3; ++i) moved += perms[g][i] != i;
        if (moved == 2) law[g] = 0.5 / 3.0;
    }
    const auto k = shuffle_kernel(3, DiscreteDistribution(law));
    // oracle: direct iteration from the worst start
    std::uint64_t oracle = 0;
    for (std::size_t s = 0; s < 6; ++s) {
        auto p = DiscreteDistribution::point_mass(6, s);
        std::uint64_t n = 0;
        while (tv_distance(p, DiscreteDistribution::uniform(6)) > 1e-3) {
            p = k.apply(p);
            ++n;
        }
        oracle = std::max(oracle, n);
    }
    CHECK(mixing_time(k, 1e-3) == oracle);
}

TEST_CASE("mixing_time: periodic kernel raises a divergence error") {
    // pure swap chain alternates forever
    CHECK_THROWS_AS(mixing_time(two_state(0.0), 1e-3), std::runtime_error);
}

TEST_CASE("monte carlo paths agree with exact iteration within 4/sqrt(N)") {
    const auto k = two_state(0.7);
    const std::uint64_t paths = 1000000;
    const auto exact = iterate_distribution(k, 3, DiscreteDistribution::point_mass(2, 0));
    const auto mc = simulate_paths(k, 3, paths, 0, RngStream(23));
    const double tol = 4.0 / std::sqrt(static_cast<double>(paths));
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(mc[j] - exact.final[j]) <= tol);

    const auto mc_serial = simulate_paths(k, 3, 100001, 0, RngStream(23), Exec::serial);
    const auto mc_par = simulate_paths(k, 3, 100001, 0, RngStream(23), Exec::parallel);
    for (std::size_t j = 0; j < 2; ++j) CHECK(mc_serial[j] == mc_par[j]);
}
