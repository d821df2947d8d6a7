#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "odds/density_grid.hpp"
#include "odds/metrics.hpp"
#include "odds/parallel.hpp"
#include "odds/quadrature.hpp"
#include "odds/rng.hpp"

using namespace odds;

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

TEST_CASE("rng reproducibility: same (seed, stream) gives the same sequence") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng stability: frozen outputs pin the generator constants") {
    RngStream a(0, 0);
    CHECK(a.next_u64() == 13969980599120349642ULL);
    CHECK(a.next_u64() == 10576142948126356271ULL);
    CHECK(a.next_u64() == 14372474100850302156ULL);
    CHECK(a.next_u64() == 3438694152676898593ULL);
    RngStream b(12345, 678);
    CHECK(b.next_u64() == 7097795643195989866ULL);
    CHECK(b.next_u64() == 12030396917249534830ULL);
    CHECK(RngStream(42, 0).uniform01() == 0.41955907884597798);
}

TEST_CASE("rng streams: different ids decorrelate, substreams are stable") {
    RngStream a(42, 0), b(42, 1);
    int agree = 0;
    for (int i = 0; i < 64; ++i) agree += a.next_u64() == b.next_u64();
    CHECK(agree == 0);

    RngStream parent(9, 3);
    RngStream c1 = parent.substream(5), c2 = parent.substream(5), c3 = parent.substream(6);
    CHECK(c1.next_u64() == c2.next_u64());
    CHECK(c1.next_u64() != c3.next_u64());
}

TEST_CASE("rng uniform01 lies in [0,1) and fills the range") {
    RngStream r(1);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);
}

TEST_CASE("parallel kernels: serial and parallel paths are bit-identical") {
    auto term = [](std::uint64_t i) {
        RngStream r(11, i);
        return r.uniform01() - 0.5;
    };
    const double s1 = par::chunked_sum(100001, term, Exec::serial);
    const double s2 = par::chunked_sum(100001, term, Exec::parallel);
    CHECK(s1 == s2);

    par::set_worker_count(3);
    const double s3 = par::chunked_sum(100001, term, Exec::parallel);
    CHECK(s1 == s3);
    par::set_worker_count(1);

    auto pred = [](std::uint64_t i) { return (i * 2654435761u) % 7 == 0; };
    CHECK(par::chunked_count(54321, pred, Exec::serial) ==
          par::chunked_count(54321, pred, Exec::parallel));
}

TEST_CASE("quadrature: spec examples") {
    CHECK(std::abs(simpson([](double x) { return x * x; }, 0.0, 1.0, 64) - 1.0 / 3.0) < 1e-12);
    CHECK(simpson([](double) { return 1.0; }, 0.0, 2.0, 2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 128) -
                   (std::exp(1.0) - 1.0)) < 1e-10);
}

TEST_CASE("quadrature: exact on cubics for any even interval count") {
    RngStream r(5);
    for (int trial = 0; trial < 50; ++trial) {
        const double c0 = r.uniform(-2, 2), c1 = r.uniform(-2, 2), c2 = r.uniform(-2, 2),
                     c3 = r.uniform(-2, 2);
        const double a = r.uniform(-2, 0), b = r.uniform(0.1, 2);
        auto f = [&](double x) { return c0 + x * (c1 + x * (c2 + x * c3)); };
        auto F = [&](double x) {
            return c0 * x + c1 * x * x / 2 + c2 * x * x * x / 3 + c3 * x * x * x * x / 4;
        };
        const int n = 2 + 2 * static_cast<int>(r.below(8));
        CHECK(std::abs(simpson(f, a, b, n) - (F(b) - F(a))) < 1e-12);
    }
}

TEST_CASE("quadrature: rejects odd interval counts and non-finite integrands") {
    CHECK_THROWS_AS(simpson([](double) { return 1.0; }, 0, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(simpson([](double x) { return 1.0 / x; }, 0, 1, 4), std::runtime_error);
}

TEST_CASE("density grid: normalization and exact integrals") {
    auto g = DensityGrid::from_function(0.0, 2.0, 4096, false, [](double x) { return x + 0.25; });
    CHECK(g.integral(0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.integral(0.0, 1.0) + g.integral(1.0, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // normalized density of x + 0.25 on [0,2]: divide by its mass 2.5
    CHECK(g.value_at(1.0) == doctest::Approx(1.25 / 2.5).epsilon(1e-12));
    CHECK_THROWS_AS(DensityGrid(0.0, 1.0, {1.0, -0.5, 1.0}, false), std::invalid_argument);
    CHECK_THROWS_AS(DensityGrid(0.0, 1.0, {0.0, 0.0}, false), std::invalid_argument);
}

TEST_CASE("density grid: periodic wrap integrals") {
    auto g = DensityGrid::from_function(0.0, 1.0, 1024, true,
                                        [](double x) { return 1.0 + 0.5 * std::sin(kTwoPi * x); });
    CHECK(g.integral(0.7, 1.3) ==
          doctest::Approx(g.integral(0.7, 1.0) + g.integral(0.0, 0.3)).epsilon(1e-12));
    CHECK(g.value_at(-0.25) == doctest::Approx(g.value_at(0.75)).epsilon(1e-12));
}

TEST_CASE("density grid: moments of the uniform density on [-1,1]") {
    auto g = DensityGrid::uniform(-1.0, 1.0, 2048, false);
    CHECK(std::abs(g.mean()) < 1e-12);
    CHECK(g.second_moment() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(g.tv_to_uniform() < 1e-12);
}

TEST_CASE("density grid: inverse-CDF sampling matches the density (KS test)") {
    auto g = DensityGrid::from_function(0.0, 1.0, 512, false, [](double x) { return 2.0 * x; });
    RngStream r(77);
    std::vector<double> xs(20000);
    for (auto& x : xs) x = g.sample(r);
    const double d = ks_statistic(xs, [](double x) { return x * x; });
    CHECK(d < 0.015);  // KS 1% critical value at n=20000 is ~0.0115
}

TEST_CASE("density grid 2d: bilinear integral and marginal are exact for x+y") {
    auto g = DensityGrid2D::from_function(0, 1, 0, 1, 33, 33, false,
                                          [](double x, double y) { return x + y; });
    // already normalized: total mass of x+y on the unit square is 1
    CHECK(g.integral(0, 1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.integral(0, 0.25, 0, 1) == doctest::Approx(0.25 * 0.125 + 0.25 * 0.5).epsilon(1e-12));
    auto m = g.x_marginal();
    CHECK(m.value_at(0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density grid 2d: sampling follows the marginal") {
    auto g = DensityGrid2D::from_function(0, 1, 0, 1, 65, 65, false,
                                          [](double x, double y) { return x + y; });
    RngStream r(123);
    std::vector<double> xs(20000);
    for (auto& x : xs) {
        auto [a, b] = g.sample(r);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        x = a;
    }
    // marginal in x of (x+y) is x + 1/2, CDF = (x^2 + x)/2
    const double d = ks_statistic(xs, [](double x) { return 0.5 * (x * x + x); });
    CHECK(d < 0.015);
}

TEST_CASE("density grid 2d: sampling respects a circular y axis") {
    // product density uniform in x, (1 + cos y)/(2pi) on the circle
    auto g = DensityGrid2D::from_function(0, 1, 0, kTwoPi, 17, 256, true,
                                          [](double, double y) { return 1.0 + std::cos(y); });
    RngStream r(31);
    std::vector<double> ys(30000);
    for (auto& y : ys) {
        auto [a, b] = g.sample(r);
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
        CHECK(b >= 0.0);
        CHECK(b < kTwoPi);
        y = b;
    }
    const double d = ks_statistic(ys, [](double y) { return (y + std::sin(y)) / kTwoPi; });
    CHECK(d < 0.012);
}

TEST_CASE("tv_distance: spec examples and metric properties") {
    DiscreteDistribution p({1.0, 0.0}), q({0.0, 1.0});
    CHECK(tv_distance(p, p) == 0.0);
    CHECK(tv_distance(p, q) == 1.0);
    CHECK(tv_distance(DiscreteDistribution({0.75, 0.25}), DiscreteDistribution({0.5, 0.5})) ==
          doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(tv_distance(p, DiscreteDistribution({1.0, 0.0, 0.0})), std::invalid_argument);

    RngStream r(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto rand_dist = [&] {
            std::vector<double> w(4);
            for (auto& x : w) x = r.uniform01() + 1e-3;
            return DiscreteDistribution(std::move(w), true);
        };
        const auto a = rand_dist(), b = rand_dist(), c = rand_dist();
        const double ab = tv_distance(a, b), ba = tv_distance(b, a);
        CHECK(ab == ba);
        CHECK(tv_distance(a, c) <= ab + tv_distance(b, c) + 1e-15);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("ks_statistic: spec examples") {
    // quantile construction: samples at cdf quantiles (i - 1/2)/n
    const int n = 100;
    std::vector<double> qs(n);
    for (int i = 0; i < n; ++i) qs[static_cast<std::size_t>(i)] = (i + 0.5) / n;  // cdf(x) = x
    CHECK(ks_statistic(qs, [](double x) { return x; }) <= 0.5 / n + 1e-12);

    CHECK(ks_statistic({0.5}, [](double x) { return x; }) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ks_statistic({}, [](double x) { return x; }), std::invalid_argument);
}

TEST_CASE("ks_statistic: 1e5 normal variates vs the normal CDF") {
    RngStream r(2024);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = r.normal();
    const double d = ks_statistic(xs, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
    CHECK(d < 0.01);  // Kolmogorov tail: P(D > 0.0052) ~ 0.01 at n = 1e5
}

TEST_CASE("fourier_coefficient: uniform density vanishes, cosine density is exact") {
    auto uniform = DensityGrid::uniform(0.0, kTwoPi, 4096, true);
    for (int n = 1; n <= 8; ++n) {
        auto [c, s] = fourier_coefficient(uniform, n);
        CHECK(std::abs(c) < 1e-10);
        CHECK(std::abs(s) < 1e-10);
    }
    auto cosine = DensityGrid::from_function(0.0, kTwoPi, 4096, true,
                                             [](double u) { return (1.0 + std::cos(u)) / kTwoPi; });
    auto [c1, s1] = fourier_coefficient(cosine, 1);
    CHECK(c1 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(s1) < 1e-10);
    auto [c2, s2] = fourier_coefficient(cosine, 2);
    CHECK(std::abs(c2) < 1e-10);
    CHECK(std::abs(s2) < 1e-10);

    CHECK_THROWS_AS(fourier_coefficient(uniform, 0), std::invalid_argument);
    CHECK_THROWS_AS(fourier_coefficient(DensityGrid::uniform(0, 1, 16, false), 1),
                    std::invalid_argument);
}

TEST_CASE("density grid: standardized has zero mean and unit variance") {
    auto g = DensityGrid::from_function(0.0, 3.0, 2048, false,
                                        [](double x) { return 0.2 + (x - 1.0) * (x - 1.0); });
    auto s = g.standardized();
    CHECK(std::abs(s.mean()) < 1e-9);
    CHECK(s.variance() == doctest::Approx(1.0).epsilon(1e-9));
}
