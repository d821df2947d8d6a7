#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "odds/gauss_limits.hpp"

using namespace odds;
using namespace odds::limits;

TEST_CASE("laplace_ratio: identical integrands give 1 for every exponent") {
    auto profile = MaximumProfile::from_function(-3, 3, 2049,
                                                 [](double z) { return 1.0 / (1.0 + z * z); });
    for (double p : {1.0, 100.0, 12345.0})
        CHECK(laplace_ratio([](double z) { return 1.0 + z * z; },
                            [](double z) { return 1.0 + z * z; }, profile, p) ==
              doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("laplace_ratio: gaussian bump selects phi1(z0)/phi2(z0)") {
    // 16001 nodes put the peak z0 = 1 exactly on the grid
    auto profile = MaximumProfile::from_function(
        -5, 5, 16001, [](double z) { return std::exp(-(z - 1.0) * (z - 1.0)); });
    CHECK(std::abs(profile.peak_location() - 1.0) <= 10.0 / 16000);

    auto phi1 = [](double z) { return z + 2.0; };
    auto one = [](double) { return 1.0; };
    double prev_err = 1e9;
    for (double p : {100.0, 1000.0, 10000.0}) {
        const double err = std::abs(laplace_ratio(phi1, one, profile, p) - 3.0);
        // strictly decreasing until the fp floor (this symmetric profile
        // attains the limit exactly at every exponent)
        CHECK((err < prev_err || err < 1e-12));
        prev_err = err;
    }
    CHECK(prev_err < 1e-3);

    auto profile0 = MaximumProfile::from_function(-5, 5, 16001,
                                                  [](double z) { return std::exp(-z * z); });
    double prev0 = 1e9;
    for (double p : {100.0, 1000.0, 10000.0}) {
        const double err =
            std::abs(laplace_ratio([](double z) { return 1.0 + z * z; }, one, profile0, p) - 1.0);
        CHECK(err < prev0);  // genuine 1/p decay: E[1 + z^2] = 1 + width^2/(2p)
        prev0 = err;
    }
    CHECK(prev0 < 1e-3);
}

TEST_CASE("laplace_ratio: error ladder decreases on random smooth profiles") {
    RngStream rng(41);
    const int nodes = 16001;
    const double h = 10.0 / (nodes - 1);
    for (int trial = 0; trial < 20; ++trial) {
        // peak placed exactly on a grid node so the limit is unambiguous
        const double z0 = -5.0 + h * static_cast<double>(5600 + rng.below(4800));
        const double width = rng.uniform(0.5, 2.0);
        auto profile = MaximumProfile::from_function(-5, 5, nodes, [&](double z) {
            return std::exp(-(z - z0) * (z - z0) / (width * width));
        });
        const double c1 = rng.uniform(0.5, 2.0), c2 = rng.uniform(0.5, 2.0);
        auto phi1 = [&](double z) { return c1 + 0.3 * std::sin(z); };
        auto phi2 = [&](double z) { return c2 + 0.2 * std::cos(z); };
        const double truth = phi1(z0) / phi2(z0);
        double prev = 1e18;
        for (double p : {100.0, 1000.0, 10000.0}) {
            const double err = std::abs(laplace_ratio(phi1, phi2, profile, p) - truth);
            CHECK((err < prev || err < 1e-12));
            prev = err;
        }
    }
}

TEST_CASE("maximum profile validation") {
    CHECK_THROWS_AS(MaximumProfile(0, 1, {1.0, 1.0, 1.0}), std::invalid_argument);  // flat max
    CHECK_THROWS_AS(MaximumProfile(0, 1, {1.0, -1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("posterior_mode_check: gaussian member centers on the empirical mean") {
    // A(z) = z, B = -z^2/2: the gaussian member with h = 1
    ErrorLawFamily family(-4, 4, 4001, [](double z) { return z; }, [](double) { return 1.0; });
    CHECK(family.constraint_residual() <= 1e-12);
    const std::vector<double> data{0.0, 2.0};
    const auto rep = posterior_mode_check(family, data);
    CHECK(rep.mean == doctest::Approx(1.0));
    CHECK(rep.gap <= family.spacing());
}

TEST_CASE("posterior_mode_check: cubic exponent still centers on the mean") {
    ErrorLawFamily family(-4, 4, 8001, [](double z) { return z * z * z; },
                          [](double z) { return 3.0 * z * z; });
    const std::vector<double> data{-1.0, 0.0, 2.0};
    const auto rep = posterior_mode_check(family, data);
    CHECK(rep.mode == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    CHECK(rep.gap <= family.spacing() + 1e-12);

    // refined-grid numeric argmax oracle
    ErrorLawFamily fine(-4, 4, 32001, [](double z) { return z * z * z; },
                        [](double z) { return 3.0 * z * z; });
    const auto rep_fine = posterior_mode_check(fine, data);
    CHECK(rep_fine.gap <= fine.spacing() + 1e-12);
}

TEST_CASE("posterior_mode_check: a 1% constraint perturbation is flagged") {
    // B' = -(1+delta) z shifts the mode to mean/(1+delta); on a fine grid the
    // gap exceeds 10 grid spacings already at delta = 1%
    const int nodes = 16001;
    std::vector<double> A(nodes), Ap(nodes), B(nodes), Bp(nodes);
    const double zlo = -4, zhi = 4, h = (zhi - zlo) / (nodes - 1);
    const double delta = 0.01;
    double b_acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double z = zlo + h * i;
        A[static_cast<std::size_t>(i)] = z;
        Ap[static_cast<std::size_t>(i)] = 1.0;
        Bp[static_cast<std::size_t>(i)] = -(1.0 + delta) * z;
        B[static_cast<std::size_t>(i)] = b_acc;
        b_acc += Bp[static_cast<std::size_t>(i)] * h;
    }
    auto family = ErrorLawFamily::unchecked(zlo, zhi, A, Ap, B, Bp);
    CHECK(family.constraint_residual() > 0.009);
    const std::vector<double> data{0.0, 2.0};
    const auto rep = posterior_mode_check(family, data);
    CHECK(rep.gap > 10.0 * family.spacing());
    CHECK(rep.mode == doctest::Approx(1.0 / (1.0 + delta)).epsilon(1e-3));
}

TEST_CASE("posterior_mode_check: boundary mode raises a range error") {
    ErrorLawFamily family(-0.1, 0.1, 101, [](double z) { return z; }, [](double) { return 1.0; });
    const std::vector<double> data{5.0, 5.0};
    CHECK_THROWS_AS(posterior_mode_check(family, data), std::domain_error);
}

TEST_CASE("moment identity: closed form, quadrature and series at h=n=1") {
    const auto rep = moment_identity_check(1.0, 1.0, 0.0, 30);
    CHECK(rep.closed_form == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(rep.closed_form - rep.quadrature) <= 1e-8);
    CHECK(rep.residual <= 1e-4);
}

TEST_CASE("moment identity: n = 0 gives 1 on both sides") {
    const auto rep = moment_identity_check(1.0, 0.0, 0.0, 10);
    CHECK(rep.closed_form == 1.0);
    CHECK(rep.series == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("moment identity: geometric regime n = 1/2") {
    const auto rep = moment_identity_check(1.0, 0.5, 0.0, 30);
    CHECK(rep.closed_form == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
    CHECK(rep.residual <= 1e-4);
}

TEST_CASE("moment identity: nonzero y0 closed form vs quadrature") {
    const auto rep = moment_identity_check(2.0, 0.7, 1.3, 10);
    const double expect = std::sqrt(2.0 / 2.7) * std::exp(-2.0 * 0.7 * 1.69 / 2.7);
    CHECK(rep.closed_form == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(rep.closed_form - rep.quadrature) <= 1e-8);
}

TEST_CASE("l2 lln: uniform errors on [-1,1]") {
    auto density = DensityGrid::uniform(-1.0, 1.0, 1024, false);
    const auto rep = l2_lln_check(density, 100, 20000, RngStream(51));
    CHECK(rep.theory == doctest::Approx(1.0 / 300.0).epsilon(1e-6));
    CHECK(std::abs(rep.empirical - rep.theory) <= 0.1 * rep.theory);
    CHECK(std::abs(rep.empirical - rep.theory) <=
          5.0 * rep.theory / std::sqrt(20000.0) + 1e-12);

    const auto rep2 = l2_lln_check(density, 200, 1000, RngStream(52));
    CHECK(rep2.theory == doctest::Approx(rep.theory / 2.0).epsilon(1e-9));
}

TEST_CASE("l2 lln: degenerate density concentrated at zero") {
    auto density = DensityGrid::uniform(-1e-6, 1e-6, 64, false);
    const auto rep = l2_lln_check(density, 10, 1000, RngStream(53));
    CHECK(rep.theory <= 1e-12);
    CHECK(rep.empirical <= 1e-12);
}

TEST_CASE("characteristic function: normalization, arithmetic, product law") {
    FiniteDistribution pm({-1.0, 1.0}, {0.3, 0.7});
    const std::vector<double> alphas{0.0, 1.0};
    const auto f = characteristic_function(pm, alphas);
    CHECK(f[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f[1] == doctest::Approx(0.7 * std::exp(1.0) + 0.3 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(f[1] == doctest::Approx(2.0133).epsilon(1e-4));

    FiniteDistribution other({-1.0, 1.0}, {0.5, 0.5});
    const auto sum = convolve(pm, other);
    const std::vector<double> as{-0.7, -0.1, 0.3, 1.1, 2.0};
    const auto lhs = characteristic_function(sum, as);
    const auto fa = characteristic_function(pm, as);
    const auto fb = characteristic_function(other, as);
    for (std::size_t i = 0; i < as.size(); ++i)
        CHECK(std::abs(lhs[i] - fa[i] * fb[i]) <= 1e-12);
}

TEST_CASE("characteristic function: overflow raises range_error") {
    FiniteDistribution pm({-1000.0, 1000.0}, {0.5, 0.5});
    const std::vector<double> alphas{10.0};
    CHECK_THROWS_AS(characteristic_function(pm, alphas), std::range_error);
}

TEST_CASE("clt distance: normal errors pass at any n, uniform errors improve with n") {
    auto normal_density = DensityGrid::from_function(-8, 8, 4096, false, [](double y) {
        return std::exp(-0.5 * y * y);
    });
    CHECK(clt_distance(normal_density, 3, 100000, RngStream(61)) <= 0.01);

    auto uniform_density = DensityGrid::uniform(-std::sqrt(3.0), std::sqrt(3.0), 2048, false);
    const double d1 = clt_distance(uniform_density, 1, 50000, RngStream(62));
    const double d12 = clt_distance(uniform_density, 12, 50000, RngStream(62));
    CHECK(d12 < d1);
    // exact sup-difference oracle for n = 1: uniform CDF vs normal
    CHECK(d1 == doctest::Approx(0.0572).epsilon(0.15));
}

TEST_CASE("clt distance: two coin-flip errors stay far from gaussian") {
    // narrow spikes at +-1 approximate the coin flip on a grid
    auto coin = DensityGrid::from_function(-1.1, 1.1, 4096, false, [](double y) {
        const double s = 0.005;
        const double a = (y - 1.0) / s, b = (y + 1.0) / s;
        return std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b);
    });
    const double d = clt_distance(coin.standardized(), 2, 20000, RngStream(63));
    CHECK(d > 0.2);  // recorded, not failed: the 3-atom law is far from normal
}

TEST_CASE("sphere marginal: hat-box at n=3 and near-gaussian at n=1000") {
    const double hatbox = sphere_marginal_distance(3, 1, 100000, RngStream(71));
    CHECK(std::abs(hatbox - 0.0572) <= 0.01);  // closed-form oracle 0.05721

    const double big = sphere_marginal_distance(1000, 1, 100000, RngStream(72));
    CHECK(big < 0.02);
    CHECK(big < hatbox);  // monotone in dimension at equal N
}

TEST_CASE("sphere marginal: sampler matches the exact marginal CDF") {
    for (int n : {3, 1000}) {
        const auto cdf = sphere_marginal_cdf(n);
        const double d = sphere_marginal_distance_vs(n, 1, 100000, RngStream(73), cdf);
        CHECK(d < 0.01);
    }
}

TEST_CASE("sphere marginal: exact CDF for n=3 is the uniform hat-box") {
    const auto cdf = sphere_marginal_cdf(3);
    const double r = std::sqrt(3.0);
    for (double x : {-1.5, -0.3, 0.0, 0.9, 1.7})
        CHECK(cdf(x) == doctest::Approx((x + r) / (2 * r)).epsilon(1e-6));
}

TEST_CASE("sphere marginal: exact CDF for n=2 is the arcsine law") {
    const auto cdf = sphere_marginal_cdf(2);
    const double r = std::sqrt(2.0);
    for (double x : {-1.4, -0.7, 0.0, 0.5, 1.2, 1.4142}) {
        const double expect = 0.5 + std::asin(x / r) / 3.14159265358979323846;
        CHECK(std::abs(cdf(x) - expect) <= 1e-8);
    }
}

TEST_CASE("sphere marginal: multiple coordinates take the max KS") {
    const double one = sphere_marginal_distance(50, 1, 20000, RngStream(74));
    const double three = sphere_marginal_distance(50, 3, 20000, RngStream(74));
    CHECK(three >= one - 1e-12);
}

TEST_CASE("sphere marginal: serial equals parallel bitwise") {
    CHECK(sphere_marginal_distance(30, 2, 20000, RngStream(75), Exec::serial) ==
          sphere_marginal_distance(30, 2, 20000, RngStream(75), Exec::parallel));
}
