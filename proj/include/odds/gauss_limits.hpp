#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "odds/density_grid.hpp"
#include "odds/metrics.hpp"
#include "odds/parallel.hpp"
#include "odds/rng.hpp"

namespace odds::limits {

/// Standard normal CDF.
double normal_cdf(double x);

/// Positive function tabulated on [lo,hi] with a unique maximum on the grid.
class MaximumProfile {
public:
    MaximumProfile(double lo, double hi, std::vector<double> values);
    static MaximumProfile from_function(double lo, double hi, int nodes,
                                        const std::function<double(double)>& f);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& values() const { return values_; }
    double peak_location() const;  // z0
    double peak_value() const;

private:
    double lo_, hi_;
    std::vector<double> values_;
    std::size_t argmax_;
};

/// Ratio of integrals int phi1 Phi^p / int phi2 Phi^p with Phi max-normalized
/// before exponentiation. Tends to phi1(z0)/phi2(z0) as p grows.
double laplace_ratio(const std::function<double(double)>& phi1,
                     const std::function<double(double)>& phi2, const MaximumProfile& profile,
                     double exponent);

/// Error-law family phi(x, z) = theta(x) exp(A(z) x + B(z)) on a z-grid,
/// with the Gauss constraint A'(z) z + B'(z) = 0.
class ErrorLawFamily {
public:
    /// Builds B by integrating -A'(z) z from the left edge (constraint exact).
    ErrorLawFamily(double zlo, double zhi, int nodes, const std::function<double(double)>& A,
                   const std::function<double(double)>& A_prime);

    /// Raw constructor for perturbation experiments; does not enforce the
    /// constraint (query it with constraint_residual()).
    static ErrorLawFamily unchecked(double zlo, double zhi, std::vector<double> A,
                                    std::vector<double> A_prime, std::vector<double> B,
                                    std::vector<double> B_prime);

    double zlo() const { return zlo_; }
    double zhi() const { return zhi_; }
    std::size_t size() const { return A_.size(); }
    double z_at(std::size_t i) const;
    double spacing() const;

    /// max_i |A'(z_i) z_i + B'(z_i)|.
    double constraint_residual() const;

    /// log-posterior of z given data under a flat prior, up to the constant
    /// sum of log theta(x_i): A(z) sum(x) + n B(z).
    double log_posterior(std::size_t zi, double data_sum, std::size_t n) const;

private:
    ErrorLawFamily() = default;
    double zlo_ = 0, zhi_ = 0;
    std::vector<double> A_, A_prime_, B_, B_prime_;
};

struct PosteriorModeReport {
    double mode;
    double mean;
    double gap;
};

/// Grid argmax of the posterior against the empirical mean. When the family
/// constraint holds the gap is at most one grid spacing; mode on the grid
/// boundary raises a range error.
PosteriorModeReport posterior_mode_check(const ErrorLawFamily& family,
                                         std::span<const double> data);

struct MomentIdentityReport {
    double closed_form;  // sqrt(h/(h+n)) * exp(-h n y0^2 / (h+n))
    double quadrature;
    double series;       // even-moment expansion at y0 = 0
    double residual;     // |closed_form(y0=0) - series|
};

/// Gaussian-moment identity for E[e^{-n (y0-y)^2}] under N(0, 1/(2h)): the
/// closed form, a direct quadrature, and the truncated even-moment series
/// sum_p A_p E[y^{2p}] evaluated with iterated partial-sum averaging (the
/// series converges only conditionally at n = h and diverges for n > h; the
/// residual is reported, not asserted).
MomentIdentityReport moment_identity_check(double h, double n, double y0, int truncation);

struct L2LawReport {
    double empirical;  // mean over replicates of (sample mean)^2
    double theory;     // E[y^2] / n
};

/// L2 law of large numbers for the mean of n draws from a centered density.
L2LawReport l2_lln_check(const DensityGrid& error_density, int n, std::uint64_t replicates,
                         RngStream rng, Exec exec = Exec::parallel);

/// Finite distribution with explicit support points.
struct FiniteDistribution {
    std::vector<double> points;
    std::vector<double> weights;

    FiniteDistribution(std::vector<double> pts, std::vector<double> wts);
};

/// f(alpha) = sum_x p_x e^{alpha x} at each alpha; overflow raises range_error.
std::vector<double> characteristic_function(const FiniteDistribution& dist,
                                            std::span<const double> alphas);

/// Distribution of the sum of two independent finite variables (exact support
/// merge).
FiniteDistribution convolve(const FiniteDistribution& a, const FiniteDistribution& b);

/// KS distance of (y_1 + ... + y_n)/sqrt(n) from the standard normal, the
/// y_i drawn from a centered unit-variance density.
double clt_distance(const DensityGrid& error_density, int n, std::uint64_t samples,
                    RngStream rng, Exec exec = Exec::parallel);

/// KS distance of sphere coordinates from the standard normal: sample uniform
/// points on the radius-sqrt(n) sphere in n dimensions, take the first
/// `coords` coordinates, return the largest per-coordinate KS statistic.
double sphere_marginal_distance(int n, int coords, std::uint64_t samples, RngStream rng,
                                Exec exec = Exec::parallel);

/// Exact CDF of one coordinate of a uniform point on the radius-sqrt(n)
/// sphere (density proportional to (1 - x^2/n)^{(n-3)/2}); tabulated
/// to ~1e-8 accuracy.
std::function<double(double)> sphere_marginal_cdf(int n);

/// Same sampler as sphere_marginal_distance but tested against an arbitrary
/// CDF (used to separate sampler error from lemma error).
double sphere_marginal_distance_vs(int n, int coords, std::uint64_t samples, RngStream rng,
                                   const std::function<double(double)>& cdf,
                                   Exec exec = Exec::parallel);

}  // namespace odds::limits
