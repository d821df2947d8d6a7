#pragma once

#include <functional>
#include <vector>

#include "odds/density_grid.hpp"

namespace odds {

/// Finite probability vector; the constructor validates nonnegativity and
/// that the weights sum to 1 within 1e-12 (pass normalize=true to rescale).
class DiscreteDistribution {
public:
    explicit DiscreteDistribution(std::vector<double> weights, bool normalize = false);

    static DiscreteDistribution uniform(std::size_t n);
    static DiscreteDistribution point_mass(std::size_t n, std::size_t at);

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }

    double max_weight() const;
    double min_weight() const;

private:
    std::vector<double> weights_;
};

/// Total variation distance 0.5 * sum |p_i - q_i|; lengths must match.
double tv_distance(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF: the sup
/// over sorted points of |empirical - cdf|, checked before and after each jump.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Trapezoid-rule Fourier coefficients (integral psi cos(n u) du, integral
/// psi sin(n u) du) of a circular density; n must be >= 1.
std::pair<double, double> fourier_coefficient(const DensityGrid& psi, int n);

}  // namespace odds
