#include "odds/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace odds {

DiscreteDistribution::DiscreteDistribution(std::vector<double> weights, bool normalize)
    : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("DiscreteDistribution: empty");
    double sum = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0)
            throw std::invalid_argument("DiscreteDistribution: invalid weight");
        sum += w;
    }
    if (normalize) {
        if (!(sum > 0)) throw std::invalid_argument("DiscreteDistribution: zero mass");
        for (double& w : weights_) w /= sum;
    } else if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("DiscreteDistribution: weights must sum to 1 within 1e-12");
    }
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t n) {
    return DiscreteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)), true);
}

DiscreteDistribution DiscreteDistribution::point_mass(std::size_t n, std::size_t at) {
    std::vector<double> w(n, 0.0);
    w.at(at) = 1.0;
    return DiscreteDistribution(std::move(w));
}

double DiscreteDistribution::max_weight() const {
    return *std::max_element(weights_.begin(), weights_.end());
}

double DiscreteDistribution::min_weight() const {
    return *std::min_element(weights_.begin(), weights_.end());
}

double tv_distance(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("tv_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

std::pair<double, double> fourier_coefficient(const DensityGrid& psi, int n) {
    if (!psi.periodic()) throw std::invalid_argument("fourier_coefficient: density must be circular");
    if (n < 1) throw std::invalid_argument("fourier_coefficient: harmonic index must be >= 1");
    const double span = psi.span();
    const double h = psi.spacing();
    const double w = 2.0 * 3.141592653589793238462643 * static_cast<double>(n) / span;
    double c = 0.0, s = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double u = psi.lo() + h * static_cast<double>(j);
        c += psi.values()[j] * std::cos(w * (u - psi.lo()));
        s += psi.values()[j] * std::sin(w * (u - psi.lo()));
    }
    return {c * h, s * h};
}

}  // namespace odds
