#include "odds/gauss_limits.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "odds/quadrature.hpp"

namespace odds::limits {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

MaximumProfile::MaximumProfile(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
    if (!(hi_ > lo_)) throw std::invalid_argument("MaximumProfile: empty interval");
    if (values_.size() < 3 || values_.size() % 2 == 0)
        throw std::invalid_argument("MaximumProfile: need an odd node count >= 3");
    argmax_ = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0) || !std::isfinite(values_[i]))
            throw std::invalid_argument("MaximumProfile: values must be finite and positive");
        if (values_[i] > values_[argmax_]) argmax_ = i;
    }
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (i != argmax_ && values_[i] >= values_[argmax_])
            throw std::invalid_argument("MaximumProfile: maximum must be unique on the grid");
}

MaximumProfile MaximumProfile::from_function(double lo, double hi, int nodes,
                                             const std::function<double(double)>& f) {
    if (nodes < 3) throw std::invalid_argument("MaximumProfile: need at least 3 nodes");
    if (nodes % 2 == 0) ++nodes;  // odd node count = even Simpson interval count
    std::vector<double> v(static_cast<std::size_t>(nodes));
    const double h = (hi - lo) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) v[static_cast<std::size_t>(i)] = f(lo + h * i);
    return MaximumProfile(lo, hi, std::move(v));
}

double MaximumProfile::peak_location() const {
    const double h = (hi_ - lo_) / static_cast<double>(values_.size() - 1);
    return lo_ + h * static_cast<double>(argmax_);
}

double MaximumProfile::peak_value() const { return values_[argmax_]; }

double laplace_ratio(const std::function<double(double)>& phi1,
                     const std::function<double(double)>& phi2, const MaximumProfile& profile,
                     double exponent) {
    if (!(exponent >= 0)) throw std::invalid_argument("laplace_ratio: exponent must be >= 0");
    const auto& v = profile.values();
    const std::size_t nodes = v.size();
    const double h = (profile.hi() - profile.lo()) / static_cast<double>(nodes - 1);
    const double log_peak = std::log(profile.peak_value());

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double z = profile.lo() + h * static_cast<double>(i);
        const double w = std::exp(exponent * (std::log(v[i]) - log_peak));
        const double simpson_w = (i == 0 || i + 1 == nodes) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        num += simpson_w * phi1(z) * w;
        den += simpson_w * phi2(z) * w;
    }
    num *= h / 3.0;
    den *= h / 3.0;
    if (!std::isfinite(num) || !std::isfinite(den) || den == 0.0)
        throw std::runtime_error("laplace_ratio: degenerate integrals at exponent " +
                                 std::to_string(exponent));
    return num / den;
}

ErrorLawFamily::ErrorLawFamily(double zlo, double zhi, int nodes,
                               const std::function<double(double)>& A,
                               const std::function<double(double)>& A_prime) {
    if (nodes < 3) throw std::invalid_argument("ErrorLawFamily: need at least 3 nodes");
    if (!(zhi > zlo)) throw std::invalid_argument("ErrorLawFamily: empty z range");
    zlo_ = zlo;
    zhi_ = zhi;
    const std::size_t n = static_cast<std::size_t>(nodes);
    A_.resize(n);
    A_prime_.resize(n);
    B_.resize(n);
    B_prime_.resize(n);
    const double h = (zhi - zlo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = zlo + h * static_cast<double>(i);
        A_[i] = A(z);
        A_prime_[i] = A_prime(z);
        B_prime_[i] = -A_prime_[i] * z;
    }
    // cumulative Simpson on half-steps for B (B(zlo) = 0)
    B_[0] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double z0 = zlo + h * static_cast<double>(i);
        const double zm = z0 + 0.5 * h;
        const double g0 = B_prime_[i];
        const double gm = -A_prime(zm) * zm;
        const double g1 = B_prime_[i + 1];
        B_[i + 1] = B_[i] + h * (g0 + 4.0 * gm + g1) / 6.0;
    }
}

ErrorLawFamily ErrorLawFamily::unchecked(double zlo, double zhi, std::vector<double> A,
                                         std::vector<double> A_prime, std::vector<double> B,
                                         std::vector<double> B_prime) {
    if (A.size() < 3 || A.size() != A_prime.size() || A.size() != B.size() ||
        A.size() != B_prime.size())
        throw std::invalid_argument("ErrorLawFamily: inconsistent table sizes");
    ErrorLawFamily f;
    f.zlo_ = zlo;
    f.zhi_ = zhi;
    f.A_ = std::move(A);
    f.A_prime_ = std::move(A_prime);
    f.B_ = std::move(B);
    f.B_prime_ = std::move(B_prime);
    return f;
}

double ErrorLawFamily::z_at(std::size_t i) const {
    return zlo_ + spacing() * static_cast<double>(i);
}

double ErrorLawFamily::spacing() const {
    return (zhi_ - zlo_) / static_cast<double>(A_.size() - 1);
}

double ErrorLawFamily::constraint_residual() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < A_.size(); ++i)
        worst = std::max(worst, std::abs(A_prime_[i] * z_at(i) + B_prime_[i]));
    return worst;
}

double ErrorLawFamily::log_posterior(std::size_t zi, double data_sum, std::size_t n) const {
    return A_[zi] * data_sum + static_cast<double>(n) * B_[zi];
}

PosteriorModeReport posterior_mode_check(const ErrorLawFamily& family,
                                         std::span<const double> data) {
    if (data.empty()) throw std::invalid_argument("posterior_mode_check: empty data");
    double sum = 0.0;
    for (double x : data) sum += x;
    std::size_t best = 0;
    double best_val = family.log_posterior(0, sum, data.size());
    for (std::size_t i = 1; i < family.size(); ++i) {
        const double v = family.log_posterior(i, sum, data.size());
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best == 0 || best + 1 == family.size())
        throw std::domain_error("posterior_mode_check: mode on grid boundary");
    const double mode = family.z_at(best);
    const double mean = sum / static_cast<double>(data.size());
    return {mode, mean, std::abs(mode - mean)};
}

namespace {

// Iterated averaging of the partial sums (Euler-type summation): exact for
// convergent series, and sums the conditionally convergent alternating
// moment series far faster than truncation.
double averaged_series(const std::vector<double>& terms) {
    std::vector<double> row(terms.size());
    double s = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        s += terms[i];
        row[i] = s;
    }
    while (row.size() > 1) {
        for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
        row.pop_back();
    }
    return row.front();
}

}  // namespace

MomentIdentityReport moment_identity_check(double h, double n, double y0, int truncation) {
    if (!(h > 0)) throw std::invalid_argument("moment_identity_check: h must be positive");
    if (n < 0) throw std::invalid_argument("moment_identity_check: n must be >= 0");
    if (truncation < 1) throw std::invalid_argument("moment_identity_check: truncation must be >= 1");

    const double closed = std::sqrt(h / (h + n)) * std::exp(-h * n * y0 * y0 / (h + n));
    const double L = std::abs(y0) + 14.0 / std::sqrt(h);
    const double quad = simpson(
        [&](double y) {
            return std::sqrt(h / 3.141592653589793238462643) *
                   std::exp(-h * y * y - n * (y0 - y) * (y0 - y));
        },
        -L, L, 8192);

    // even-moment series at y0 = 0: sum_p (-n)^p / p! * (2p-1)!! / (2h)^p
    std::vector<double> terms(static_cast<std::size_t>(truncation) + 1);
    double term = 1.0;
    terms[0] = term;
    for (int p = 1; p <= truncation; ++p) {
        term *= -n * static_cast<double>(2 * p - 1) / (static_cast<double>(p) * 2.0 * h);
        terms[static_cast<std::size_t>(p)] = term;
    }
    const double series = averaged_series(terms);
    const double closed_at_zero = std::sqrt(h / (h + n));
    return {closed, quad, series, std::abs(closed_at_zero - series)};
}

L2LawReport l2_lln_check(const DensityGrid& error_density, int n, std::uint64_t replicates,
                         RngStream rng, Exec exec) {
    if (n < 1) throw std::invalid_argument("l2_lln_check: n must be >= 1");
    if (replicates < 1) throw std::invalid_argument("l2_lln_check: need replicates >= 1");
    const double theory = error_density.second_moment() / static_cast<double>(n);
    const double empirical =
        par::chunked_sum(
            replicates,
            [&](std::uint64_t i) {
                RngStream local = rng.substream(i);
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += error_density.sample(local);
                const double mean = s / static_cast<double>(n);
                return mean * mean;
            },
            exec) /
        static_cast<double>(replicates);
    return {empirical, theory};
}

FiniteDistribution::FiniteDistribution(std::vector<double> pts, std::vector<double> wts)
    : points(std::move(pts)), weights(std::move(wts)) {
    if (points.empty() || points.size() != weights.size())
        throw std::invalid_argument("FiniteDistribution: inconsistent support");
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0) throw std::invalid_argument("FiniteDistribution: bad weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("FiniteDistribution: weights must sum to 1");
}

std::vector<double> characteristic_function(const FiniteDistribution& dist,
                                            std::span<const double> alphas) {
    std::vector<double> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        double f = 0.0;
        for (std::size_t i = 0; i < dist.points.size(); ++i)
            f += dist.weights[i] * std::exp(a * dist.points[i]);
        if (!std::isfinite(f))
            throw std::range_error("characteristic_function: overflow at alpha = " +
                                   std::to_string(a));
        out.push_back(f);
    }
    return out;
}

FiniteDistribution convolve(const FiniteDistribution& a, const FiniteDistribution& b) {
    std::vector<std::pair<double, double>> acc;
    for (std::size_t i = 0; i < a.points.size(); ++i)
        for (std::size_t j = 0; j < b.points.size(); ++j)
            acc.emplace_back(a.points[i] + b.points[j], a.weights[i] * b.weights[j]);
    std::sort(acc.begin(), acc.end());
    std::vector<double> pts, wts;
    for (const auto& [x, w] : acc) {
        if (!pts.empty() && x == pts.back()) {
            wts.back() += w;
        } else {
            pts.push_back(x);
            wts.push_back(w);
        }
    }
    return FiniteDistribution(std::move(pts), std::move(wts));
}

double clt_distance(const DensityGrid& error_density, int n, std::uint64_t samples,
                    RngStream rng, Exec exec) {
    if (n < 1) throw std::invalid_argument("clt_distance: n must be >= 1");
    if (samples < 1) throw std::invalid_argument("clt_distance: need samples >= 1");
    std::vector<double> z(static_cast<std::size_t>(samples));
    const double root_n = std::sqrt(static_cast<double>(n));
    par::fill_indexed(
        z.size(), z.data(),
        [&](std::size_t i) {
            RngStream local = rng.substream(i);
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += error_density.sample(local);
            return s / root_n;
        },
        exec);
    return ks_statistic(std::move(z), normal_cdf);
}

namespace {

std::vector<std::vector<double>> sphere_coordinate_samples(int n, int coords,
                                                           std::uint64_t samples, RngStream rng,
                                                           Exec exec) {
    if (n < 2) throw std::invalid_argument("sphere sampling: dimension must be >= 2");
    if (coords < 1 || coords >= n)
        throw std::invalid_argument("sphere sampling: need 1 <= coords < n");
    if (samples < 1000) throw std::invalid_argument("sphere sampling: need at least 10^3 samples");
    std::vector<std::vector<double>> out(static_cast<std::size_t>(coords),
                                         std::vector<double>(static_cast<std::size_t>(samples)));
    const double radius = std::sqrt(static_cast<double>(n));
    // one pass fills every coordinate column for sample i
    std::vector<double> dummy(static_cast<std::size_t>(samples));
    par::fill_indexed(
        dummy.size(), dummy.data(),
        [&](std::size_t i) {
            RngStream local = rng.substream(i);
            double norm_sq = 0.0;
            std::vector<double> head(static_cast<std::size_t>(coords));
            for (int d = 0; d < n; ++d) {
                const double g = local.normal();
                norm_sq += g * g;
                if (d < coords) head[static_cast<std::size_t>(d)] = g;
            }
            const double scale = radius / std::sqrt(norm_sq);
            for (int d = 0; d < coords; ++d)
                out[static_cast<std::size_t>(d)][i] = head[static_cast<std::size_t>(d)] * scale;
            return 0.0;
        },
        exec);
    return out;
}

}  // namespace

double sphere_marginal_distance(int n, int coords, std::uint64_t samples, RngStream rng,
                                Exec exec) {
    return sphere_marginal_distance_vs(n, coords, samples, rng, normal_cdf, exec);
}

double sphere_marginal_distance_vs(int n, int coords, std::uint64_t samples, RngStream rng,
                                   const std::function<double(double)>& cdf, Exec exec) {
    auto cols = sphere_coordinate_samples(n, coords, samples, rng, exec);
    double worst = 0.0;
    for (auto& col : cols) worst = std::max(worst, ks_statistic(std::move(col), cdf));
    return worst;
}

std::function<double(double)> sphere_marginal_cdf(int n) {
    if (n < 2) throw std::invalid_argument("sphere_marginal_cdf: dimension must be >= 2");
    const double radius = std::sqrt(static_cast<double>(n));
    // substitute x = radius * sin(theta): the density (1 - x^2/n)^{(n-3)/2}
    // becomes cos^{n-2}(theta), smooth for every n >= 2 (no endpoint
    // singularity even in the arcsine case n = 2)
    const int nodes = 1 << 16;
    auto table = std::make_shared<std::vector<double>>(static_cast<std::size_t>(nodes) + 1);
    constexpr double kHalfPi = 1.570796326794896619231322;
    const double h = 2.0 * kHalfPi / nodes;
    auto dens = [&](double theta) {
        return std::pow(std::cos(theta), static_cast<double>(n) - 2.0);
    };
    (*table)[0] = 0.0;
    double prev = dens(-kHalfPi);
    for (int i = 1; i <= nodes; ++i) {
        const double theta = -kHalfPi + h * static_cast<double>(i);
        const double cur = dens(theta);
        (*table)[static_cast<std::size_t>(i)] =
            (*table)[static_cast<std::size_t>(i) - 1] + 0.5 * (prev + cur) * h;
        prev = cur;
    }
    const double total = table->back();
    for (double& v : *table) v /= total;
    return [table, radius, h](double x) {
        if (x <= -radius) return 0.0;
        if (x >= radius) return 1.0;
        const double theta = std::asin(x / radius);
        const double t = (theta + kHalfPi) / h;
        const auto i = std::min(static_cast<std::size_t>(t), table->size() - 2);
        const double f = t - static_cast<double>(i);
        return (*table)[i] * (1.0 - f) + (*table)[i + 1] * f;
    };
}

}  // namespace odds::limits
