#include "odds/needle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "odds/quadrature.hpp"

namespace odds::needle {

namespace {
constexpr double kPi = 3.141592653589793238462643;
constexpr double kHalfPi = 1.570796326794896619231322;
}  // namespace

NeedleConfig::NeedleConfig(double a, double b, int n, DensityGrid2D density)
    : half_spacing(a), half_length(b), table_multiplier(n), center_density(std::move(density)) {
    if (!(a > 0)) throw std::invalid_argument("NeedleConfig: spacing must be positive");
    if (!(b > 0) || !(b < a))
        throw std::invalid_argument("NeedleConfig: needle half-length must satisfy 0 < b < a");
    if (n < 1) throw std::invalid_argument("NeedleConfig: table multiplier must be >= 1");
    const double side = 2.0 * a * n;
    if (std::abs(center_density.xlo()) > 1e-9 * side ||
        std::abs(center_density.xhi() - side) > 1e-9 * side ||
        std::abs(center_density.ylo()) > 1e-9 * side ||
        std::abs(center_density.yhi() - side) > 1e-9 * side)
        throw std::invalid_argument("NeedleConfig: density support must be the table square");
}

double crossing_probability_mc(const NeedleConfig& config, std::uint64_t samples, RngStream rng,
                               Exec exec) {
    if (samples < 1) throw std::invalid_argument("crossing_probability_mc: need samples >= 1");
    const double spacing = 2.0 * config.half_spacing;
    const double b = config.half_length;
    const std::uint64_t crossings = par::chunked_count(
        samples,
        [&](std::uint64_t i) {
            RngStream local = rng.substream(i);
            const auto [x, y] = config.center_density.sample(local);
            (void)y;  // crossing depends on the x offset only
            const double w = local.uniform(0.0, kHalfPi);
            double d = std::fmod(x, spacing);
            d = std::min(d, spacing - d);
            return d <= b * std::cos(w);
        },
        exec);
    return static_cast<double>(crossings) / static_cast<double>(samples);
}

double crossing_probability_exact(const NeedleConfig& config) {
    const DensityGrid marginal = config.center_density.x_marginal();
    const double a = config.half_spacing, b = config.half_length;
    const double side = config.table_side();

    // Only offsets within b of a line can cross. Around the line at L the
    // substitution x = L + b sin(tau) turns q into the linear 1 - 2 tau / pi,
    // leaving a smooth integrand; pieces are split at marginal grid nodes.
    double acc = 0.0;
    auto piece = [&](double L, double x0, double x1) {
        // integrate marginal(x) * (2/pi) acos(|x-L|/b) over [x0,x1], |x-L|<=b
        const double t0 = std::asin(std::clamp((x0 - L) / b, -1.0, 1.0));
        const double t1 = std::asin(std::clamp((x1 - L) / b, -1.0, 1.0));
        acc += simpson(
            [&](double tau) {
                const double x = L + b * std::sin(tau);
                const double q = 1.0 - std::abs(tau) * 2.0 / kPi;
                return marginal.value_at(x) * q * b * std::cos(tau);
            },
            t0, t1, 32);
    };
    for (int line = 0; line <= config.table_multiplier; ++line) {
        const double L = 2.0 * a * line;
        const double lo = std::max(0.0, L - b), hi = std::min(side, L + b);
        if (hi <= lo) continue;
        // pieces split at marginal nodes and at L, so each integrand is smooth
        const double h = marginal.spacing();
        std::vector<double> cuts{lo, hi, L};
        const auto first = static_cast<long long>(std::ceil((lo - marginal.lo()) / h));
        for (long long k = first;; ++k) {
            const double x = marginal.lo() + h * static_cast<double>(k);
            if (x >= hi) break;
            if (x > lo) cuts.push_back(x);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i] + 1e-15 * side) piece(L, cuts[i], cuts[i + 1]);
    }
    return acc;
}

Segmentation::Segmentation(double xlo_, double xhi_, double ylo_, double yhi_, int cx, int cy,
                           double lambda)
    : xlo(xlo_), xhi(xhi_), ylo(ylo_), yhi(yhi_), cells_x(cx), cells_y(cy),
      white_fraction(lambda) {
    if (!(xhi > xlo) || !(yhi > ylo)) throw std::invalid_argument("Segmentation: empty domain");
    if (cx < 1 || cy < 1) throw std::invalid_argument("Segmentation: need at least one cell");
    if (!(lambda > 0) || !(lambda < 1))
        throw std::invalid_argument("Segmentation: white fraction must be in (0,1)");
}

Segmentation Segmentation::square(double xlo, double xhi, double ylo, double yhi, int m,
                                  double lambda) {
    const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    if (s * s != m) throw std::invalid_argument("Segmentation: cell count must be a perfect square");
    return Segmentation(xlo, xhi, ylo, yhi, s, s, lambda);
}

double segmentation_error(const Segmentation& seg, const DensityGrid2D& phi) {
    const double wx = (seg.xhi - seg.xlo) / seg.cells_x;
    const double wy = (seg.yhi - seg.ylo) / seg.cells_y;
    double white = 0.0;
    for (int i = 0; i < seg.cells_x; ++i) {
        const double x0 = seg.xlo + wx * i;
        for (int j = 0; j < seg.cells_y; ++j) {
            const double y0 = seg.ylo + wy * j;
            white += phi.integral(x0, x0 + wx * seg.white_fraction, y0, y0 + wy);
        }
    }
    const double total = phi.integral(seg.xlo, seg.xhi, seg.ylo, seg.yhi);
    return std::abs(white - seg.white_fraction * total);
}

std::vector<SegmentationRow> segmentation_convergence(const DensityGrid2D& phi, double lambda,
                                                      std::span<const int> m_ladder) {
    if (m_ladder.empty()) throw std::invalid_argument("segmentation_convergence: empty ladder");
    for (std::size_t i = 1; i < m_ladder.size(); ++i)
        if (m_ladder[i] <= m_ladder[i - 1])
            throw std::invalid_argument("segmentation_convergence: ladder must increase");
    std::vector<SegmentationRow> rows;
    for (int m : m_ladder) {
        const auto seg = Segmentation::square(phi.xlo(), phi.xhi(), phi.ylo(), phi.yhi(), m, lambda);
        rows.push_back({m, segmentation_error(seg, phi)});
    }
    return rows;
}

}  // namespace odds::needle
