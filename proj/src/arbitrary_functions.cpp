#include "odds/arbitrary_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "odds/metrics.hpp"

namespace odds::arbfn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

WheelModel::WheelModel(double theta, int pairs, DensityGrid density)
    : total_angle(theta), pair_count(pairs), phi(std::move(density)) {
    if (!(theta > 0)) throw std::invalid_argument("WheelModel: total angle must be positive");
    if (pairs < 1) throw std::invalid_argument("WheelModel: M must be >= 1");
    if (phi.periodic() || std::abs(phi.lo()) > 1e-12 || std::abs(phi.hi() - theta) > 1e-9)
        throw std::invalid_argument("WheelModel: phi must be an interval density on [0, theta]");
}

double red_probability(const WheelModel& model) {
    const double eps = model.sector_width();
    double acc = 0.0;
    for (int s = 0; s < 2 * model.pair_count; s += 2)
        acc += model.phi.integral(eps * s, eps * (s + 1));
    return acc;
}

double red_black_bound(const WheelModel& model) {
    const double eps = model.sector_width();
    double acc = 0.0;
    for (int k = 0; k < model.pair_count; ++k) {
        const double a = 2.0 * eps * k, b = 2.0 * eps * (k + 1);
        acc += (model.phi.max_on(a, b) - model.phi.min_on(a, b)) * eps;
    }
    return acc;
}

PlanetModel::PlanetModel(DensityGrid2D density, double t) : phi_ab(std::move(density)), time(t) {
    if (!phi_ab.periodic_y())
        throw std::invalid_argument("PlanetModel: longitude axis must be circular");
    if (std::abs(phi_ab.ylo()) > 1e-12 || std::abs(phi_ab.yhi() - kTwoPi) > 1e-9)
        throw std::invalid_argument("PlanetModel: longitude support must be [0, 2pi)");
    if (!(phi_ab.xhi() > phi_ab.xlo()))
        throw std::invalid_argument("PlanetModel: empty mean-motion range");
    if (t < 0) throw std::invalid_argument("PlanetModel: time must be >= 0");
}

// psi(u) = int phi(a, wrap(u - a t)) da, integrated exactly: between
// breakpoints (a-nodes and points where the line u - a t crosses a
// longitude node) the integrand restricted to one bilinear cell is a
// quadratic in a, so 3-point Simpson per piece is exact.
static double longitude_node_value(const DensityGrid2D& phi, double t, double u) {
    const double a_lo = phi.xlo(), a_hi = phi.xhi();
    const double hb = phi.dy();

    double acc = 0.0;
    std::size_t ai = 0;  // index into a-node breakpoints
    const std::size_t na = phi.nx();
    // crossing levels: b(a) = u - a t descends through multiples of hb
    long long kcross = 0;
    bool have_cross = false;
    if (t > 0) {
        const double b0 = u - a_lo * t;
        kcross = static_cast<long long>(std::ceil(b0 / hb)) - 1;  // first level strictly below b0
        have_cross = true;
    }
    double a_cur = a_lo;
    double f_cur = phi.value_at(a_cur, u - a_cur * t);
    while (a_cur < a_hi - 1e-15 * (a_hi - a_lo)) {
        // next a-node strictly above a_cur
        while (ai + 1 < na && a_lo + phi.dx() * static_cast<double>(ai + 1) <= a_cur + 1e-15)
            ++ai;
        double a_node = (ai + 1 < na) ? a_lo + phi.dx() * static_cast<double>(ai + 1) : a_hi;
        double a_next = std::min(a_node, a_hi);
        if (have_cross) {
            const double a_cross = (u - hb * static_cast<double>(kcross)) / t;
            if (a_cross > a_cur + 1e-15 && a_cross < a_next) {
                a_next = a_cross;
                --kcross;
            } else if (a_cross <= a_cur + 1e-15) {
                --kcross;
                continue;
            }
        }
        const double mid = 0.5 * (a_cur + a_next);
        const double f_mid = phi.value_at(mid, u - mid * t);
        const double f_next = phi.value_at(a_next, u - a_next * t);
        acc += (a_next - a_cur) * (f_cur + 4.0 * f_mid + f_next) / 6.0;
        a_cur = a_next;
        f_cur = f_next;
    }
    return acc;
}

DensityGrid longitude_law(const PlanetModel& model, int bins) {
    if (bins < 8) throw std::invalid_argument("longitude_law: need at least 8 bins");
    std::vector<double> psi(static_cast<std::size_t>(bins));
    const double h = kTwoPi / bins;
    par::fill_indexed(psi.size(), psi.data(), [&](std::size_t j) {
        return longitude_node_value(model.phi_ab, model.time, h * static_cast<double>(j));
    });
    return DensityGrid(0.0, kTwoPi, std::move(psi), true);
}

std::vector<HarmonicRow> uniformization_report(const PlanetModel& model,
                                               std::span<const double> times, int n_max,
                                               int bins) {
    if (times.empty()) throw std::invalid_argument("uniformization_report: no times");
    if (n_max < 1) throw std::invalid_argument("uniformization_report: n_max must be >= 1");
    std::vector<HarmonicRow> rows;
    for (double t : times) {
        PlanetModel at_t(model.phi_ab, t);
        const DensityGrid psi = longitude_law(at_t, bins);
        const double tv = psi.tv_to_uniform();
        for (int n = 1; n <= n_max; ++n) {
            const auto [c, s] = fourier_coefficient(psi, n);
            rows.push_back({t, n, std::hypot(c, s), tv});
        }
    }
    return rows;
}

double half_circle_time_average(std::span<const double> motions, std::span<const double> phases,
                                double arc_start, double T, std::int64_t steps, Exec exec) {
    if (motions.empty()) throw std::invalid_argument("half_circle_time_average: no planets");
    if (motions.size() != phases.size())
        throw std::invalid_argument("half_circle_time_average: motions/phases length mismatch");
    for (std::size_t i = 0; i < motions.size(); ++i)
        for (std::size_t j = i + 1; j < motions.size(); ++j)
            if (motions[i] == motions[j])
                throw std::invalid_argument("half_circle_time_average: mean motions must be distinct");
    if (!(T > 0) || steps < 1000)
        throw std::invalid_argument("half_circle_time_average: need T > 0 and steps >= 1000");

    const double dt = T / static_cast<double>(steps);
    const std::uint64_t inside = par::chunked_count(
        static_cast<std::uint64_t>(steps),
        [&](std::uint64_t i) {
            const double t = (static_cast<double>(i) + 0.5) * dt;
            for (std::size_t p = 0; p < motions.size(); ++p) {
                double ang = std::fmod(motions[p] * t + phases[p] - arc_start, kTwoPi);
                if (ang < 0) ang += kTwoPi;
                if (ang >= 3.141592653589793238462643) return false;
            }
            return true;
        },
        exec);
    return static_cast<double>(inside) / static_cast<double>(steps);
}

}  // namespace odds::arbfn
