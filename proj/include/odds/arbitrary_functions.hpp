#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "odds/density_grid.hpp"
#include "odds/parallel.hpp"

namespace odds::arbfn {

/// Roulette wheel: circumference `total_angle`, split into 2M alternating
/// red/black sectors of width eps = total_angle / (2M); even-indexed sectors
/// are red. `phi` is the (arbitrary) stopping-angle density on the circle.
struct WheelModel {
    double total_angle;
    int pair_count;  // M
    DensityGrid phi;

    WheelModel(double theta, int pairs, DensityGrid density);
    double sector_width() const { return total_angle / (2.0 * pair_count); }
};

/// Integral of phi over the red sectors (exact on the interpolant).
double red_probability(const WheelModel& model);

/// Sum over the M double intervals of (max - min of phi) * eps. Dominates
/// twice the deviation of red_probability from 1/2.
double red_black_bound(const WheelModel& model);

/// Small planets: joint density of (mean motion a, initial longitude b) on
/// [a_lo,a_hi] x [0,2pi), evolved to longitude a*t + b at time t.
struct PlanetModel {
    DensityGrid2D phi_ab;  // y axis is the circular longitude
    double time;

    PlanetModel(DensityGrid2D density, double t);
};

/// Longitude density at the model's time: deterministic pushforward of
/// phi_ab under (a,b) -> (a t + b) mod 2pi, integrated exactly along the
/// preimage lines of each output node (no sampling).
DensityGrid longitude_law(const PlanetModel& model, int bins);

struct HarmonicRow {
    double t;
    int n;
    double magnitude;       // |c_n| of the longitude law
    double tv_to_uniform;
};

/// Fourier magnitudes and TV-to-uniform of the longitude law at each time.
std::vector<HarmonicRow> uniformization_report(const PlanetModel& model,
                                               std::span<const double> times, int n_max,
                                               int bins);

/// Time average over [0,T] (midpoint rule, `steps` nodes) of the indicator
/// that every longitude a_i t + b_i lies in the half circle
/// [arc_start, arc_start + pi). Converges to 1/2^n for rationally
/// independent mean motions.
double half_circle_time_average(std::span<const double> motions, std::span<const double> phases,
                                double arc_start, double T, std::int64_t steps,
                                Exec exec = Exec::parallel);

}  // namespace odds::arbfn
