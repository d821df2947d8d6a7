#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "odds/density_grid.hpp"
#include "odds/parallel.hpp"
#include "odds/rng.hpp"

namespace odds::needle {

/// Buffon's needle on a finite table. Parallels are the vertical lines
/// x = 2a*j; the needle has half-length b < a; its center falls in the square
/// [0, 2na]^2 with density `center_density`; the acute angle w between the
/// needle and the normal to the parallels is uniform on [0, pi/2). The
/// needle crosses a line iff b*cos(w) >= distance from its center to the
/// nearest line.
struct NeedleConfig {
    double half_spacing;   // a
    double half_length;    // b
    int table_multiplier;  // n, table side 2na
    DensityGrid2D center_density;

    NeedleConfig(double a, double b, int n, DensityGrid2D density);
    double table_side() const { return 2.0 * half_spacing * table_multiplier; }
};

/// Monte Carlo crossing frequency over `samples` thrown needles.
double crossing_probability_mc(const NeedleConfig& config, std::uint64_t samples, RngStream rng,
                               Exec exec = Exec::parallel);

/// Deterministic crossing probability: integral of the x-marginal of the
/// center density against the per-offset crossing chance
/// q(x) = (2/pi) * acos(min(d(x)/b, 1)).
double crossing_probability_exact(const NeedleConfig& config);

/// Equal-volume segmentation of a rectangle into cells_x * cells_y cells,
/// each with its left `white_fraction` part painted white.
struct Segmentation {
    double xlo, xhi, ylo, yhi;
    int cells_x, cells_y;
    double white_fraction;  // lambda in (0,1)

    Segmentation(double xlo, double xhi, double ylo, double yhi, int cells_x, int cells_y,
                 double lambda);
    /// Square grid with m = s^2 cells; m must be a perfect square.
    static Segmentation square(double xlo, double xhi, double ylo, double yhi, int m,
                               double lambda);
    int cell_count() const { return cells_x * cells_y; }
};

/// | integral of phi over the white parts - lambda * integral of phi over A |.
double segmentation_error(const Segmentation& seg, const DensityGrid2D& phi);

struct SegmentationRow {
    int cells;
    double error;
};

/// segmentation_error along an increasing cell-count ladder (perfect squares).
std::vector<SegmentationRow> segmentation_convergence(const DensityGrid2D& phi, double lambda,
                                                      std::span<const int> m_ladder);

}  // namespace odds::needle
