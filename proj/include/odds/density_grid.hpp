#pragma once

#include <functional>
#include <vector>

#include "odds/rng.hpp"

namespace odds {

/// Tabulated nonnegative density on an interval [lo,hi) or a circle, with
/// piecewise-linear interpolation between uniformly spaced nodes. The
/// constructor normalizes so the trapezoid integral over the support is 1.
///
/// Periodic grids hold one value per node (the cell after the last node wraps
/// to the first); interval grids include both endpoints.
class DensityGrid {
public:
    DensityGrid(double lo, double hi, std::vector<double> values, bool periodic);

    static DensityGrid from_function(double lo, double hi, int nodes, bool periodic,
                                     const std::function<double(double)>& f);
    static DensityGrid uniform(double lo, double hi, int nodes, bool periodic);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double span() const { return hi_ - lo_; }
    bool periodic() const { return periodic_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double spacing() const { return spacing_; }

    /// Interpolated density at x (wraps when periodic, clamps otherwise).
    double value_at(double x) const;

    /// Exact integral of the interpolant over [a,b], a <= b. For periodic
    /// grids the integration range may wrap; b - a must not exceed the span.
    double integral(double a, double b) const;

    /// Exact sup / inf of the interpolant on [a,b] (same range rules).
    double max_on(double a, double b) const;
    double min_on(double a, double b) const;

    double mean() const;
    double second_moment() const;  // about zero
    double variance() const;

    /// Half the exact integral of |density - 1/span|.
    double tv_to_uniform() const;

    /// Inverse-CDF draw from the interpolant; O(log n) per draw.
    double sample(RngStream& rng) const;

    /// Affine rescale to zero mean, unit variance (support shifts/scales).
    DensityGrid standardized() const;

private:
    double node_pos(std::size_t i) const { return lo_ + spacing_ * static_cast<double>(i); }
    double cell_value(std::size_t cell, double frac) const;  // frac in [0,1] within cell
    std::size_t cell_count() const { return periodic_ ? values_.size() : values_.size() - 1; }
    double right_value(std::size_t cell) const;

    double lo_, hi_, spacing_;
    bool periodic_;
    std::vector<double> values_;
    std::vector<double> cdf_;  // cumulative mass at node i
};

/// Tabulated nonnegative density on a rectangle with bilinear interpolation,
/// optionally periodic in y (used for circular coordinates). Normalized at
/// construction like DensityGrid.
class DensityGrid2D {
public:
    DensityGrid2D(double xlo, double xhi, double ylo, double yhi,
                  std::vector<std::vector<double>> values, bool periodic_y);

    static DensityGrid2D from_function(double xlo, double xhi, double ylo, double yhi,
                                       int nx, int ny, bool periodic_y,
                                       const std::function<double(double, double)>& f);
    static DensityGrid2D uniform(double xlo, double xhi, double ylo, double yhi, int nx, int ny,
                                 bool periodic_y);

    double xlo() const { return xlo_; }
    double xhi() const { return xhi_; }
    double ylo() const { return ylo_; }
    double yhi() const { return yhi_; }
    bool periodic_y() const { return periodic_y_; }
    std::size_t nx() const { return values_.size(); }
    std::size_t ny() const { return values_.front().size(); }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double node_value(std::size_t i, std::size_t j) const { return values_[i][j]; }

    /// Bilinear interpolant at (x,y); y wraps when periodic, both clamp otherwise.
    double value_at(double x, double y) const;

    /// Exact integral of the interpolant over an axis-aligned rectangle
    /// (must lie inside the support; no y wrap-around here).
    double integral(double x0, double x1, double y0, double y1) const;

    /// Exact marginal in x: piecewise-linear with node values = column integrals.
    DensityGrid x_marginal() const;

    /// Inverse-CDF draw of (x,y) from the bilinear interpolant.
    std::pair<double, double> sample(RngStream& rng) const;

private:
    double column_mass(std::size_t i) const;

    double xlo_, xhi_, ylo_, yhi_, dx_, dy_;
    bool periodic_y_;
    std::vector<std::vector<double>> values_;          // [i][j] at (x_i, y_j)
    std::vector<double> col_cdf_;                      // marginal-x node CDF
    std::vector<std::vector<double>> col_y_cdf_;       // per x-node CDF along y
};

}  // namespace odds
