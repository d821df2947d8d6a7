#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "odds/parallel.hpp"
#include "odds/rng.hpp"

namespace odds::recurrence {

/// Point on the unit interval / unit torus in 64-bit fixed point: the real
/// coordinate is u / 2^64. Integer arithmetic keeps the maps exactly
/// volume-preserving bijections on the lattice (floating point degrades
/// doubling maps after ~50 steps).
struct TorusPoint {
    std::uint64_t u = 0;
    std::uint64_t v = 0;
};

enum class MapKind { identity, rotation, cat, baker };

/// Volume-preserving map of the unit interval (1-D) or unit square (2-D).
class VolumePreservingMap {
public:
    static VolumePreservingMap identity(int dimension);
    static VolumePreservingMap rotation(double alpha);  // circle translation
    static VolumePreservingMap cat();                   // (x,y) -> (2x+y, x+y) mod 1
    static VolumePreservingMap baker();

    MapKind kind() const { return kind_; }
    int dimension() const { return dim_; }
    TorusPoint apply(TorusPoint p) const;

private:
    VolumePreservingMap(MapKind k, int d, std::uint64_t step) : kind_(k), dim_(d), step_(step) {}
    MapKind kind_;
    int dim_;
    std::uint64_t step_;  // rotation angle in fixed point
};

/// Set of cells on a fixed G (1-D) or GxG (2-D) partition; G a power of two.
class Region {
public:
    Region(int dimension, std::uint32_t grid, std::vector<std::uint64_t> cells);

    /// Axis-aligned box of cells: [lo,hi) per axis, snapped to the grid.
    static Region box(int dimension, std::uint32_t grid, double lo0, double hi0,
                      double lo1 = 0.0, double hi1 = 1.0);

    int dimension() const { return dim_; }
    std::uint32_t grid() const { return grid_; }
    const std::vector<std::uint64_t>& cells() const { return cells_; }
    std::size_t cell_count() const { return cells_.size(); }
    double volume() const;

    std::uint64_t cell_of(TorusPoint p) const;
    bool contains(TorusPoint p) const;

    /// Uniform point inside the region (uniform cell, then uniform in cell).
    TorusPoint sample(RngStream& rng) const;

private:
    int dim_;
    std::uint32_t grid_;
    int shift_;                        // 64 - log2(grid)
    std::vector<std::uint64_t> cells_; // sorted
    std::vector<bool> member_;         // bitmap over grid^dim
};

/// Images r_1..r_n of r_0 under repeated map application, tracked through a
/// sampled lattice per cell (corners + interior points) and rounded to cells.
std::vector<Region> consequents(const VolumePreservingMap& map, const Region& r0, int steps);

/// Pigeonhole witness: a cell covered by at least k+1 of the regions. When
/// n*v > k*V such a cell must exist for regions inside a container of volume
/// V; if the scan finds none the containment hypothesis was violated.
std::optional<std::uint64_t> overlap_witness(const std::vector<Region>& regions,
                                             double container_volume, int k);

/// The non-return bound k*V / (n*v): an upper bound on the probability that a
/// trajectory started in a region of volume v re-enters it at most k times
/// within n steps, inside a container of volume V.
double non_return_bound(int k, double V, double v, std::uint64_t n);

/// Fraction of `samples` uniform starting points in r0 whose orbit re-enters
/// r0 at least k_returns times within `horizon` steps.
double recurrence_fraction(const VolumePreservingMap& map, const Region& r0, int k_returns,
                           int horizon, std::uint64_t samples, RngStream rng,
                           Exec exec = Exec::parallel);

}  // namespace odds::recurrence
