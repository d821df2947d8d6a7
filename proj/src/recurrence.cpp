#include "odds/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace odds::recurrence {

namespace {

bool is_pow2(std::uint32_t g) { return g != 0 && (g & (g - 1)) == 0; }

int log2i(std::uint32_t g) {
    int s = 0;
    while ((1u << s) < g) ++s;
    return s;
}

}  // namespace

VolumePreservingMap VolumePreservingMap::identity(int dimension) {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("VolumePreservingMap: dimension must be 1 or 2");
    return VolumePreservingMap(MapKind::identity, dimension, 0);
}

VolumePreservingMap VolumePreservingMap::rotation(double alpha) {
    alpha -= std::floor(alpha);
    const auto step = static_cast<std::uint64_t>(alpha * 0x1.0p64);
    return VolumePreservingMap(MapKind::rotation, 1, step);
}

VolumePreservingMap VolumePreservingMap::cat() {
    return VolumePreservingMap(MapKind::cat, 2, 0);
}

VolumePreservingMap VolumePreservingMap::baker() {
    return VolumePreservingMap(MapKind::baker, 2, 0);
}

TorusPoint VolumePreservingMap::apply(TorusPoint p) const {
    switch (kind_) {
        case MapKind::identity:
            return p;
        case MapKind::rotation:
            return {p.u + step_, 0};  // mod 2^64 by wraparound
        case MapKind::cat:
            return {2 * p.u + p.v, p.u + p.v};
        case MapKind::baker: {
            // two-sided binary shift: the bit leaving v enters u, keeping the
            // map an exact bijection on the lattice
            const std::uint64_t top_u = p.u >> 63;
            return {2 * p.u + (p.v & 1), (p.v >> 1) | (top_u << 63)};
        }
    }
    return p;
}

Region::Region(int dimension, std::uint32_t grid, std::vector<std::uint64_t> cells)
    : dim_(dimension), grid_(grid), cells_(std::move(cells)) {
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("Region: dimension must be 1 or 2");
    if (!is_pow2(grid_)) throw std::invalid_argument("Region: grid must be a power of two");
    if (cells_.empty()) throw std::invalid_argument("Region: empty cell set");
    shift_ = 64 - log2i(grid_);
    const std::uint64_t total =
        dim_ == 1 ? grid_ : static_cast<std::uint64_t>(grid_) * grid_;
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    if (cells_.back() >= total) throw std::invalid_argument("Region: cell index out of range");
    member_.assign(total, false);
    for (auto c : cells_) member_[c] = true;
}

Region Region::box(int dimension, std::uint32_t grid, double lo0, double hi0, double lo1,
                   double hi1) {
    auto idx = [&](double x) {
        auto i = static_cast<long long>(std::floor(x * grid + 0.5e-9));
        return std::clamp<long long>(i, 0, grid);
    };
    std::vector<std::uint64_t> cells;
    if (dimension == 1) {
        for (long long i = idx(lo0); i < idx(hi0); ++i) cells.push_back(static_cast<std::uint64_t>(i));
    } else {
        for (long long i = idx(lo0); i < idx(hi0); ++i)
            for (long long j = idx(lo1); j < idx(hi1); ++j)
                cells.push_back(static_cast<std::uint64_t>(i) * grid + static_cast<std::uint64_t>(j));
    }
    return Region(dimension, grid, std::move(cells));
}

double Region::volume() const {
    const double cell_vol = dim_ == 1 ? 1.0 / grid_ : 1.0 / (static_cast<double>(grid_) * grid_);
    return cell_vol * static_cast<double>(cells_.size());
}

std::uint64_t Region::cell_of(TorusPoint p) const {
    if (dim_ == 1) return p.u >> shift_;
    return (p.u >> shift_) * grid_ + (p.v >> shift_);
}

bool Region::contains(TorusPoint p) const { return member_[cell_of(p)]; }

TorusPoint Region::sample(RngStream& rng) const {
    const std::uint64_t cell = cells_[rng.below(cells_.size())];
    TorusPoint p;
    if (dim_ == 1) {
        p.u = (cell << shift_) | (rng.next_u64() >> (64 - shift_));
    } else {
        const std::uint64_t ci = cell / grid_, cj = cell % grid_;
        p.u = (ci << shift_) | (rng.next_u64() >> (64 - shift_));
        p.v = (cj << shift_) | (rng.next_u64() >> (64 - shift_));
    }
    return p;
}

std::vector<Region> consequents(const VolumePreservingMap& map, const Region& r0, int steps) {
    if (steps < 1) throw std::invalid_argument("consequents: need steps >= 1");
    if (map.dimension() != r0.dimension())
        throw std::invalid_argument("consequents: map/region dimension mismatch");
    const std::uint32_t grid = r0.grid();
    const int shift = 64 - log2i(grid);
    const std::uint64_t width = 1ULL << shift;
    constexpr int kSub = 8;  // sample lattice per cell axis, power of two
    const std::uint64_t delta = width / kSub;
    // offsets stay inside the half-open cell: left corner, interior lattice,
    // and one point an ulp below the right corner (so grid-aligned maps send
    // cells exactly to cells)
    std::vector<std::uint64_t> offsets;
    for (int s = 0; s < kSub; ++s) offsets.push_back(delta * static_cast<std::uint64_t>(s));
    offsets.push_back(width - 1);

    // Sample lattice of r0, advanced step by step so each r_i is the image of
    // the original points under i exact applications (no compounding rounding).
    std::vector<TorusPoint> pts;
    for (auto cell : r0.cells()) {
        if (r0.dimension() == 1) {
            const std::uint64_t base = cell << shift;
            for (auto off : offsets) pts.push_back({base + off, 0});
        } else {
            const std::uint64_t bi = (cell / grid) << shift;
            const std::uint64_t bj = (cell % grid) << shift;
            for (auto s : offsets)
                for (auto t : offsets) pts.push_back({bi + s, bj + t});
        }
    }

    std::vector<Region> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int step = 0; step < steps; ++step) {
        for (auto& p : pts) p = map.apply(p);
        std::vector<std::uint64_t> cells;
        cells.reserve(r0.cell_count() * 2);
        for (const auto& p : pts) cells.push_back(r0.dimension() == 1
                                                      ? (p.u >> shift)
                                                      : (p.u >> shift) * grid + (p.v >> shift));
        out.emplace_back(r0.dimension(), grid, std::move(cells));
    }
    return out;
}

std::optional<std::uint64_t> overlap_witness(const std::vector<Region>& regions,
                                             double container_volume, int k) {
    if (regions.empty()) throw std::invalid_argument("overlap_witness: no regions");
    if (k < 1) throw std::invalid_argument("overlap_witness: k must be >= 1");
    const auto& first = regions.front();
    for (const auto& r : regions) {
        if (r.grid() != first.grid() || r.dimension() != first.dimension())
            throw std::invalid_argument("overlap_witness: regions on different grids");
        if (r.cell_count() != first.cell_count())
            throw std::invalid_argument("overlap_witness: regions must share one volume");
    }
    const std::uint64_t total = first.dimension() == 1
                                    ? first.grid()
                                    : static_cast<std::uint64_t>(first.grid()) * first.grid();
    std::vector<std::uint32_t> cover(total, 0);
    for (const auto& r : regions)
        for (auto c : r.cells()) ++cover[c];
    std::optional<std::uint64_t> witness;
    for (std::uint64_t c = 0; c < total; ++c) {
        if (cover[c] >= static_cast<std::uint32_t>(k) + 1) {
            witness = c;
            break;
        }
    }
    const double nv = static_cast<double>(regions.size()) * first.volume();
    if (!witness && nv > k * container_volume + 1e-12)
        throw std::invalid_argument(
            "overlap_witness: nv > kV but no witness found; container volume inconsistent");
    return witness;
}

double non_return_bound(int k, double V, double v, std::uint64_t n) {
    if (k < 1) throw std::invalid_argument("non_return_bound: k must be >= 1");
    if (!(v > 0)) throw std::invalid_argument("non_return_bound: region volume must be positive");
    if (n < 1) throw std::invalid_argument("non_return_bound: n must be >= 1");
    return static_cast<double>(k) * V / (static_cast<double>(n) * v);
}

double recurrence_fraction(const VolumePreservingMap& map, const Region& r0, int k_returns,
                           int horizon, std::uint64_t samples, RngStream rng, Exec exec) {
    if (k_returns < 1 || horizon < k_returns)
        throw std::invalid_argument("recurrence_fraction: need horizon >= k >= 1");
    if (samples < 1) throw std::invalid_argument("recurrence_fraction: need samples >= 1");
    if (map.dimension() != r0.dimension())
        throw std::invalid_argument("recurrence_fraction: map/region dimension mismatch");
    const std::uint64_t hits = par::chunked_count(
        samples,
        [&](std::uint64_t i) {
            RngStream local = rng.substream(i);
            TorusPoint p = r0.sample(local);
            int returns = 0;
            for (int t = 0; t < horizon && returns < k_returns; ++t) {
                p = map.apply(p);
                if (r0.contains(p)) ++returns;
            }
            return returns >= k_returns;
        },
        exec);
    return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace odds::recurrence
