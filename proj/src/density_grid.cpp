#include "odds/density_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace odds {

namespace {

double wrap_into(double x, double lo, double hi) {
    const double span = hi - lo;
    double y = std::fmod(x - lo, span);
    if (y < 0) y += span;
    return lo + y;
}

// Mass of a linear segment from value v0 to v1 over width w, cut at fraction
// f in [0,1]: integral of the interpolant over the first f of the cell.
double linear_mass(double v0, double v1, double w, double f) {
    return w * f * (v0 + 0.5 * (v1 - v0) * f);
}

}  // namespace

DensityGrid::DensityGrid(double lo, double hi, std::vector<double> values, bool periodic)
    : lo_(lo), hi_(hi), periodic_(periodic), values_(std::move(values)) {
    if (!(hi > lo)) throw std::invalid_argument("DensityGrid: empty support");
    if (values_.size() < 2) throw std::invalid_argument("DensityGrid: need at least 2 nodes");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("DensityGrid: non-finite value");
        if (v < 0) throw std::invalid_argument("DensityGrid: negative density value");
    }
    spacing_ = (hi_ - lo_) / static_cast<double>(cell_count());

    double total = 0.0;
    for (std::size_t c = 0; c < cell_count(); ++c)
        total += 0.5 * (values_[c] + right_value(c)) * spacing_;
    if (!(total > 0)) throw std::invalid_argument("DensityGrid: zero total mass");
    for (double& v : values_) v /= total;

    cdf_.assign(cell_count() + 1, 0.0);
    for (std::size_t c = 0; c < cell_count(); ++c)
        cdf_[c + 1] = cdf_[c] + 0.5 * (values_[c] + right_value(c)) * spacing_;
}

DensityGrid DensityGrid::from_function(double lo, double hi, int nodes, bool periodic,
                                       const std::function<double(double)>& f) {
    if (nodes < 2) throw std::invalid_argument("DensityGrid: need at least 2 nodes");
    std::vector<double> v(static_cast<std::size_t>(nodes));
    const double h = periodic ? (hi - lo) / nodes : (hi - lo) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) v[static_cast<std::size_t>(i)] = f(lo + h * i);
    return DensityGrid(lo, hi, std::move(v), periodic);
}

DensityGrid DensityGrid::uniform(double lo, double hi, int nodes, bool periodic) {
    return from_function(lo, hi, nodes, periodic, [](double) { return 1.0; });
}

double DensityGrid::right_value(std::size_t cell) const {
    return periodic_ ? values_[(cell + 1) % values_.size()] : values_[cell + 1];
}

double DensityGrid::cell_value(std::size_t cell, double frac) const {
    const double v0 = values_[cell];
    return v0 + (right_value(cell) - v0) * frac;
}

double DensityGrid::value_at(double x) const {
    if (periodic_) {
        x = wrap_into(x, lo_, hi_);
    } else {
        x = std::clamp(x, lo_, hi_);
    }
    double t = (x - lo_) / spacing_;
    auto cell = static_cast<std::size_t>(t);
    if (cell >= cell_count()) cell = cell_count() - 1;
    return cell_value(cell, t - static_cast<double>(cell));
}

double DensityGrid::integral(double a, double b) const {
    if (b < a) throw std::invalid_argument("DensityGrid::integral: b < a");
    if (b - a > span() + 1e-12) throw std::invalid_argument("DensityGrid::integral: range exceeds span");
    if (periodic_) {
        const double shift = wrap_into(a, lo_, hi_) - a;
        a += shift;
        b += shift;
        if (b > hi_) return integral(a, hi_) + integral(lo_, lo_ + (b - hi_));
    } else {
        a = std::clamp(a, lo_, hi_);
        b = std::clamp(b, lo_, hi_);
    }
    if (b <= a) return 0.0;
    const double ta = (a - lo_) / spacing_, tb = (b - lo_) / spacing_;
    auto ca = std::min(static_cast<std::size_t>(ta), cell_count() - 1);
    auto cb = std::min(static_cast<std::size_t>(tb), cell_count() - 1);
    auto cell_partial = [&](std::size_t c, double f0, double f1) {
        const double v0 = values_[c], v1 = right_value(c);
        return linear_mass(v0, v1, spacing_, f1) - linear_mass(v0, v1, spacing_, f0);
    };
    if (ca == cb) return cell_partial(ca, ta - ca, tb - cb);
    double total = cell_partial(ca, ta - ca, 1.0);
    total += cdf_[cb] - cdf_[ca + 1];
    total += cell_partial(cb, 0.0, tb - cb);
    return total;
}

double DensityGrid::max_on(double a, double b) const {
    double best = std::max(value_at(a), value_at(b));
    // nodes strictly inside (a,b); wrap-aware for periodic ranges
    double start = a;
    if (periodic_) {
        const double shift = wrap_into(a, lo_, hi_) - a;
        start = a + shift;
        b += shift;
    }
    const auto first = static_cast<long long>(std::ceil((start - lo_) / spacing_));
    for (long long i = first;; ++i) {
        const double x = lo_ + spacing_ * static_cast<double>(i);
        if (x >= b) break;
        if (x <= start) continue;
        std::size_t idx;
        if (periodic_) {
            idx = static_cast<std::size_t>(((i % static_cast<long long>(size())) + size()) % size());
        } else {
            if (i < 0 || i >= static_cast<long long>(size())) continue;
            idx = static_cast<std::size_t>(i);
        }
        best = std::max(best, values_[idx]);
    }
    return best;
}

double DensityGrid::min_on(double a, double b) const {
    double best = std::min(value_at(a), value_at(b));
    double start = a;
    if (periodic_) {
        const double shift = wrap_into(a, lo_, hi_) - a;
        start = a + shift;
        b += shift;
    }
    const auto first = static_cast<long long>(std::ceil((start - lo_) / spacing_));
    for (long long i = first;; ++i) {
        const double x = lo_ + spacing_ * static_cast<double>(i);
        if (x >= b) break;
        if (x <= start) continue;
        std::size_t idx;
        if (periodic_) {
            idx = static_cast<std::size_t>(((i % static_cast<long long>(size())) + size()) % size());
        } else {
            if (i < 0 || i >= static_cast<long long>(size())) continue;
            idx = static_cast<std::size_t>(i);
        }
        best = std::min(best, values_[idx]);
    }
    return best;
}

double DensityGrid::mean() const {
    // exact first moment of the interpolant, cell by cell
    double m = 0.0;
    for (std::size_t c = 0; c < cell_count(); ++c) {
        const double x0 = node_pos(c), v0 = values_[c], v1 = right_value(c);
        const double h = spacing_;
        // int_0^h (x0+u)(v0 + (v1-v0)u/h) du
        m += x0 * 0.5 * (v0 + v1) * h + h * h * (v0 / 6.0 + v1 / 3.0);
    }
    return m;
}

double DensityGrid::second_moment() const {
    double m = 0.0;
    for (std::size_t c = 0; c < cell_count(); ++c) {
        const double x0 = node_pos(c), v0 = values_[c], v1 = right_value(c);
        const double h = spacing_;
        // int_0^h (x0+u)^2 (v0 + (v1-v0)u/h) du expanded in powers of u
        const double s = (v1 - v0) / h;
        m += v0 * (x0 * x0 * h + x0 * h * h + h * h * h / 3.0) +
             s * (x0 * x0 * h * h / 2.0 + 2.0 * x0 * h * h * h / 3.0 + h * h * h * h / 4.0);
    }
    return m;
}

double DensityGrid::variance() const {
    const double mu = mean();
    return second_moment() - mu * mu;
}

double DensityGrid::tv_to_uniform() const {
    const double u = 1.0 / span();
    double acc = 0.0;
    for (std::size_t c = 0; c < cell_count(); ++c) {
        const double a = values_[c] - u, b = right_value(c) - u;
        const double h = spacing_;
        if (a * b >= 0) {
            acc += 0.5 * (std::abs(a) + std::abs(b)) * h;
        } else {
            const double t = a / (a - b);  // zero crossing fraction
            acc += 0.5 * (std::abs(a) * t + std::abs(b) * (1.0 - t)) * h;
        }
    }
    return 0.5 * acc;
}

double DensityGrid::sample(RngStream& rng) const {
    const double u = rng.uniform01();  // total mass is 1 after normalization
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    auto cell = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - cdf_.begin() - 1));
    if (cell >= cell_count()) cell = cell_count() - 1;
    const double m = u - cdf_[cell];
    const double v0 = values_[cell], v1 = right_value(cell);
    const double s = (v1 - v0) / spacing_;
    double d;
    if (std::abs(s) * spacing_ < 1e-14 * std::max(v0, 1e-300)) {
        d = (v0 > 0) ? m / v0 : 0.5 * spacing_;
    } else {
        const double disc = v0 * v0 + 2.0 * s * m;
        d = (-v0 + std::sqrt(std::max(0.0, disc))) / s;
    }
    d = std::clamp(d, 0.0, spacing_);
    return node_pos(cell) + d;
}

DensityGrid DensityGrid::standardized() const {
    const double mu = mean();
    const double sd = std::sqrt(variance());
    if (!(sd > 0)) throw std::invalid_argument("DensityGrid: zero variance, cannot standardize");
    std::vector<double> v = values_;
    for (double& x : v) x *= sd;  // density transforms with the Jacobian
    return DensityGrid((lo_ - mu) / sd, (hi_ - mu) / sd, std::move(v), periodic_);
}

// ---------------------------------------------------------------------------

DensityGrid2D::DensityGrid2D(double xlo, double xhi, double ylo, double yhi,
                             std::vector<std::vector<double>> values, bool periodic_y)
    : xlo_(xlo), xhi_(xhi), ylo_(ylo), yhi_(yhi), periodic_y_(periodic_y),
      values_(std::move(values)) {
    if (!(xhi > xlo) || !(yhi > ylo)) throw std::invalid_argument("DensityGrid2D: empty support");
    if (values_.size() < 2) throw std::invalid_argument("DensityGrid2D: need at least 2 x-nodes");
    const std::size_t ny = values_.front().size();
    if (ny < 2) throw std::invalid_argument("DensityGrid2D: need at least 2 y-nodes");
    for (const auto& col : values_) {
        if (col.size() != ny) throw std::invalid_argument("DensityGrid2D: ragged grid");
        for (double v : col) {
            if (!std::isfinite(v) || v < 0)
                throw std::invalid_argument("DensityGrid2D: invalid density value");
        }
    }
    dx_ = (xhi_ - xlo_) / static_cast<double>(values_.size() - 1);
    dy_ = (yhi_ - ylo_) / static_cast<double>(periodic_y_ ? ny : ny - 1);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
        total += 0.5 * (column_mass(i) + column_mass(i + 1)) * dx_;
    if (!(total > 0)) throw std::invalid_argument("DensityGrid2D: zero total mass");
    for (auto& col : values_)
        for (double& v : col) v /= total;

    col_cdf_.assign(values_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
        col_cdf_[i + 1] = col_cdf_[i] + 0.5 * (column_mass(i) + column_mass(i + 1)) * dx_;

    col_y_cdf_.assign(values_.size(), {});
    const std::size_t ycells = periodic_y_ ? ny : ny - 1;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        auto& c = col_y_cdf_[i];
        c.assign(ycells + 1, 0.0);
        for (std::size_t j = 0; j < ycells; ++j) {
            const double v0 = values_[i][j];
            const double v1 = values_[i][(j + 1) % ny];
            c[j + 1] = c[j] + 0.5 * (v0 + v1) * dy_;
        }
    }
}

double DensityGrid2D::column_mass(std::size_t i) const {
    const auto& col = values_[i];
    const std::size_t ny = col.size();
    double s = 0.0;
    if (periodic_y_) {
        for (std::size_t j = 0; j < ny; ++j) s += 0.5 * (col[j] + col[(j + 1) % ny]) * dy_;
    } else {
        for (std::size_t j = 0; j + 1 < ny; ++j) s += 0.5 * (col[j] + col[j + 1]) * dy_;
    }
    return s;
}

DensityGrid2D DensityGrid2D::from_function(double xlo, double xhi, double ylo, double yhi,
                                           int nx, int ny, bool periodic_y,
                                           const std::function<double(double, double)>& f) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("DensityGrid2D: need at least 2 nodes per axis");
    std::vector<std::vector<double>> v(static_cast<std::size_t>(nx),
                                       std::vector<double>(static_cast<std::size_t>(ny)));
    const double hx = (xhi - xlo) / (nx - 1);
    const double hy = periodic_y ? (yhi - ylo) / ny : (yhi - ylo) / (ny - 1);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = f(xlo + hx * i, ylo + hy * j);
    return DensityGrid2D(xlo, xhi, ylo, yhi, std::move(v), periodic_y);
}

DensityGrid2D DensityGrid2D::uniform(double xlo, double xhi, double ylo, double yhi, int nx,
                                     int ny, bool periodic_y) {
    return from_function(xlo, xhi, ylo, yhi, nx, ny, periodic_y,
                         [](double, double) { return 1.0; });
}

double DensityGrid2D::value_at(double x, double y) const {
    x = std::clamp(x, xlo_, xhi_);
    if (periodic_y_) {
        y = wrap_into(y, ylo_, yhi_);
    } else {
        y = std::clamp(y, ylo_, yhi_);
    }
    double tx = (x - xlo_) / dx_;
    double ty = (y - ylo_) / dy_;
    auto i = std::min(static_cast<std::size_t>(tx), values_.size() - 2);
    const std::size_t ny = values_.front().size();
    const std::size_t ycells = periodic_y_ ? ny : ny - 1;
    auto j = std::min(static_cast<std::size_t>(ty), ycells - 1);
    const double fx = tx - static_cast<double>(i);
    const double fy = ty - static_cast<double>(j);
    const std::size_t j1 = (j + 1) % ny;
    const double a = values_[i][j] * (1 - fy) + values_[i][j1] * fy;
    const double b = values_[i + 1][j] * (1 - fy) + values_[i + 1][j1] * fy;
    return a * (1 - fx) + b * fx;
}

double DensityGrid2D::integral(double x0, double x1, double y0, double y1) const {
    x0 = std::clamp(x0, xlo_, xhi_);
    x1 = std::clamp(x1, xlo_, xhi_);
    y0 = std::clamp(y0, ylo_, yhi_);
    y1 = std::clamp(y1, ylo_, yhi_);
    if (x1 <= x0 || y1 <= y0) return 0.0;
    // split at grid lines; bilinear integral over each piece is the corner mean
    auto breaks = [](double step, double a, double b, double base) {
        std::vector<double> out{a};
        auto first = static_cast<long long>(std::ceil((a - base) / step + 1e-12));
        for (long long k = first;; ++k) {
            const double x = base + step * static_cast<double>(k);
            if (x >= b - 1e-15 * std::abs(step)) break;
            if (x > a) out.push_back(x);
        }
        out.push_back(b);
        return out;
    };
    const auto xs = breaks(dx_, x0, x1, xlo_);
    const auto ys = breaks(dy_, y0, y1, ylo_);
    double total = 0.0;
    for (std::size_t a = 0; a + 1 < xs.size(); ++a) {
        for (std::size_t b = 0; b + 1 < ys.size(); ++b) {
            const double mean = 0.25 * (value_at(xs[a], ys[b]) + value_at(xs[a + 1], ys[b]) +
                                        value_at(xs[a], ys[b + 1]) + value_at(xs[a + 1], ys[b + 1]));
            total += mean * (xs[a + 1] - xs[a]) * (ys[b + 1] - ys[b]);
        }
    }
    return total;
}

DensityGrid DensityGrid2D::x_marginal() const {
    std::vector<double> m(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) m[i] = column_mass(i);
    return DensityGrid(xlo_, xhi_, std::move(m), false);
}

std::pair<double, double> DensityGrid2D::sample(RngStream& rng) const {
    // x from the piecewise-linear marginal, then y from the exact conditional
    // CDF (1-s)*F_i + s*F_{i+1} of the bilinear interpolant.
    const double ux = rng.uniform01();
    auto it = std::upper_bound(col_cdf_.begin(), col_cdf_.end(), ux);
    auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - col_cdf_.begin() - 1));
    if (i >= values_.size() - 1) i = values_.size() - 2;
    const double m0 = column_mass(i), m1 = column_mass(i + 1);
    const double mrem = ux - col_cdf_[i];
    const double slope = (m1 - m0) / dx_;
    double d;
    if (std::abs(slope) * dx_ < 1e-14 * std::max(m0, 1e-300)) {
        d = (m0 > 0) ? mrem / m0 : 0.5 * dx_;
    } else {
        d = (-m0 + std::sqrt(std::max(0.0, m0 * m0 + 2.0 * slope * mrem))) / slope;
    }
    d = std::clamp(d, 0.0, dx_);
    const double x = xlo_ + dx_ * static_cast<double>(i) + d;
    const double s = d / dx_;

    const auto& F0 = col_y_cdf_[i];
    const auto& F1 = col_y_cdf_[i + 1];
    const double mass_here = (1 - s) * F0.back() + s * F1.back();
    const double uy = rng.uniform01() * mass_here;
    std::size_t lo = 0, hi = F0.size() - 1;
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const double fm = (1 - s) * F0[mid] + s * F1[mid];
        (fm <= uy ? lo : hi) = mid;
    }
    const std::size_t ny = values_.front().size();
    const std::size_t j1 = (lo + 1) % ny;
    const double v0 = (1 - s) * values_[i][lo] + s * values_[i + 1][lo];
    const double v1 = (1 - s) * values_[i][j1] + s * values_[i + 1][j1];
    const double rem = uy - ((1 - s) * F0[lo] + s * F1[lo]);
    const double sl = (v1 - v0) / dy_;
    double e;
    if (std::abs(sl) * dy_ < 1e-14 * std::max(v0, 1e-300)) {
        e = (v0 > 0) ? rem / v0 : 0.5 * dy_;
    } else {
        e = (-v0 + std::sqrt(std::max(0.0, v0 * v0 + 2.0 * sl * rem))) / sl;
    }
    e = std::clamp(e, 0.0, dy_);
    return {x, ylo_ + dy_ * static_cast<double>(lo) + e};
}

}  // namespace odds
