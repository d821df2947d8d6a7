#include "odds/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "odds/arbitrary_functions.hpp"
#include "odds/chains.hpp"
#include "odds/density_grid.hpp"
#include "odds/gauss_limits.hpp"
#include "odds/kelvin.hpp"
#include "odds/metrics.hpp"
#include "odds/needle.hpp"
#include "odds/recurrence.hpp"
#include "odds/rng.hpp"

namespace odds {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kTwoPi = 2.0 * kPi;

/// Typed access to the string parameter map with strict unknown-key
/// rejection and range validation that names the offending key.
class ParamReader {
public:
    explicit ParamReader(const std::map<std::string, std::string>& params) : params_(params) {}

    double get_double(const std::string& key, double def) {
        used_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) return def;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument(key);
            return v;
        } catch (...) {
            throw std::invalid_argument("param \"" + key + "\" must be a number");
        }
    }

    double require_min(const std::string& key, double v, double min) const {
        if (v < min)
            throw std::invalid_argument("param \"" + key + "\" must be >= " + format_double(min));
        return v;
    }

    int get_int(const std::string& key, int def, int min) {
        const double v = get_double(key, def);
        if (v != std::floor(v) || v < min)
            throw std::invalid_argument(key == "M" ? "M must be >= 1"
                                                   : "param \"" + key + "\" must be an integer >= " +
                                                         std::to_string(min));
        return static_cast<int>(v);
    }

    std::string get_string(const std::string& key, const std::string& def) {
        used_.insert(key);
        auto it = params_.find(key);
        return it == params_.end() ? def : it->second;
    }

    std::vector<double> get_list(const std::string& key, std::vector<double> def) {
        used_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) return def;
        std::string s = it->second;
        for (char& c : s)
            if (c == '[' || c == ']') c = ' ';
        std::vector<double> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                out.push_back(std::stod(tok));
            } catch (...) {
                throw std::invalid_argument("param \"" + key + "\" must be a list of numbers");
            }
        }
        if (out.empty()) throw std::invalid_argument("param \"" + key + "\" must be nonempty");
        return out;
    }

    void finish() const {
        for (const auto& [k, v] : params_)
            if (!used_.count(k)) throw std::invalid_argument("unknown key \"" + k + "\"");
    }

private:
    const std::map<std::string, std::string>& params_;
    std::set<std::string> used_;
};

ReportRow row(std::string experiment, std::string key, std::string value, std::string stat,
              double v, std::optional<double> target = std::nullopt,
              std::optional<double> bound = std::nullopt) {
    return ReportRow{std::move(experiment), std::move(key), std::move(value), std::move(stat), v,
                     target, bound};
}

// Smooth random density on the circle [0, theta): positive trigonometric
// polynomial with seed-determined coefficients.
DensityGrid random_trig_density(double theta, int harmonics, int grid, bool periodic,
                                RngStream rng) {
    std::vector<double> a(static_cast<std::size_t>(harmonics)), b(a.size());
    double budget = 0.0;
    for (int j = 0; j < harmonics; ++j) {
        a[static_cast<std::size_t>(j)] = rng.uniform(-1.0, 1.0) / (1.0 + j);
        b[static_cast<std::size_t>(j)] = rng.uniform(-1.0, 1.0) / (1.0 + j);
        budget += std::abs(a[static_cast<std::size_t>(j)]) + std::abs(b[static_cast<std::size_t>(j)]);
    }
    const double scale = budget > 0 ? 0.9 / budget : 0.0;
    return DensityGrid::from_function(0.0, theta, grid, periodic, [&](double t) {
        double v = 1.0;
        for (int j = 0; j < harmonics; ++j) {
            const double w = kTwoPi * (j + 1) * t / theta;
            v += scale * (a[static_cast<std::size_t>(j)] * std::cos(w) +
                          b[static_cast<std::size_t>(j)] * std::sin(w));
        }
        return v;
    });
}

DensityGrid wheel_density(const std::string& kind, double theta, int grid, int harmonics,
                          RngStream rng) {
    if (kind == "uniform") return DensityGrid::uniform(0.0, theta, grid, false);
    if (kind == "ramp")
        return DensityGrid::from_function(0.0, theta, grid, false,
                                          [&](double t) { return 2.0 * t / (theta * theta) + 0.1; });
    if (kind == "trig") return random_trig_density(theta, harmonics, grid, false, rng);
    throw std::invalid_argument("param \"density\" must be uniform, ramp or trig");
}

std::vector<ReportRow> run_wheel(const ExperimentConfig& cfg, bool validate_only) {
    ParamReader p(cfg.params);
    const int M = p.get_int("M", 100, 1);
    const double theta = p.require_min("theta", p.get_double("theta", 1.0), 1e-9);
    const int grid = p.get_int("grid", 4096, 8);
    const int harmonics = p.get_int("harmonics", 6, 1);
    const std::string kind = p.get_string("density", "trig");
    p.finish();
    if (kind != "uniform" && kind != "ramp" && kind != "trig")
        throw std::invalid_argument("param \"density\" must be uniform, ramp or trig");
    if (validate_only) return {};

    arbfn::WheelModel model(theta, M,
                            wheel_density(kind, theta, grid, harmonics, RngStream(cfg.seed, 1)));
    const double red = arbfn::red_probability(model);
    const double bound = arbfn::red_black_bound(model);
    std::vector<ReportRow> rows;
    rows.push_back(row(cfg.experiment, "M", std::to_string(M), "red_black_bound", bound));
    rows.push_back(row(cfg.experiment, "M", std::to_string(M), "red_probability", red, 0.5,
                       0.5 * bound));
    return rows;
}

DensityGrid2D planet_density(const std::string& kind, double a_lo, double a_hi, int na, int nb) {
    if (kind == "product_cos")
        return DensityGrid2D::from_function(a_lo, a_hi, 0.0, kTwoPi, na, nb, true,
                                            [](double, double b) { return 1.0 + std::cos(b); });
    if (kind == "uniform_b")
        return DensityGrid2D::from_function(a_lo, a_hi, 0.0, kTwoPi, na, nb, true,
                                            [](double a, double) { return 1.0 + a; });
    throw std::invalid_argument("param \"density\" must be product_cos or uniform_b");
}

std::vector<ReportRow> run_planets(const ExperimentConfig& cfg, bool validate_only) {
    ParamReader p(cfg.params);
    const double t = p.require_min("t", p.get_double("t", 100.0), 0.0);
    const int na = p.get_int("na", 128, 2);
    const int nb = p.get_int("nb", 512, 8);
    const int bins = p.get_int("bins", 512, 8);
    const int n_max = p.get_int("n_max", 3, 1);
    const double a_lo = p.get_double("a_lo", 0.0);
    const double a_hi = p.get_double("a_hi", 1.0);
    const std::string kind = p.get_string("density", "product_cos");
    p.finish();
    if (!(a_hi > a_lo)) throw std::invalid_argument("param \"a_hi\" must exceed a_lo");
    if (kind != "product_cos" && kind != "uniform_b")
        throw std::invalid_argument("param \"density\" must be product_cos or uniform_b");
    if (validate_only) return {};

    arbfn::PlanetModel model(planet_density(kind, a_lo, a_hi, na, nb), t);
    const std::vector<double> times{t};
    const auto report = arbfn::uniformization_report(model, times, n_max, bins);
    std::vector<ReportRow> rows;
    for (const auto& r : report) {
        std::optional<double> target, bound;
        if (kind == "product_cos" && r.n == 1 && a_lo == 0.0 && a_hi == 1.0) {
            target = t == 0.0 ? 0.5 : std::abs(std::sin(t / 2.0) / t);
            bound = 1e-4;
        }
        rows.push_back(row(cfg.experiment, "t", format_double(r.t),
                           "c_" + std::to_string(r.n) + "_magnitude", r.magnitude, target, bound));
    }
    if (!report.empty())
        rows.push_back(
            row(cfg.experiment, "t", format_double(t), "tv_to_uniform", report.front().tv_to_uniform));
    return rows;
}

std::vector<ReportRow> run_halfcircle(const ExperimentConfig& cfg, bool validate_only) {
    ParamReader p(cfg.params);
    std::vector<double> motions = p.get_list("motions", {1.0, std::sqrt(2.0), std::sqrt(3.0)});
    std::vector<double> phases = p.get_list("phases", {0.3, 1.1, 2.4});
    const double T = p.require_min("T", p.get_double("T", 1e5), 1.0);
    const auto steps = static_cast<std::int64_t>(p.get_double("steps", 0.0));
    const double arc_start = p.get_double("arc_start", 0.0);
    const double eps = p.get_double("epsilon", 0.0);
    p.finish();
    phases.resize(motions.size(), 0.0);
    if (validate_only) return {};
    const std::int64_t use_steps =
        steps > 0 ? steps : std::max<std::int64_t>(1000, static_cast<std::int64_t>(10.0 * T));

    const auto n = motions.size();
    const double target = std::pow(0.5, static_cast<double>(n));
    std::vector<ReportRow> rows;
    for (int rep = 0; rep < cfg.replicates; ++rep) {
        std::vector<double> a = motions;
        if (eps > 0) {
            RngStream rng = RngStream(cfg.seed, 2).substream(static_cast<std::uint64_t>(rep));
            for (double& ai : a) ai += rng.uniform(-eps / 2.0, eps / 2.0);
        }
        const double avg = arbfn::half_circle_time_average(a, phases, arc_start, T, use_steps);
        rows.push_back(row(cfg.experiment, "n", std::to_string(n), "time_average", avg, target,
                           0.02));
    }
    return rows;
}

std::vector<ReportRow> run_shuffle(const ExperimentConfig& cfg, bool validate_only) {
    ParamReader p(cfg.params);
    const double prob = p.get_double("p", 0.9);
    const int n = p.get_int("n", 3, 0);
    const double N = p.require_min("N", p.get_double("N", 1e6), 1.0);
    const int m = p.get_int("m", 0, 0);
    p.finish();
    if (prob < 0 || prob > 1) throw std::invalid_argument("param \"p\" must be in [0,1]");
    if (validate_only) return {};

    const auto replicates = static_cast<std::uint64_t>(N);
    const double exact = chains::two_card_expectation(prob, n);
    const double mc = chains::two_card_mc(prob, n, replicates, RngStream(cfg.seed, 3));
    std::vector<ReportRow> rows;
    rows.push_back(row(cfg.experiment, "p", format_double(prob), "two_card_mc", mc, exact,
                       4.0 / std::sqrt(static_cast<double>(replicates))));

    // exact-chain cross-check: the 2-state kernel spread equals |2p-1|^n
    const chains::TransitionKernel kernel({{prob, 1 - prob}, {1 - prob, prob}});
    const auto iter = chains::iterate_distribution(kernel, static_cast<std::size_t>(n),
                                                   DiscreteDistribution::point_mass(2, 0));
    const double spread = iter.trace.back().upper - iter.trace.back().lower;
    rows.push_back(row(cfg.experiment, "p", format_double(prob), "two_card_spread", spread,
                       std::abs(exact), 1e-12));

    if (prob > 0 && prob < 1) {
        const auto cert = chains::borel_contraction_certificate(
            std::vector<chains::TransitionKernel>(static_cast<std::size_t>(std::max(n, 1)), kernel),
            DiscreteDistribution::point_mass(2, 0));
        double excess = 0.0;
        for (const auto& c : cert) excess = std::max(excess, c.spread - c.bound);
        rows.push_back(row(cfg.experiment, "p", format_double(prob), "contraction_excess",
                           std::max(0.0, excess), 0.0, 1e-12));
    }

    if (m >= 2) {
        const auto perms = chains::permutation_table(m);
        // lazy uniform-transposition shuffle: stay with probability 1/2
        std::vector<double> law(perms.size(), 0.0);
        std::vector<std::size_t> transpositions;
        for (std::size_t g = 0; g < perms.size(); ++g) {
            int moved = 0;
            for (std::size_t i = 0; i < perms[g].size(); ++i)
                if (perms[g][i] != i) ++moved;
            if (moved == 2) transpositions.push_back(g);
            if (moved == 0) law[g] = 0.5;
        }
        for (auto g : transpositions) law[g] = 0.5 / static_cast<double>(transpositions.size());
        const auto shuffle = chains::shuffle_kernel(m, DiscreteDistribution(std::move(law), true));
        rows.push_back(row(cfg.experiment, "m", std::to_string(m), "mixing_time",
                           static_cast<double>(chains::mixing_time(shuffle, 1e-3))));
    }
    return rows;
}

DensityGrid2D needle_density(const std::string& kind, double side, int grid) {
    if (kind == "uniform") return DensityGrid2D::uniform(0.0, side, 0.0, side, grid, grid, false);
    if (kind == "gauss") {
        const double c = side / 2.0, s = side / 6.0;
        return DensityGrid2D::from_function(0.0, side, 0.0, side, grid, grid, false,
                                            [&](double x, double y) {
                                                const double dx = (x - c) / s, dy = (y - c) / s;
                                                return std::exp(-0.5 * (dx * dx + dy * dy));
                                            });
    }
    throw std::invalid_argument("param \"density\" must be uniform or gauss");
}

std::vector<ReportRow> run_needle(const ExperimentConfig& cfg, bool validate_only) {
    ParamReader p(cfg.params);
    const std::string mode = p.get_string("mode", "crossing");
    if (mode == "segmentation") {
        const double lambda = p.get_double("lambda", 0.5);
        const int m = p.get_int("m", 4, 1);
        const int grid = p.get_int("grid", 257, 2);
        const std::string kind = p.get_string("phi", "linear_sum");
        p.finish();
        if (kind != "linear_sum" && kind != "step" && kind != "uniform")
            throw std::invalid_argument("param \"phi\" must be linear_sum, step or uniform");
        if (validate_only) return {};
        DensityGrid2D phi = kind == "linear_sum"
                                ? DensityGrid2D::from_function(0, 1, 0, 1, grid, grid, false,
                                                               [](double x, double y) { return x + y; })
                            : kind == "step"
                                ? DensityGrid2D::from_function(
                                      0, 1, 0, 1, grid, grid, false,
                                      [](double x, double y) {
                                          return (x > 0.31 && x < 0.77 && y > 0.13 && y < 0.59) ? 1.0
                                                                                                : 0.0;
                                      })
                                : DensityGrid2D::uniform(0, 1, 0, 1, grid, grid, false);
        const auto seg = needle::Segmentation::square(0, 1, 0, 1, m, lambda);
        const double err = needle::segmentation_error(seg, phi);
        std::optional<double> target, bound;
        if (kind == "linear_sum" && m == 4 && lambda == 0.5) {
            target = 0.0625;
            bound = 1e-10;
        }
        return {row(cfg.experiment, "m", std::to_string(m), "segmentation_error", err, target,
                    bound)};
    }

    const double a = p.require_min("a", p.get_double("a", 1.0), 1e-12);
    const double b = p.get_double("b", 0.5);
    const int n = p.get_int("n", 1, 1);
    const double N = p.require_min("N", p.get_double("N", 1e6), 1.0);
    const int grid = p.get_int("grid", 128, 2);
    const std::string kind = p.get_string("density", "uniform");
    p.finish();
    if (!(b > 0) || !(b < a))
        throw std::invalid_argument("param \"b\" must satisfy 0 < b < a");
    if (kind != "uniform" && kind != "gauss")
        throw std::invalid_argument("param \"density\" must be uniform or gauss");
    if (validate_only) return {};

    needle::NeedleConfig config(a, b, n, needle_density(kind, 2.0 * a * n, grid));
    const double exact = needle::crossing_probability_exact(config);
    const auto samples = static_cast<std::uint64_t>(N);
    const double mc = needle::crossing_probability_mc(config, samples, RngStream(cfg.seed, 4));
    std::vector<ReportRow> rows;
    rows.push_back(row(cfg.experiment, "n", std::to_string(n), "crossing_mc", mc, exact,
                       4.0 / std::sqrt(static_cast<double>(samples))));
    rows.push_back(row(cfg.experiment, "n", std::to_string(n), "crossing_exact", exact,
                       2.0 * b / (kPi * a), kind == "uniform" ? 1e-6 : 0.01));
    return rows;
}

std::vector<ReportRow> run_recurrence(const ExperimentConfig& cfg, bool validate_only) {
    ParamReader p(cfg.params);
    const std::string map_kind = p.get_string("map", "cat");
    const double alpha = p.get_double("alpha", std::sqrt(2.0) - 1.0);
    const int k = p.get_int("k", 1, 1);
    const int T = p.get_int("T", 1000, 1);
    const double m = p.require_min("m", p.get_double("m", 1e4), 1.0);
    const double x0 = p.get_double("x0", 0.0), x1 = p.get_double("x1", 0.1);
    const double y0 = p.get_double("y0", 0.0), y1 = p.get_double("y1", 0.1);
    const int default_grid = map_kind == "rotation" ? 1024 : 256;
    const int G = p.get_int("G", default_grid, 2);
    p.finish();
    if (map_kind != "cat" && map_kind != "baker" && map_kind != "rotation" &&
        map_kind != "identity")
        throw std::invalid_argument("param \"map\" must be cat, baker, rotation or identity");
    if (validate_only) return {};

    recurrence::VolumePreservingMap map =
        map_kind == "cat"        ? recurrence::VolumePreservingMap::cat()
        : map_kind == "baker"    ? recurrence::VolumePreservingMap::baker()
        : map_kind == "rotation" ? recurrence::VolumePreservingMap::rotation(alpha)
        : map_kind == "identity" ? recurrence::VolumePreservingMap::identity(2)
                                 : throw std::invalid_argument(
                                       "param \"map\" must be cat, baker, rotation or identity");
    const auto region = recurrence::Region::box(map.dimension(), static_cast<std::uint32_t>(G),
                                                x0, x1, y0, y1);
    const auto samples = static_cast<std::uint64_t>(m);
    const double fraction =
        recurrence::recurrence_fraction(map, region, k, T, samples, RngStream(cfg.seed, 5));
    const double bound = recurrence::non_return_bound(k, 1.0, region.volume(),
                                                      static_cast<std::uint64_t>(T));
    std::vector<ReportRow> rows;
    rows.push_back(
        row(cfg.experiment, "map", map_kind, "recurrence_fraction", fraction, 1.0, 0.001));
    rows.push_back(row(cfg.experiment, "map", map_kind, "non_return_rate", 1.0 - fraction, 0.0,
                       bound + 3.0 / std::sqrt(static_cast<double>(samples))));
    return rows;
}

std::vector<ReportRow> run_limits(const ExperimentConfig& cfg, bool validate_only) {
    ParamReader p(cfg.params);
    const std::vector<double> ladder = p.get_list("p_ladder", {100.0, 1000.0, 10000.0});
    const double h = p.require_min("h", p.get_double("h", 1.0), 1e-12);
    const double n_mom = p.require_min("n", p.get_double("n", 1.0), 0.0);
    const int P = p.get_int("P", 30, 1);
    p.finish();
    if (validate_only) return {};

    const auto profile =
        limits::MaximumProfile::from_function(-5.0, 5.0, 16001, [](double z) {
            return std::exp(-(z - 1.0) * (z - 1.0));
        });
    std::vector<ReportRow> rows;
    for (double pexp : ladder) {
        const double ratio = limits::laplace_ratio([](double z) { return z + 2.0; },
                                                   [](double) { return 1.0; }, profile, pexp);
        std::optional<double> bound;
        if (pexp >= 1e4) bound = 1e-3;
        rows.push_back(
            row(cfg.experiment, "p", format_double(pexp), "laplace_ratio", ratio, 3.0, bound));
    }
    const auto mom = limits::moment_identity_check(h, n_mom, 0.0, P);
    rows.push_back(row(cfg.experiment, "P", std::to_string(P), "moment_series_residual",
                       mom.residual, 0.0, 1e-4));
    rows.push_back(row(cfg.experiment, "P", std::to_string(P), "moment_quadrature_gap",
                       std::abs(mom.closed_form - mom.quadrature), 0.0, 1e-8));
    return rows;
}

std::vector<ReportRow> run_sphere(const ExperimentConfig& cfg, bool validate_only) {
    ParamReader p(cfg.params);
    const int n = p.get_int("n", 1000, 2);
    const int k = p.get_int("k", 1, 1);
    const double N = p.require_min("N", p.get_double("N", 1e5), 1000.0);
    p.finish();
    if (k >= n) throw std::invalid_argument("param \"k\" must be < n");
    if (validate_only) return {};

    const auto samples = static_cast<std::uint64_t>(N);
    const auto exact_cdf = limits::sphere_marginal_cdf(n);
    const double ks_exact =
        limits::sphere_marginal_distance_vs(n, k, samples, RngStream(cfg.seed, 6), exact_cdf);
    const double ks_normal = limits::sphere_marginal_distance(n, k, samples, RngStream(cfg.seed, 6));

    // closed-form target: sup over a dense grid of |F_n - Phi|
    double closed = 0.0;
    const double radius = std::sqrt(static_cast<double>(n));
    for (int i = 0; i <= 200000; ++i) {
        const double x = -radius + 2.0 * radius * i / 200000.0;
        closed = std::max(closed, std::abs(exact_cdf(x) - limits::normal_cdf(x)));
    }
    std::vector<ReportRow> rows;
    rows.push_back(row(cfg.experiment, "n", std::to_string(n), "ks_exact_marginal", ks_exact, 0.0,
                       0.01));
    rows.push_back(
        row(cfg.experiment, "n", std::to_string(n), "ks_normal", ks_normal, closed, 0.01));
    return rows;
}

std::vector<ReportRow> run_kelvin(const ExperimentConfig& cfg, bool validate_only) {
    ParamReader p(cfg.params);
    const double T = p.require_min("T", p.get_double("T", 1e4), 1e-6);
    const int bins = p.get_int("bins", 32, 2);
    const double jitter = p.get_double("jitter", 0.0);
    const double reversal_T = p.get_double("reversal_T", 2e3);
    const double L = p.get_double("L", 1.0);
    const double H = p.get_double("H", 0.35);
    const double F = p.get_double("F", 2.0);
    const double mA = p.get_double("m_A", 1.0);
    const double mB = p.get_double("m_B", 100.0);
    const double mC = p.get_double("m_C", 1.0);
    const std::string event_log = p.get_string("event_log", "");
    const double event_log_T = p.get_double("event_log_T", 100.0);
    p.finish();
    if (!(mB > 0)) throw std::invalid_argument("param \"m_B\" must be > 0");
    if (!(mA > 0)) throw std::invalid_argument("param \"m_A\" must be > 0");
    if (!(mC > 0)) throw std::invalid_argument("param \"m_C\" must be > 0");
    if (validate_only) return {};

    std::vector<ReportRow> rows;
    for (int rep = 0; rep < cfg.replicates; ++rep) {
        kelvin::KelvinSystem base = kelvin::KelvinSystem::standard();
        kelvin::KelvinSystem sys(L, H, F, {mA, mB, mC}, base.position, base.velocity);
        if (jitter > 0) {
            RngStream rng = RngStream(cfg.seed, 7).substream(static_cast<std::uint64_t>(rep));
            kelvin::KelvinSystem j = kelvin::KelvinSystem::jittered(rng, jitter);
            sys = kelvin::KelvinSystem(L, H, F, {mA, mB, mC}, j.position, j.velocity);
        }
        const auto run = kelvin::long_run(sys, T, bins, bins, bins);
        const auto moments = kelvin::equipartition_moments(run.occupancy);
        const std::string rv = std::to_string(rep);
        rows.push_back(row(cfg.experiment, "replicate", rv, "energy_drift",
                           run.max_relative_energy_drift, 0.0, 1e-9));
        rows.push_back(row(cfg.experiment, "replicate", rv, "event_count",
                           static_cast<double>(run.event_count)));
        rows.push_back(row(cfg.experiment, "replicate", rv, "equipartition_ratio", moments.ratio));

        if (!event_log.empty() && rep == 0) {
            const auto log = kelvin::simulate(sys, std::min(T, event_log_T));
            std::ostringstream csv;
            kelvin::write_event_csv(log, csv);
            write_file_atomic(event_log, csv.str());
        }

        if (reversal_T > 0) {
            auto forward = kelvin::simulate(sys, reversal_T).final_state();
            for (double& v : forward.velocity) v = -v;
            auto back = kelvin::simulate(forward, reversal_T).final_state();
            double err = 0.0;
            for (int i = 0; i < 3; ++i) {
                err = std::max(err, std::abs(back.position[i] - sys.position[i]));
                err = std::max(err, std::abs(-back.velocity[i] - sys.velocity[i]));
            }
            rows.push_back(row(cfg.experiment, "replicate", rv, "reversal_error", err, 0.0, 1e-6));
        }
    }
    return rows;
}

using Runner = std::vector<ReportRow> (*)(const ExperimentConfig&, bool);

const std::map<std::string, Runner>& registry() {
    static const std::map<std::string, Runner> r = {
        {"recurrence", run_recurrence}, {"wheel", run_wheel},     {"planets", run_planets},
        {"halfcircle", run_halfcircle}, {"shuffle", run_shuffle}, {"needle", run_needle},
        {"limits", run_limits},         {"sphere", run_sphere},  {"kelvin", run_kelvin},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, fn] : registry()) v.push_back(k);
        return v;
    }();
    return names;
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg) {
    auto it = registry().find(cfg.experiment);
    if (it == registry().end())
        throw std::invalid_argument("unknown experiment \"" + cfg.experiment + "\"");
    return it->second(cfg, false);
}

void validate_experiment(const ExperimentConfig& cfg) {
    auto it = registry().find(cfg.experiment);
    if (it == registry().end())
        throw std::invalid_argument("unknown experiment \"" + cfg.experiment + "\"");
    it->second(cfg, true);
}

RunResult run(const ExperimentConfig& cfg) {
    const auto rows = run_experiment(cfg);
    const ReportHeader header{cfg.hash(), cfg.seed, kToolVersion};
    RunResult result;
    result.body = render_report(header, rows, cfg.format);
    result.all_pass = std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass(); });
    if (!cfg.output.empty()) write_file_atomic(cfg.output, result.body);
    return result;
}

std::vector<ReportRow> sweep_experiment(const ExperimentConfig& base, const std::string& key,
                                        const std::vector<std::string>& values) {
    if (values.empty()) throw std::invalid_argument("sweep: empty ladder");
    // validate every ladder point before executing any
    std::vector<ExperimentConfig> points;
    for (const auto& v : values) {
        ExperimentConfig cfg = base;
        cfg.params[key] = v;
        cfg.output.clear();
        validate_experiment(cfg);
        points.push_back(cfg);
    }
    std::vector<ReportRow> all;
    std::vector<double> headline;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto rows = run_experiment(points[i]);
        if (rows.empty()) continue;
        const auto& first = rows.front();
        headline.push_back(first.target ? std::abs(first.value - *first.target)
                                        : std::abs(first.value));
        for (auto& r : rows) {
            r.param_key = key;
            r.param_value = values[i];
            all.push_back(std::move(r));
        }
    }
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i + 1 < headline.size(); ++i)
        worst_ratio = std::max(worst_ratio, headline[i + 1] / std::max(headline[i], 1e-300));
    all.push_back(row(base.experiment, "ladder", key, "sweep_decay_max_ratio", worst_ratio));
    return all;
}

RunResult run_sweep(const ExperimentConfig& base, const std::string& key,
                    const std::vector<std::string>& values) {
    const auto rows = sweep_experiment(base, key, values);
    ExperimentConfig hashed = base;
    hashed.params["__ladder_" + key] = [&] {
        std::string s;
        for (const auto& v : values) s += v + ",";
        return s;
    }();
    const ReportHeader header{hashed.hash(), base.seed, kToolVersion};
    RunResult result;
    result.body = render_report(header, rows, base.format);
    result.all_pass = std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass(); });
    if (!base.output.empty()) write_file_atomic(base.output, result.body);
    return result;
}

}  // namespace odds
