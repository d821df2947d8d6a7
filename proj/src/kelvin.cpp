#include "odds/kelvin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace odds::kelvin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGrazeSpeed = 1e-12;

// Smallest t >= 0 where s(t) = a2 t^2 + a1 t + a0 rises through zero
// (s <= 0 before contact, s'(t) > 0 at contact). a2 >= 0. Zero-delay
// contacts count only when strictly approaching, so a just-processed event
// (separating state) never re-fires.
double rising_contact(double a2, double a1, double a0) {
    if (a0 > 0.0) a0 = 0.0;  // fp guard; events reclamp positions
    if (a2 == 0.0) {
        if (a1 > kGrazeSpeed && a0 <= 0.0) return -a0 / a1;
        return kInf;
    }
    const double disc = a1 * a1 - 4.0 * a2 * a0;  // >= a1^2 since a0 <= 0
    if (disc < 0.0) return kInf;
    const double root = std::sqrt(disc);
    // larger root, stable in both sign regimes of a1
    const double r2 = (a1 <= 0.0) ? (-a1 + root) / (2.0 * a2) : -2.0 * a0 / (a1 + root);
    if (!(r2 >= 0.0)) return kInf;
    const double slope = 2.0 * a2 * r2 + a1;
    return slope > kGrazeSpeed ? r2 : kInf;
}

// Smallest t >= 0 where s(t) falls through zero (s >= 0 before contact,
// s'(t) < 0 at contact). a2 >= 0.
double falling_contact(double a2, double a1, double a0) {
    if (a0 < 0.0) a0 = 0.0;
    if (a2 == 0.0) {
        if (a1 < -kGrazeSpeed && a0 >= 0.0) return -a0 / a1;
        return kInf;
    }
    if (a1 >= 0.0) return kInf;  // opens upward and never moves left
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc < 0.0) return kInf;
    const double root = std::sqrt(disc);
    const double r1 = 2.0 * a0 / (-a1 + root);  // smaller root, stable (a1 < 0)
    if (!(r1 >= 0.0)) return kInf;
    const double slope = 2.0 * a2 * r1 + a1;
    return slope < -kGrazeSpeed ? r1 : kInf;
}

struct FlightSegment {
    double duration;
    double xa0, va0, accel;  // A state at segment start
    double vc;               // C velocity (constant per segment)
};

}  // namespace

KelvinSystem::KelvinSystem(double L, double H, double F, std::array<double, 3> m,
                           std::array<double, 3> x, std::array<double, 3> v)
    : segment_length(L), zone_boundary(H), force(F), mass(m), position(x), velocity(v) {
    if (!(L > 0)) throw std::invalid_argument("KelvinSystem: segment length must be positive");
    if (!(H > 0) || !(H < L))
        throw std::invalid_argument("KelvinSystem: zone boundary must lie inside the segment");
    if (!(F >= 0)) throw std::invalid_argument("KelvinSystem: force must be >= 0");
    for (double mm : m)
        if (!(mm > 0)) throw std::invalid_argument("KelvinSystem: masses must be positive");
    if (!(0 <= x[0] && x[0] < x[1] && x[1] < x[2] && x[2] <= L))
        throw std::invalid_argument("KelvinSystem: positions must satisfy 0 <= x_A < x_B < x_C <= L");
    for (double vv : v)
        if (!std::isfinite(vv)) throw std::invalid_argument("KelvinSystem: non-finite velocity");
}

KelvinSystem KelvinSystem::standard() {
    // mass ratio 100 keeps B nearly motionless while the A-C energy exchange
    // still equilibrates within desk-scale horizons
    return KelvinSystem(1.0, 0.35, 2.0, {1.0, 100.0, 1.0}, {0.12, 0.55, 0.80},
                        {1.0, 0.0, -1.0});
}

KelvinSystem KelvinSystem::jittered(RngStream& rng, double relative) {
    KelvinSystem s = standard();
    auto wiggle = [&](double v) { return v * (1.0 + relative * (2.0 * rng.uniform01() - 1.0)); };
    s.position = {wiggle(s.position[0]), s.position[1], wiggle(s.position[2])};
    s.velocity = {wiggle(s.velocity[0]), 0.0, wiggle(s.velocity[2])};
    return s;
}

double KelvinSystem::total_energy() const {
    double e = 0.0;
    for (int i = 0; i < 3; ++i) e += 0.5 * mass[i] * velocity[i] * velocity[i];
    if (position[0] < zone_boundary) e += force * (zone_boundary - position[0]);
    return e;
}

const char* event_name(EventType t) {
    switch (t) {
        case EventType::collision_ab: return "collision_ab";
        case EventType::collision_bc: return "collision_bc";
        case EventType::wall_left: return "wall_left";
        case EventType::wall_right: return "wall_right";
        case EventType::zone_cross: return "zone_cross";
        case EventType::horizon: return "horizon";
    }
    return "?";
}

KelvinSystem EventLog::final_state() const {
    KelvinSystem s = initial;
    if (!events.empty()) {
        s.position = events.back().position;
        s.velocity = events.back().velocity;
    }
    return s;
}

namespace {

void simulate_stream(const KelvinSystem& system, double horizon,
                     const std::function<void(const FlightSegment&)>& on_flight,
                     const std::function<void(const Event&)>& on_event) {
    if (!(horizon > 0)) throw std::invalid_argument("simulate: horizon must be positive");
    const double L = system.segment_length, H = system.zone_boundary, F = system.force;
    const auto& m = system.mass;
    auto x = system.position;
    auto v = system.velocity;
    bool in_zone = x[0] < H || (x[0] == H && v[0] < 0);
    double t = 0.0;
    constexpr std::uint64_t kMaxEvents = 2000000000ULL;

    for (std::uint64_t n = 0; n < kMaxEvents; ++n) {
        const double g = (in_zone && F > 0) ? F / m[0] : 0.0;
        // candidate event times relative to now, tie-broken in this order
        double t_ab = rising_contact(0.5 * g, v[0] - v[1], x[0] - x[1]);
        double t_bc = rising_contact(0.0, v[1] - v[2], x[1] - x[2]);
        double t_w0 = falling_contact(0.5 * g, v[0], x[0]);
        double t_wl = rising_contact(0.0, v[2], x[2] - L);
        double t_zone = kInf;
        if (F > 0) {
            t_zone = in_zone ? rising_contact(0.5 * g, v[0], x[0] - H)
                             : falling_contact(0.0, v[0], x[0] - H);
        }

        EventType type = EventType::horizon;
        double dt = horizon - t;
        auto consider = [&](double cand, EventType et) {
            if (cand < dt) {
                dt = cand;
                type = et;
            }
        };
        consider(t_ab, EventType::collision_ab);
        consider(t_bc, EventType::collision_bc);
        consider(t_w0, EventType::wall_left);
        consider(t_wl, EventType::wall_right);
        consider(t_zone, EventType::zone_cross);

        if (on_flight) on_flight({dt, x[0], v[0], g, v[2]});

        // advance the flight
        x[0] += v[0] * dt + 0.5 * g * dt * dt;
        x[1] += v[1] * dt;
        x[2] += v[2] * dt;
        v[0] += g * dt;
        t += dt;

        switch (type) {
            case EventType::collision_ab: {
                x[0] = x[1];
                const double ma = m[0], mb = m[1];
                const double va = v[0], vb = v[1];
                v[0] = ((ma - mb) * va + 2.0 * mb * vb) / (ma + mb);
                v[1] = ((mb - ma) * vb + 2.0 * ma * va) / (ma + mb);
                break;
            }
            case EventType::collision_bc: {
                x[2] = x[1];
                const double mb = m[1], mc = m[2];
                const double vb = v[1], vc = v[2];
                v[1] = ((mb - mc) * vb + 2.0 * mc * vc) / (mb + mc);
                v[2] = ((mc - mb) * vc + 2.0 * mb * vb) / (mb + mc);
                break;
            }
            case EventType::wall_left:
                x[0] = 0.0;
                v[0] = -v[0];
                break;
            case EventType::wall_right:
                x[2] = L;
                v[2] = -v[2];
                break;
            case EventType::zone_cross:
                x[0] = H;
                in_zone = v[0] < 0;
                break;
            case EventType::horizon:
                break;
        }
        if (on_event) on_event({t, x, v, type});
        if (type == EventType::horizon) return;
    }
    throw std::runtime_error("simulate: event cap exceeded");
}

}  // namespace

EventLog simulate(const KelvinSystem& system, double horizon) {
    EventLog log{system, horizon, {}};
    simulate_stream(system, horizon, nullptr,
                    [&](const Event& e) { log.events.push_back(e); });
    return log;
}

void write_event_csv(const EventLog& log, std::ostream& out) {
    out << "t,x_A,x_B,x_C,v_A,v_B,v_C,event\n";
    char buf[256];
    auto row = [&](double t, const std::array<double, 3>& x, const std::array<double, 3>& v,
                   const char* name) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", t, x[0], x[1], x[2],
                      v[0], v[1], v[2], name);
        out << buf;
    };
    row(0.0, log.initial.position, log.initial.velocity, "start");
    for (const auto& e : log.events) row(e.time, e.position, e.velocity, event_name(e.type));
}

namespace {

struct OccupancyBuilder {
    OccupancyMeasure occ;
    double dva, dvc, dxa;

    void add_segment(const FlightSegment& s) {
        if (!(s.duration > 0)) return;
        const int jc = std::clamp(
            static_cast<int>((s.vc + occ.vc_max) / dvc), 0, occ.bins_vc - 1);

        // breakpoints: v_A bin edges (linear) and x_A bin edges (quadratic)
        std::vector<double> cuts{0.0, s.duration};
        if (s.accel != 0.0) {
            for (int e = 0; e <= occ.bins_va; ++e) {
                const double edge = -occ.va_max + dva * e;
                const double tau = (edge - s.va0) / s.accel;
                if (tau > 0 && tau < s.duration) cuts.push_back(tau);
            }
        }
        for (int e = 0; e <= occ.bins_xa; ++e) {
            const double edge = dxa * e;
            // 0.5 g tau^2 + v0 tau + (x0 - edge) = 0
            if (s.accel == 0.0) {
                if (s.va0 != 0.0) {
                    const double tau = (edge - s.xa0) / s.va0;
                    if (tau > 0 && tau < s.duration) cuts.push_back(tau);
                }
            } else {
                const double a2 = 0.5 * s.accel, a1 = s.va0, a0 = s.xa0 - edge;
                const double disc = a1 * a1 - 4.0 * a2 * a0;
                if (disc >= 0) {
                    const double root = std::sqrt(disc);
                    for (double tau : {(-a1 - root) / (2.0 * a2), (-a1 + root) / (2.0 * a2)})
                        if (tau > 0 && tau < s.duration) cuts.push_back(tau);
                }
            }
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double w = cuts[i + 1] - cuts[i];
            if (!(w > 0)) continue;
            const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
            const double va = s.va0 + s.accel * mid;
            const double xa = s.xa0 + s.va0 * mid + 0.5 * s.accel * mid * mid;
            const int ia = std::clamp(static_cast<int>((va + occ.va_max) / dva), 0, occ.bins_va - 1);
            const int ka = std::clamp(static_cast<int>(xa / dxa), 0, occ.bins_xa - 1);
            occ.at(ia, jc, ka) += w;
        }
        occ.total += s.duration;
    }
};

}  // namespace

namespace {

// Velocity ranges fixed upfront by energy conservation: |v| <= sqrt(2E/m).
// The same symmetric range serves both velocity axes so that mirror-symmetric
// systems bin symmetrically.
OccupancyBuilder make_builder(const KelvinSystem& sys, int bins_va, int bins_vc, int bins_xa) {
    if (bins_va < 1 || bins_vc < 1 || bins_xa < 1)
        throw std::invalid_argument("occupancy: bins must be >= 1");
    const double e0 = sys.total_energy();
    double vmax = std::sqrt(2.0 * e0 / std::min(sys.mass[0], sys.mass[2]));
    if (!(vmax > 0)) vmax = 1.0;
    vmax *= 1.0 + 1e-12;
    return OccupancyBuilder{
        OccupancyMeasure{bins_va, bins_vc, bins_xa, vmax, vmax, sys.segment_length,
                         std::vector<double>(static_cast<std::size_t>(bins_va) * bins_vc * bins_xa, 0.0),
                         0.0},
        2.0 * vmax / bins_va, 2.0 * vmax / bins_vc, sys.segment_length / bins_xa};
}

}  // namespace

OccupancyMeasure occupancy(const EventLog& log, int bins_va, int bins_vc, int bins_xa) {
    if (log.events.empty()) throw std::invalid_argument("occupancy: empty event log");
    OccupancyBuilder b = make_builder(log.initial, bins_va, bins_vc, bins_xa);

    // replay flights from the log
    double prev_t = 0.0;
    auto x = log.initial.position;
    auto v = log.initial.velocity;
    bool in_zone = x[0] < log.initial.zone_boundary ||
                   (x[0] == log.initial.zone_boundary && v[0] < 0);
    for (const auto& e : log.events) {
        const double g =
            (in_zone && log.initial.force > 0) ? log.initial.force / log.initial.mass[0] : 0.0;
        b.add_segment({e.time - prev_t, x[0], v[0], g, v[2]});
        prev_t = e.time;
        x = e.position;
        v = e.velocity;
        if (e.type == EventType::zone_cross) {
            in_zone = v[0] < 0;
        } else {
            in_zone = x[0] < log.initial.zone_boundary ||
                      (x[0] == log.initial.zone_boundary && v[0] < 0);
        }
    }
    return std::move(b.occ);
}

LongRunReport long_run(const KelvinSystem& system, double horizon, int bins_va, int bins_vc,
                       int bins_xa) {
    OccupancyBuilder b = make_builder(system, bins_va, bins_vc, bins_xa);
    const double e0 = system.total_energy();
    double drift = 0.0;
    std::uint64_t count = 0;
    KelvinSystem final_state = system;
    simulate_stream(
        system, horizon, [&](const FlightSegment& s) { b.add_segment(s); },
        [&](const Event& e) {
            if (e.type != EventType::horizon) ++count;
            KelvinSystem probe = system;
            probe.position = e.position;
            probe.velocity = e.velocity;
            drift = std::max(drift, std::abs(probe.total_energy() - e0) /
                                        std::max(std::abs(e0), 1e-300));
            if (e.type == EventType::horizon) {
                final_state.position = e.position;
                final_state.velocity = e.velocity;
            }
        });
    return {count, drift, std::move(b.occ), final_state};
}

MomentReport equipartition_moments(const OccupancyMeasure& occ) {
    if (!(occ.total > 0)) throw std::invalid_argument("equipartition_moments: empty measure");
    const double dva = 2.0 * occ.va_max / occ.bins_va;
    const double dvc = 2.0 * occ.vc_max / occ.bins_vc;
    double iyz = 0.0, ixz = 0.0;
    for (int i = 0; i < occ.bins_va; ++i) {
        const double va = -occ.va_max + dva * (i + 0.5);
        for (int j = 0; j < occ.bins_vc; ++j) {
            const double vc = -occ.vc_max + dvc * (j + 0.5);
            for (int k = 0; k < occ.bins_xa; ++k) {
                const double w = occ.at(i, j, k);
                iyz += w * va * va;
                ixz += w * vc * vc;
            }
        }
    }
    iyz /= occ.total;
    ixz /= occ.total;
    if (ixz == 0.0)
        throw std::domain_error("equipartition_moments: degenerate trajectory, I_xz is zero");
    return {iyz, ixz, iyz / ixz};
}

}  // namespace odds::kelvin
