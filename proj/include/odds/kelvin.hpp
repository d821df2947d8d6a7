#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "odds/rng.hpp"

namespace odds::kelvin {

/// Three points A < B < C on the segment [0, L]. A constant repulsive force F
/// pushes A toward B while x_A is in the zone [0, H]; collisions A-B and B-C
/// are elastic; A reflects at 0 and C at L. B's near-immobility is emergent
/// from its large mass, not hard-coded.
struct KelvinSystem {
    double segment_length;  // L
    double zone_boundary;   // H
    double force;           // F >= 0
    std::array<double, 3> mass;      // m_A, m_B, m_C
    std::array<double, 3> position;  // x_A < x_B < x_C
    std::array<double, 3> velocity;

    KelvinSystem(double L, double H, double F, std::array<double, 3> m,
                 std::array<double, 3> x, std::array<double, 3> v);

    /// Default laboratory configuration (heavy B), optionally jittered.
    static KelvinSystem standard();
    static KelvinSystem jittered(RngStream& rng, double relative = 0.05);

    /// Kinetic plus zone potential F * (H - x_A) while x_A < H.
    double total_energy() const;
};

enum class EventType : std::uint8_t {
    collision_ab,
    collision_bc,
    wall_left,
    wall_right,
    zone_cross,
    horizon,
};

const char* event_name(EventType t);

struct Event {
    double time;
    std::array<double, 3> position;
    std::array<double, 3> velocity;  // post-event velocities
    EventType type;
};

struct EventLog {
    KelvinSystem initial;
    double horizon;
    std::vector<Event> events;  // final entry has type horizon at t = horizon

    const Event& back() const { return events.back(); }
    KelvinSystem final_state() const;
};

/// Deterministic event-driven evolution to time `horizon`: closed-form
/// ballistic / uniformly accelerated flights between events, elastic
/// collisions, exact wall reflections.
EventLog simulate(const KelvinSystem& system, double horizon);

/// CSV export: t, x_A, x_B, x_C, v_A, v_B, v_C, event.
void write_event_csv(const EventLog& log, std::ostream& out);

/// Sojourn-time measure over (v_A, v_C, x_A) cells, accumulated exactly from
/// the piecewise-polynomial flight segments.
struct OccupancyMeasure {
    int bins_va, bins_vc, bins_xa;
    double va_max;        // v_A range is [-va_max, va_max]
    double vc_max;        // v_C range shares the same symmetric convention
    double xa_max;        // x_A range is [0, xa_max]
    std::vector<double> weight;  // bins_va * bins_vc * bins_xa cells
    double total;

    double& at(int i, int j, int k) { return weight[(static_cast<std::size_t>(i) * bins_vc + j) * bins_xa + k]; }
    double at(int i, int j, int k) const { return weight[(static_cast<std::size_t>(i) * bins_vc + j) * bins_xa + k]; }
};

OccupancyMeasure occupancy(const EventLog& log, int bins_va, int bins_vc, int bins_xa);

struct MomentReport {
    double i_yz;   // time-weighted mean of v_A^2
    double i_xz;   // time-weighted mean of v_C^2
    double ratio;  // i_yz / i_xz
};

/// Moments of inertia of the trajectory-density solid about the coordinate
/// planes; their ratio tends to 1 for the full system on long runs.
MomentReport equipartition_moments(const OccupancyMeasure& occ);

struct LongRunReport {
    std::uint64_t event_count;
    double max_relative_energy_drift;
    OccupancyMeasure occupancy;
    KelvinSystem final_state;
};

/// Streaming run for long horizons: accumulates occupancy and the energy
/// drift without storing the event log.
LongRunReport long_run(const KelvinSystem& system, double horizon, int bins_va, int bins_vc,
                       int bins_xa);

}  // namespace odds::kelvin
