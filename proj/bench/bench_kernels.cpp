// Benchmark comparing the OpenMP kernels against the serial reference path.
// Results must be bit-identical; the benchmark reports timing and verifies
// the equality on every workload.
//
//   odds_bench [--quick]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#include "odds/arbitrary_functions.hpp"
#include "odds/chains.hpp"
#include "odds/density_grid.hpp"
#include "odds/gauss_limits.hpp"
#include "odds/needle.hpp"
#include "odds/parallel.hpp"
#include "odds/recurrence.hpp"
#include "odds/rng.hpp"

using namespace odds;

namespace {

double time_ms(const std::function<double()>& fn, double& result) {
    const auto t0 = std::chrono::steady_clock::now();
    result = fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void compare(const char* name, const std::function<double(Exec)>& kernel) {
    double serial = 0.0, parallel = 0.0;
    const double ts = time_ms([&] { return kernel(Exec::serial); }, serial);
    const double tp = time_ms([&] { return kernel(Exec::parallel); }, parallel);
    const bool identical = serial == parallel;
    std::printf("%-28s serial %8.1f ms   openmp %8.1f ms   speedup %5.2fx   %s\n", name, ts, tp,
                ts / tp, identical ? "bit-identical" : "MISMATCH");
    if (!identical) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const std::uint64_t scale = quick ? 1 : 10;

    std::printf("workers: %d\n", par::worker_count());

    compare("two_card_mc", [&](Exec exec) {
        return chains::two_card_mc(0.9, 3, 400000 * scale, RngStream(1), exec);
    });

    auto table = DensityGrid2D::uniform(0, 2, 0, 2, 65, 65, false);
    needle::NeedleConfig needle_cfg(1.0, 0.5, 1, std::move(table));
    compare("needle_crossing_mc", [&](Exec exec) {
        return needle::crossing_probability_mc(needle_cfg, 300000 * scale, RngStream(2), exec);
    });

    compare("half_circle_time_average", [&](Exec exec) {
        const std::vector<double> a{1.0, std::sqrt(2.0)}, b{0.3, 1.1};
        return arbfn::half_circle_time_average(a, b, 0.0, 1e4,
                                               static_cast<std::int64_t>(100000 * scale), exec);
    });

    const auto region = recurrence::Region::box(2, 256, 0.0, 0.1, 0.0, 0.1);
    compare("recurrence_fraction", [&](Exec exec) {
        return recurrence::recurrence_fraction(recurrence::VolumePreservingMap::cat(), region, 1,
                                               400, 2000 * scale, RngStream(3), exec);
    });

    compare("sphere_marginal_distance", [&](Exec exec) {
        return limits::sphere_marginal_distance(200, 1, 10000 * scale, RngStream(4), exec);
    });

    auto density = DensityGrid::uniform(-1, 1, 1024, false);
    compare("l2_lln_check", [&](Exec exec) {
        return limits::l2_lln_check(density, 50, 20000 * scale, RngStream(5), exec).empirical;
    });

    std::printf("all kernels bit-identical across execution paths\n");
    return 0;
}
