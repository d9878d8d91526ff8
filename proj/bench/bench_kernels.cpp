// Serial reference vs OpenMP kernels: wall time and bitwise agreement.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "cavityent/kernels.hpp"
#include "cavityent/oracle.hpp"

using namespace cavityent;

namespace {

double seconds(const std::function<void()>& body, int repeats) {
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) {
        body();
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / repeats;
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  identical %s\n", name, serial, parallel,
                serial / parallel, identical ? "yes" : "NO");
}

} // namespace

int main() {
    std::printf("threads: %d\n", kernels::max_threads());

    std::vector<double> times(200001);
    for (std::size_t i = 0; i < times.size(); ++i) {
        times[i] = 100.0 * static_cast<double>(i) / static_cast<double>(times.size() - 1);
    }
    const CavityParams p1{1.0, 0.1, 0.5};
    const CavityParams p2{1.0, 0.3, -0.5};
    std::vector<EntanglementSnapshot> a;
    std::vector<EntanglementSnapshot> b;
    const double snap_serial = seconds([&] { a = kernels::snapshot_grid_reference({0.2, 0.0}, p1, p2, times); }, 3);
    const double snap_parallel = seconds([&] { b = kernels::snapshot_grid({0.2, 0.0}, p1, p2, times); }, 3);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
        same = a[i].c_12 == b[i].c_12 && a[i].c_r1r2 == b[i].c_r1r2 && a[i].c_1r2 == b[i].c_1r2;
    }
    report("snapshot_grid", snap_serial, snap_parallel, same);

    const CavityParams p{1.0, 1.0, 0.0};
    const oracle::ModeDiscretization disc{2001, 50.0};
    const oracle::TimeGrid grid{3.0, 301};
    oracle::ModeSolution ms;
    oracle::ModeSolution mp;
    const double mode_serial = seconds([&] { ms = oracle::discretized_modes_solve_reference(p, disc, grid); }, 1);
    const double mode_parallel = seconds([&] { mp = oracle::discretized_modes_solve(p, disc, grid); }, 1);
    report("discretized_modes", mode_serial, mode_parallel, ms.excited == mp.excited);
    return 0;
}
