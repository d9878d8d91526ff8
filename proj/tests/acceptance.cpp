// Acceptance binary: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cavityent/app.hpp"
#include "cavityent/entanglement.hpp"
#include "cavityent/events.hpp"
#include "cavityent/oracle.hpp"
#include "cavityent/protocol.hpp"
#include "support.hpp"

using namespace cavityent;

namespace {

struct Verdict {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

Verdict ac1_memory_kernel() {
    testing::Sampler rng(1001);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const CavityParams p = rng.oracle_cavity();
        const double t_max = 10.0 / p.lambda;
        const oracle::TimeGrid grid{t_max, testing::fine_steps(p, t_max)};
        worst = std::max(worst, testing::sup_distance(oracle::memory_kernel_solve(p, grid),
                                                      testing::closed_form(p, grid.times())));
    }
    return {worst < 1e-6, fmt("sup-norm %.3g over 20 sets", worst)};
}

Verdict ac2_mode_convergence() {
    const CavityParams p{1.0, 1.0, 0.0};
    const double exact_abs = std::abs(amplitude(p, 3.0).e);
    std::vector<double> err;
    for (std::size_t n : {251, 501, 1001, 2001}) {
        const auto sol = oracle::discretized_modes_solve(p, {n, 50.0}, {3.0, 2});
        err.push_back(std::abs(std::abs(sol.excited.back()) - exact_abs));
    }
    const bool monotone = err[1] < err[0] && err[2] < err[1] && err[3] < err[2];
    return {monotone && err[3] < 1e-3,
            fmt("errors %.3g -> %.3g, monotone %g", err[0], err[3], monotone ? 1.0 : 0.0)};
}

Verdict ac3_design_point() {
    ProtocolRequest req;
    req.init = {1.0 / 3.0, 0.0};
    req.decaying = {1.0, 1.0, 0.0};
    req.t_bar = 3.0;
    const ProtocolDesign d = design_protocol(req);
    const bool pass = std::abs(d.f1_at_tbar - 0.9922) <= 1e-3 && std::abs(d.omega2 - 0.396) <= 5e-3 &&
                      d.w.fidelity >= 0.985;
    return {pass, fmt("|F1| %.6f, omega2/lambda2 %.6f, W fidelity %.6f", d.f1_at_tbar, d.omega2, d.w.fidelity)};
}

Verdict ac4_wootters() {
    testing::Sampler rng(1004);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const InitialState init = rng.initial();
        const CavityParams p1 = rng.cavity();
        const CavityParams p2 = rng.cavity();
        const double t = rng.uniform(0.0, 30.0);
        const AmplitudePair a1 = amplitude(p1, t);
        const AmplitudePair a2 = amplitude(p2, t);
        const JointState psi = compose_state(init, a1, a2);
        worst = std::max({worst,
                          std::abs(wootters(reduce(psi, Subsystem::A1, Subsystem::A2)) -
                                   concurrence_qubits(init.s, a1, a2)),
                          std::abs(wootters(reduce(psi, Subsystem::R1, Subsystem::R2)) -
                                   concurrence_reservoirs(init.s, a1, a2)),
                          std::abs(wootters(reduce(psi, Subsystem::A1, Subsystem::R1)) -
                                   concurrence_qubit_own_reservoir(init.s, a1)),
                          std::abs(wootters(reduce(psi, Subsystem::A2, Subsystem::R2)) -
                                   concurrence_qubit_own_reservoir(init.s, a2))});
    }
    return {worst < 1e-10, fmt("max deviation %.3g over 50 samples", worst)};
}

Verdict ac5_tangle() {
    testing::Sampler rng(1005);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const InitialState init = rng.initial();
        const CavityParams p1 = rng.cavity();
        const CavityParams p2 = rng.cavity();
        double lo = 1e300;
        double hi = -1e300;
        for (int k = 0; k <= 200; ++k) {
            const double tau = bilocal_tangle(reduce(evolve_state(init, p1, p2, 0.2 * k), Subsystem::A1,
                                                     Subsystem::R1));
            lo = std::min(lo, tau);
            hi = std::max(hi, tau);
            worst = std::max(worst, std::abs(tau - (1.0 - init.s * init.s)));
        }
        worst = std::max(worst, hi - lo);
    }
    return {worst < 1e-10, fmt("max spread or offset %.3g over 20 runs", worst)};
}

Verdict ac6_inequality() {
    testing::Sampler rng(1006);
    double worst = -1.0;
    bool negative = false;
    for (int i = 0; i < 1000; ++i) {
        const InitialState init = rng.initial();
        const double sum = snapshot(init, rng.cavity(), rng.cavity(), rng.uniform(0.0, 50.0)).squared_sum();
        negative = negative || sum < 0.0;
        worst = std::max(worst, sum - (1.0 - init.s * init.s));
    }
    return {!negative && worst <= 1e-10, fmt("max excess %.3g over 1000 snapshots", worst)};
}

Verdict ac7_markov_events() {
    const CavityParams p{1.0, 1000.0, 0.0};
    const double gamma = p.gamma();
    const EventReport r = analyze_events({0.2, 0.0}, p, p, default_horizon(p, p));
    if (r.esd_times.size() != 1 || !r.esb_time) {
        return {false, "expected one ESD and one ESB"};
    }
    const double esd = -std::log(1.0 - std::sqrt(2.0 / 3.0));
    const double esb = 0.5 * std::log(1.5);
    const double rel_esd = std::abs(r.esd_times[0] * gamma / esd - 1.0);
    const double rel_esb = std::abs(*r.esb_time * gamma / esb - 1.0);
    return {rel_esd <= 1e-4 && rel_esb <= 1e-4,
            fmt("gamma*t_esd %.6f, gamma*t_esb %.6f, worst rel %.2g", r.esd_times[0] * gamma, *r.esb_time * gamma,
                std::max(rel_esd, rel_esb))};
}

Verdict ac8_qualitative() {
    const double window = 40.0;
    const CavityParams solid{1.0, 0.1, 0.5};
    const CavityParams dashed{1.0, 0.1, 2.0};
    const auto dark = dark_periods({0.2, 0.0}, solid, solid, window);
    double max_crr = 0.0;
    for (int k = 0; k <= 4000; ++k) {
        const double t = window * k / 4000.0;
        max_crr = std::max(max_crr, concurrence_reservoirs(0.2, amplitude(solid, t), amplitude(solid, t)));
    }
    const bool a = dark.size() >= 2 && max_crr > 0.9;
    const bool b = find_esd_times({0.2, 0.0}, dashed, dashed, window).esd_times.empty();
    bool c = true;
    for (double delta : {0.5, 2.0}) {
        const CavityParams p{1.0, 1.0, delta};
        c = c && !find_esd_times({0.2, 0.0}, p, p, default_horizon(p, p)).esd_times.empty();
    }
    std::set<Regime> labels;
    for (double k : {0.0, 1.0, 2.0, 3.0}) {
        const CavityParams p1{2.5, 1.0, 2.5 * k};
        const CavityParams p2{2.5, 1.0, -2.5 * k};
        labels.insert(classify_regime({0.3, 0.0}, p1, p2, 10.0));
    }
    const bool d = labels.size() >= 2;
    std::ostringstream os;
    os << "dark intervals " << dark.size() << ", max c_r1r2 " << fmt("%.4f", max_crr) << ", detuned ESD-free "
       << b << ", bad-cavity ESD " << c << ", distinct regimes " << labels.size();
    return {a && b && c && d, os.str()};
}

double sup_over(const CavityParams& p, double horizon, complex (*limit)(const CavityParams&, double)) {
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double t = horizon * i / 2000.0;
        worst = std::max(worst, std::abs(amplitude(p, t).e - limit(p, t)));
    }
    return worst;
}

Verdict ac9_limits() {
    std::vector<double> markov;
    for (double ratio : {10.0, 30.0, 100.0}) {
        const CavityParams p{1.0, ratio, 0.0};
        markov.push_back(sup_over(p, 5.0 / p.gamma(), markovian_amplitude));
    }
    std::vector<double> jc;
    for (double ratio : {0.1, 0.03, 0.01}) {
        const CavityParams p{1.0, ratio, 0.0};
        jc.push_back(sup_over(p, 8.0 * std::numbers::pi / p.rabi(), jc_amplitude));
    }
    const bool pass = markov[1] < markov[0] && markov[2] < markov[1] && jc[1] < jc[0] && jc[2] < jc[1];
    return {pass, fmt("markov %.3g > %.3g > %.3g", markov[0], markov[1], markov[2]) +
                      fmt(", ideal cavity %.3g > %.3g > %.3g", jc[0], jc[1], jc[2])};
}

std::string run_cli(const std::vector<std::string>& args, int& code) {
    std::vector<const char*> argv{"cavityent_cli"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    code = app::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
}

Verdict ac10_determinism() {
    const std::string dir = CAVITYENT_CONFIG_DIR;
    const std::vector<std::vector<std::string>> commands = {
        {"dynamics", "--config", dir + "/dark_periods.json"},
        {"events", "--config", dir + "/markov_events.json"},
        {"protocol", "--config", dir + "/protocol_design.json"},
        {"sweep", "--config", dir + "/opposite_detuning_sweep.json"},
        {"validate", "--config", dir + "/validate.json"},
    };
    int identical = 0;
    for (const auto& args : commands) {
        int code_a = 0;
        int code_b = 0;
        const std::string a = run_cli(args, code_a);
        const std::string b = run_cli(args, code_b);
        identical += (code_a == 0 && code_a == code_b && a == b && !a.empty()) ? 1 : 0;
    }
    return {identical == static_cast<int>(commands.size()),
            std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands byte-identical"};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"AC1 memory-kernel oracle equivalence", ac1_memory_kernel},
        {"AC2 mode-discretization convergence", ac2_mode_convergence},
        {"AC3 W-state design point", ac3_design_point},
        {"AC4 Wootters vs closed-form concurrences", ac4_wootters},
        {"AC5 bilocal tangle invariant", ac5_tangle},
        {"AC6 concurrence inequality", ac6_inequality},
        {"AC7 Markovian ESD and ESB times", ac7_markov_events},
        {"AC8 qualitative regimes", ac8_qualitative},
        {"AC9 limit convergence", ac9_limits},
        {"AC10 CLI determinism", ac10_determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += v.pass ? 0 : 1;
        std::printf("%s %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), secs);
    }
    return failures == 0 ? 0 : 1;
}
