// events.hpp: entanglement sudden death / birth detection and regime classification
//
// The atom-atom concurrence vanishes exactly when |F1 F2| >= sqrt((1 - s)/(1 + s)) and the
// reservoir-reservoir concurrence is positive exactly when |E1 E2| < sqrt((1 - s)/(1 + s)).
// Events are the boundaries of those regions, located by a uniform scan followed by
// bisection.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cavityent/amplitudes.hpp"
#include "cavityent/quantum_state.hpp"

namespace cavityent {

enum class Regime {
    DarkPeriods,       // ESD followed by at least one revival
    EsdTerminal,       // ESD with no revival before the horizon
    OscillatoryNoEsd,  // no ESD, c_12 has interior local maxima
    MonotonicDecay,    // no ESD, no interior local maxima
};

std::string_view to_string(Regime r);

struct Interval {
    double start{0.0};
    double end{0.0};
    bool open_at_horizon{false};  // entanglement had not revived by the horizon
};

struct EsdSearch {
    std::vector<double> esd_times;      // c_12 reaches zero
    std::vector<double> revival_times;  // c_12 leaves zero
    bool esd_possible{false};           // false when s <= 0
};

struct EventReport {
    double horizon{0.0};
    bool esd_possible{false};
    std::vector<double> esd_times;
    std::vector<double> revival_times;
    std::vector<Interval> dark_intervals;
    std::optional<double> esb_time;
    Regime regime{Regime::MonotonicDecay};
};

// 10 / min over both cavities of min(lambda, gamma) when both are lossy, otherwise four
// ideal Rabi periods 4 * 2 pi / min(R1, R2).
double default_horizon(const CavityParams& p1, const CavityParams& p2);

// One fiftieth of the fastest Rabi period 2 pi / max(R1, R2).
double default_scan_step(const CavityParams& p1, const CavityParams& p2);

// ESD and revival times up to `horizon`.  The scan step is min(scan_step, default); pass 0
// for the default.  Roots are bisected to 1e-10 * horizon.
EsdSearch find_esd_times(const InitialState& init, const CavityParams& p1, const CavityParams& p2, double horizon,
                         double scan_step = 0.0);

// First time the reservoir concurrence becomes positive; 0 when it is positive for all t > 0.
std::optional<double> find_esb_time(const InitialState& init, const CavityParams& p1, const CavityParams& p2,
                                    double horizon, double scan_step = 0.0);

std::vector<Interval> dark_periods(const InitialState& init, const CavityParams& p1, const CavityParams& p2,
                                   double horizon, double scan_step = 0.0);

Regime classify_regime(const InitialState& init, const CavityParams& p1, const CavityParams& p2, double horizon,
                       double scan_step = 0.0);

EventReport analyze_events(const InitialState& init, const CavityParams& p1, const CavityParams& p2,
                           double horizon, double scan_step = 0.0);

} // namespace cavityent
