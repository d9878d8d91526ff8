#include "cavityent/events.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cavityent/entanglement.hpp"
#include "cavityent/errors.hpp"

namespace cavityent {

namespace {

constexpr double kRootTolerance = 1e-10;  // relative to the horizon
constexpr double kTouchConcurrence = 1e-12;
constexpr int kMaxIterations = 200;

struct Transition {
    double t;
    bool entering;  // f goes from < 0 to >= 0
};

double threshold(double s) {
    return std::sqrt((1.0 - s) / (1.0 + s));
}

void check_inputs(const InitialState& init, const CavityParams& p1, const CavityParams& p2, double horizon) {
    init.validate();
    p1.validate();
    p2.validate();
    if (!std::isfinite(horizon) || !(horizon > 0.0)) {
        throw DomainError("event horizon must be positive");
    }
}

double effective_step(const CavityParams& p1, const CavityParams& p2, double scan_step) {
    const double fallback = default_scan_step(p1, p2);
    return scan_step > 0.0 ? std::min(scan_step, fallback) : fallback;
}

template <typename F>
double bisect(const F& f, double lo, double hi, double tol) {
    const bool lo_nonneg = f(lo) >= 0.0;
    for (int it = 0; it < kMaxIterations && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if ((f(mid) >= 0.0) == lo_nonneg) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

template <typename F>
double golden_max(const F& f, double a, double b) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < kMaxIterations && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Boundaries of the region f >= 0 on (0, horizon].  Negative local maxima between samples are
// refined: a hidden excursion above zero yields a pair of crossings, and a touch accepted by
// `touch_ok` yields a coincident entering/leaving pair.
template <typename F, typename Touch>
std::vector<Transition> scan_transitions(const F& f, double horizon, double step, Touch&& touch_ok) {
    const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(horizon / step)));
    const double tol = kRootTolerance * horizon;
    std::vector<double> ts(n + 1);
    std::vector<double> vs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        ts[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
        vs[i] = f(ts[i]);
    }

    std::vector<Transition> out;
    for (std::size_t i = 1; i <= n; ++i) {
        const bool before = vs[i - 1] >= 0.0;
        const bool after = vs[i] >= 0.0;
        if (before != after) {
            out.push_back({bisect(f, ts[i - 1], ts[i], tol), after});
        }
    }
    for (std::size_t i = 1; i < n; ++i) {
        const bool all_negative = vs[i - 1] < 0.0 && vs[i] < 0.0 && vs[i + 1] < 0.0;
        if (!all_negative || !(vs[i] > vs[i - 1]) || !(vs[i] >= vs[i + 1])) {
            continue;
        }
        const double peak = golden_max(f, ts[i - 1], ts[i + 1]);
        if (f(peak) >= 0.0) {
            out.push_back({bisect(f, ts[i - 1], peak, tol), true});
            out.push_back({bisect(f, peak, ts[i + 1], tol), false});
        } else if (touch_ok(peak)) {
            out.push_back({peak, true});
            out.push_back({peak, false});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) { return a.t < b.t; });
    return out;
}

std::vector<double> sample_c12(const InitialState& init, const CavityParams& p1, const CavityParams& p2,
                               double horizon) {
    const double step = default_scan_step(p1, p2) / 4.0;  // period / 200
    const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(horizon / step)));
    std::vector<double> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(n);
        c[i] = concurrence_qubits(init.s, amplitude(p1, t), amplitude(p2, t));
    }
    return c;
}

bool has_interior_maximum(const std::vector<double>& c) {
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        if (c[i] > kTouchConcurrence && c[i] > c[i - 1] && c[i] >= c[i + 1]) {
            return true;
        }
    }
    return false;
}

std::vector<Interval> pair_intervals(const EsdSearch& search, double horizon) {
    std::vector<Interval> out;
    std::size_t r = 0;
    for (double death : search.esd_times) {
        while (r < search.revival_times.size() && search.revival_times[r] < death) {
            ++r;
        }
        if (r < search.revival_times.size()) {
            out.push_back({death, search.revival_times[r], false});
            ++r;
        } else {
            out.push_back({death, horizon, true});
        }
    }
    return out;
}

Regime regime_from(const EsdSearch& search, const std::vector<double>& c12) {
    if (!search.esd_times.empty()) {
        return search.revival_times.empty() ? Regime::EsdTerminal : Regime::DarkPeriods;
    }
    return has_interior_maximum(c12) ? Regime::OscillatoryNoEsd : Regime::MonotonicDecay;
}

} // namespace

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::DarkPeriods: return "DARK_PERIODS";
        case Regime::EsdTerminal: return "ESD_TERMINAL";
        case Regime::OscillatoryNoEsd: return "OSCILLATORY_NO_ESD";
        case Regime::MonotonicDecay: return "MONOTONIC_DECAY";
    }
    return "?";
}

double default_horizon(const CavityParams& p1, const CavityParams& p2) {
    p1.validate();
    p2.validate();
    if (p1.lambda > 0.0 && p2.lambda > 0.0) {
        const double slowest = std::min({p1.lambda, p1.gamma(), p2.lambda, p2.gamma()});
        return 10.0 / slowest;
    }
    return 4.0 * 2.0 * std::numbers::pi / std::min(p1.rabi(), p2.rabi());
}

double default_scan_step(const CavityParams& p1, const CavityParams& p2) {
    return 2.0 * std::numbers::pi / std::max(p1.rabi(), p2.rabi()) / 50.0;
}

EsdSearch find_esd_times(const InitialState& init, const CavityParams& p1, const CavityParams& p2, double horizon,
                         double scan_step) {
    check_inputs(init, p1, p2, horizon);
    EsdSearch out;
    out.esd_possible = init.s > 0.0;
    if (!out.esd_possible || init.s >= 1.0) {
        return out;
    }
    const double thr = threshold(init.s);
    const auto g = [&](double t) { return amplitude(p1, t).f_mag * amplitude(p2, t).f_mag - thr; };
    const auto touch = [&](double t) {
        const AmplitudePair a1 = amplitude(p1, t);
        const AmplitudePair a2 = amplitude(p2, t);
        const double raw = std::abs(a1.e * a2.e) * (1.0 + init.s) * (thr - a1.f_mag * a2.f_mag);
        return raw < kTouchConcurrence;
    };
    for (const auto& tr : scan_transitions(g, horizon, effective_step(p1, p2, scan_step), touch)) {
        (tr.entering ? out.esd_times : out.revival_times).push_back(tr.t);
    }
    return out;
}

std::optional<double> find_esb_time(const InitialState& init, const CavityParams& p1, const CavityParams& p2,
                                    double horizon, double scan_step) {
    check_inputs(init, p1, p2, horizon);
    if (init.s >= 1.0) {
        return std::nullopt;  // reservoirs stay in a product state
    }
    const double thr = threshold(init.s);
    if (thr >= 1.0) {
        return 0.0;
    }
    const auto h = [&](double t) { return thr - std::abs(amplitude(p1, t).e * amplitude(p2, t).e); };
    const auto never = [](double) { return false; };
    for (const auto& tr : scan_transitions(h, horizon, effective_step(p1, p2, scan_step), never)) {
        if (tr.entering) {
            return tr.t;
        }
    }
    return std::nullopt;
}

std::vector<Interval> dark_periods(const InitialState& init, const CavityParams& p1, const CavityParams& p2,
                                   double horizon, double scan_step) {
    return pair_intervals(find_esd_times(init, p1, p2, horizon, scan_step), horizon);
}

Regime classify_regime(const InitialState& init, const CavityParams& p1, const CavityParams& p2, double horizon,
                       double scan_step) {
    const EsdSearch search = find_esd_times(init, p1, p2, horizon, scan_step);
    return regime_from(search, sample_c12(init, p1, p2, horizon));
}

EventReport analyze_events(const InitialState& init, const CavityParams& p1, const CavityParams& p2,
                           double horizon, double scan_step) {
    EventReport report;
    report.horizon = horizon;
    const EsdSearch search = find_esd_times(init, p1, p2, horizon, scan_step);
    report.esd_possible = search.esd_possible;
    report.esd_times = search.esd_times;
    report.revival_times = search.revival_times;
    report.dark_intervals = pair_intervals(search, horizon);
    report.esb_time = find_esb_time(init, p1, p2, horizon, scan_step);
    report.regime = regime_from(search, sample_c12(init, p1, p2, horizon));
    return report;
}

} // namespace cavityent
