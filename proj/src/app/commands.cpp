#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "cavityent/app.hpp"
#include "cavityent/entanglement.hpp"
#include "cavityent/events.hpp"
#include "cavityent/kernels.hpp"
#include "cavityent/oracle.hpp"
#include "cavityent/protocol.hpp"

namespace cavityent::app {

using nlohmann::json;
using format::round12;

namespace {

constexpr std::size_t kMaxSweepPoints = 1'000'000;
constexpr double kOracleStepRate = 0.005;  // memory-kernel step times the fastest rate

const char* const kDynamicsHeader = "t,c12,cr1r2,c1r1,c2r2,c1r2,c2r1,tangle,abs_e1,abs_e2";

std::string state_text(const JointState& state) {
    std::ostringstream os;
    write_state_dump(os, state);
    return os.str();
}

json header(const RunConfig& cfg) {
    return {{"command", to_string(cfg.mode)}, {"unit", to_string(cfg.unit)}, {"reference_rate", cfg.reference_rate}};
}

std::string render(const RunConfig& cfg, const json& doc) {
    return cfg.effective_format() == Format::json ? format::json_text(doc) : format::flat_csv(doc);
}

// A time value in every reported unit.
struct TimeScales {
    double reference_rate;
    double lambda1;

    json abs(const std::vector<double>& ts) const {
        json out = json::array();
        for (double t : ts) {
            out.push_back(round12(t / reference_rate));
        }
        return out;
    }
    json lam(const std::vector<double>& ts) const {
        if (!(lambda1 > 0.0)) {
            return nullptr;
        }
        json out = json::array();
        for (double t : ts) {
            out.push_back(round12(t * lambda1));
        }
        return out;
    }
    json rel(const std::vector<double>& ts) const {
        json out = json::array();
        for (double t : ts) {
            out.push_back(round12(t));
        }
        return out;
    }
    json abs(std::optional<double> t) const { return t ? json(round12(*t / reference_rate)) : json(nullptr); }
    json lam(std::optional<double> t) const {
        return t && lambda1 > 0.0 ? json(round12(*t * lambda1)) : json(nullptr);
    }
};

double event_horizon(const RunConfig& cfg) {
    return cfg.events.horizon ? *cfg.events.horizon : default_horizon(cfg.cavity1, cfg.cavity2);
}

// ---- validate checks -------------------------------------------------------------------

struct Check {
    std::string name;
    std::string status;
    double residual{0.0};
    double tolerance{0.0};
    std::string detail;
};

Check run_check(const std::string& name, double tolerance, const std::function<double()>& residual) {
    Check c{name, "pass", 0.0, tolerance, ""};
    try {
        c.residual = residual();
        if (!(c.residual < tolerance)) {
            c.status = "fail";
        }
    } catch (const Error& e) {
        c.status = "error";
        c.residual = std::nan("");
        c.detail = e.what();
    }
    return c;
}

Check skipped(const std::string& name, double tolerance, const std::string& why) {
    return {name, "skipped", std::nan(""), tolerance, why};
}

double oracle_window(const RunConfig& cfg, const CavityParams& p) {
    if (cfg.validate.t_max) {
        return *cfg.validate.t_max;
    }
    return p.lambda > 0.0 ? 10.0 / p.lambda : 4.0 * 2.0 * std::numbers::pi / p.rabi();
}

// Window wide enough to hold the Rabi splitting, and a spacing of at most lambda / 3.5.
oracle::ModeDiscretization mode_discretization(const RunConfig& cfg, const CavityParams& p) {
    oracle::ModeDiscretization disc;
    disc.cutoff = cfg.validate.cutoff ? *cfg.validate.cutoff : std::max(50.0, 20.0 * p.rabi() / p.lambda);
    if (cfg.validate.n_modes) {
        disc.n_modes = *cfg.validate.n_modes;
    } else {
        const auto n = static_cast<std::size_t>(std::ceil(7.0 * disc.cutoff));
        disc.n_modes = std::clamp<std::size_t>(n | 1U, 1001, 3001);
    }
    return disc;
}

double sup_distance(const std::vector<complex>& a, const std::vector<complex>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

double memory_kernel_residual(const RunConfig& cfg, const CavityParams& p) {
    const double t_max = oracle_window(cfg, p);
    const double rate = std::max({p.lambda, p.omega, std::abs(p.delta)});
    const std::size_t steps = cfg.validate.oracle_steps
                                  ? *cfg.validate.oracle_steps
                                  : static_cast<std::size_t>(std::ceil(t_max * rate / kOracleStepRate)) + 1;
    const oracle::TimeGrid grid{t_max, steps};
    const std::vector<complex> numeric = oracle::memory_kernel_solve(p, grid);
    std::vector<complex> exact;
    for (double t : grid.times()) {
        exact.push_back(amplitude(p, t).e);
    }
    return sup_distance(numeric, exact);
}

// Largest ratio of consecutive sup-norm distances; below 1 means strictly decreasing.
double ordering_residual(const std::vector<double>& distances) {
    double worst = 0.0;
    for (std::size_t i = 1; i < distances.size(); ++i) {
        worst = std::max(worst, distances[i] / distances[i - 1]);
    }
    return worst;
}

double markov_ordering(const CavityParams& base) {
    std::vector<double> d;
    for (double ratio : {10.0, 30.0, 100.0}) {
        const CavityParams p{base.omega, ratio * base.omega, 0.0};
        const double horizon = 5.0 / p.gamma();
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double t = horizon * i / 2000.0;
            worst = std::max(worst, std::abs(amplitude(p, t).e - markovian_amplitude(p, t)));
        }
        d.push_back(worst);
    }
    return ordering_residual(d);
}

double jc_ordering(const CavityParams& base) {
    std::vector<double> d;
    for (double ratio : {0.1, 0.03, 0.01}) {
        const CavityParams p{base.omega, ratio * base.omega, base.delta};
        const double horizon = 4.0 * 2.0 * std::numbers::pi / p.rabi();
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double t = horizon * i / 2000.0;
            worst = std::max(worst, std::abs(amplitude(p, t).e - jc_amplitude(p, t)));
        }
        d.push_back(worst);
    }
    return ordering_residual(d);
}

std::vector<Check> validation_checks(const RunConfig& cfg) {
    const CavityParams& p1 = cfg.cavity1;
    const CavityParams& p2 = cfg.cavity2;
    const InitialState& init = cfg.initial;
    const double tau = 1.0 - init.s * init.s;
    const oracle::TimeGrid samples{cfg.grid.t_max, cfg.validate.samples};
    std::vector<Check> checks;

    checks.push_back(run_check("memory_kernel_cavity1", 1e-6, [&] { return memory_kernel_residual(cfg, p1); }));
    checks.push_back(run_check("memory_kernel_cavity2", 1e-6, [&] { return memory_kernel_residual(cfg, p2); }));

    for (int which : {1, 2}) {
        const CavityParams& p = which == 1 ? p1 : p2;
        const std::string name = "mode_oracle_cavity" + std::to_string(which);
        if (!(p.lambda > 0.0)) {
            checks.push_back(skipped(name, 1e-3, "lambda = 0: no continuum to discretize"));
            checks.push_back(skipped(name + "_norm", 1e-8, "lambda = 0: no continuum to discretize"));
            continue;
        }
        if (which == 2 && p2.omega == p1.omega && p2.lambda == p1.lambda && p2.delta == p1.delta) {
            for (std::size_t k = checks.size() - 2, end = checks.size(); k < end; ++k) {
                Check copy = checks[k];
                copy.name.replace(copy.name.find("cavity1"), 7, "cavity2");
                copy.detail = "same parameters as cavity1";
                checks.push_back(copy);
            }
            continue;
        }
        std::optional<oracle::ModeSolution> sol;
        const oracle::TimeGrid grid{3.0 / p.lambda, 31};
        checks.push_back(run_check(name, 1e-3, [&] {
            sol = oracle::discretized_modes_solve(p, mode_discretization(cfg, p), grid);
            std::vector<complex> exact;
            for (double t : grid.times()) {
                exact.push_back(amplitude(p, t).e);
            }
            return sup_distance(sol->excited, exact);
        }));
        if (!sol) {
            checks.push_back(skipped(name + "_norm", 1e-8, "mode oracle did not run"));
            continue;
        }
        checks.push_back(run_check(name + "_norm", 1e-8, [&] {
            double worst = 0.0;
            for (double n : sol->norm) {
                worst = std::max(worst, std::abs(n - 1.0));
            }
            return worst;
        }));
    }

    checks.push_back(run_check("amplitude_norm", 1e-12, [&] {
        double worst = 0.0;
        for (double t : samples.times()) {
            for (const CavityParams* p : {&p1, &p2}) {
                const AmplitudePair a = amplitude(*p, t);
                worst = std::max(worst, std::abs(std::norm(a.e) + a.f_mag * a.f_mag - 1.0));
            }
        }
        return worst;
    }));

    checks.push_back(run_check("branch_invariance", 1e-10, [&] {
        double worst = 0.0;
        for (double t : samples.times()) {
            for (const CavityParams* p : {&p1, &p2}) {
                const complex a = p->damping();
                const complex w = p->root();
                worst = std::max(worst, std::abs(detail::amplitude_from_root(a, w, t) -
                                                 detail::amplitude_from_root(a, -w, t)));
            }
        }
        return worst;
    }));

    if (p1.lambda > 0.0) {
        checks.push_back(run_check("markov_limit_ordering", 1.0, [&] { return markov_ordering(p1); }));
    } else {
        checks.push_back(skipped("markov_limit_ordering", 1.0, "lambda = 0: Markovian rate undefined"));
    }
    checks.push_back(run_check("jc_limit_ordering", 1.0, [&] { return jc_ordering(p1); }));

    checks.push_back(run_check("wootters_closed_form", 1e-10, [&] {
        double worst = 0.0;
        for (double t : samples.times()) {
            const AmplitudePair a1 = amplitude(p1, t);
            const AmplitudePair a2 = amplitude(p2, t);
            const JointState psi = compose_state(init, a1, a2);
            const double pairs[4][2] = {
                {wootters(reduce(psi, Subsystem::A1, Subsystem::A2)), concurrence_qubits(init.s, a1, a2)},
                {wootters(reduce(psi, Subsystem::R1, Subsystem::R2)), concurrence_reservoirs(init.s, a1, a2)},
                {wootters(reduce(psi, Subsystem::A1, Subsystem::R1)), concurrence_qubit_own_reservoir(init.s, a1)},
                {wootters(reduce(psi, Subsystem::A2, Subsystem::R2)), concurrence_qubit_own_reservoir(init.s, a2)},
            };
            for (const auto& pr : pairs) {
                worst = std::max(worst, std::abs(pr[0] - pr[1]));
            }
        }
        return worst;
    }));

    std::vector<EntanglementSnapshot> snaps;
    const std::vector<double> times = samples.times();
    checks.push_back(run_check("tangle_invariant", 1e-10, [&] {
        snaps = kernels::snapshot_grid(init, p1, p2, times);
        double worst = 0.0;
        for (const auto& s : snaps) {
            worst = std::max(worst, std::abs(s.tangle_bilocal - tau));
        }
        return worst;
    }));
    checks.push_back(run_check("concurrence_inequality", 1e-10, [&] {
        double worst = 0.0;
        for (const auto& s : snaps) {
            worst = std::max({worst, s.squared_sum() - tau, -s.squared_sum()});
        }
        return std::max(worst, 0.0);
    }));
    checks.push_back(run_check("state_norm", 1e-12, [&] {
        double worst = 0.0;
        for (double t : times) {
            worst = std::max(worst, std::abs(evolve_state(init, p1, p2, t).norm_squared() - 1.0));
        }
        return worst;
    }));
    return checks;
}

// ---- sweep -----------------------------------------------------------------------------

struct SweepRow {
    std::vector<double> values;
    double horizon{0.0};
    EventReport report;
};

std::vector<std::size_t> sweep_shape(const RunConfig& cfg) {
    std::vector<std::size_t> shape;
    std::size_t total = 1;
    for (const auto& axis : cfg.sweep) {
        shape.push_back(axis.count);
        if (axis.count > kMaxSweepPoints / total) {
            throw ConfigError("sweep.axes: more than " + std::to_string(kMaxSweepPoints) + " points");
        }
        total *= axis.count;
    }
    return shape;
}

std::string csv_optional(std::optional<double> v) {
    return v ? format::number(*v) : std::string();
}

// ---- output ----------------------------------------------------------------------------

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

} // namespace

RunOutput run_dynamics(const RunConfig& cfg) {
    cfg.check();
    const std::vector<double> times = cfg.grid.times();
    const std::vector<EntanglementSnapshot> snaps =
        kernels::snapshot_grid(cfg.initial, cfg.cavity1, cfg.cavity2, times);

    RunOutput out;
    if (cfg.effective_format() == Format::csv) {
        std::string text = std::string(kDynamicsHeader) + "\n";
        for (const auto& s : snaps) {
            for (double v : {s.t, s.c_12, s.c_r1r2, s.c_1r1, s.c_2r2, s.c_1r2, s.c_2r1, s.tangle_bilocal, s.abs_e1}) {
                text += format::number(v);
                text += ',';
            }
            text += format::number(s.abs_e2);
            text += '\n';
        }
        out.document = std::move(text);
    } else {
        json doc = header(cfg);
        json rows = json::array();
        for (const auto& s : snaps) {
            rows.push_back({{"t", round12(s.t)},
                            {"t_abs", round12(s.t / cfg.reference_rate)},
                            {"c12", round12(s.c_12)},
                            {"cr1r2", round12(s.c_r1r2)},
                            {"c1r1", round12(s.c_1r1)},
                            {"c2r2", round12(s.c_2r2)},
                            {"c1r2", round12(s.c_1r2)},
                            {"c2r1", round12(s.c_2r1)},
                            {"tangle", round12(s.tangle_bilocal)},
                            {"abs_e1", round12(s.abs_e1)},
                            {"abs_e2", round12(s.abs_e2)}});
        }
        doc["rows"] = std::move(rows);
        out.document = format::json_text(doc);
    }
    if (cfg.dump_state) {
        out.state_dump = state_text(evolve_state(cfg.initial, cfg.cavity1, cfg.cavity2, times.back()));
    }
    return out;
}

RunOutput run_events(const RunConfig& cfg) {
    cfg.check();
    const double horizon = event_horizon(cfg);
    const EventReport r = analyze_events(cfg.initial, cfg.cavity1, cfg.cavity2, horizon, cfg.events.scan_step);
    const TimeScales ts{cfg.reference_rate, cfg.cavity1.lambda};

    json intervals = json::array();
    for (const auto& iv : r.dark_intervals) {
        intervals.push_back({{"start", round12(iv.start)},
                             {"end", round12(iv.end)},
                             {"start_abs", round12(iv.start / cfg.reference_rate)},
                             {"end_abs", round12(iv.end / cfg.reference_rate)},
                             {"open_at_horizon", iv.open_at_horizon}});
    }
    json doc = header(cfg);
    doc["horizon"] = round12(horizon);
    doc["horizon_abs"] = ts.abs(std::optional<double>(horizon));
    doc["horizon_lambda1"] = ts.lam(std::optional<double>(horizon));
    doc["regime"] = to_string(r.regime);
    doc["esd_possible"] = r.esd_possible;
    doc["esd_times"] = ts.rel(r.esd_times);
    doc["esd_times_abs"] = ts.abs(r.esd_times);
    doc["esd_times_lambda1"] = ts.lam(r.esd_times);
    doc["revival_times"] = ts.rel(r.revival_times);
    doc["revival_times_abs"] = ts.abs(r.revival_times);
    doc["revival_times_lambda1"] = ts.lam(r.revival_times);
    doc["dark_intervals"] = std::move(intervals);
    doc["esb_time"] = format::rounded(r.esb_time);
    doc["esb_time_abs"] = ts.abs(r.esb_time);
    doc["esb_time_lambda1"] = ts.lam(r.esb_time);

    RunOutput out;
    out.document = render(cfg, doc);
    return out;
}

RunOutput run_protocol(const RunConfig& cfg) {
    cfg.check();
    const bool swapped = cfg.protocol.swapped;
    const CavityParams& decaying = swapped ? cfg.cavity2 : cfg.cavity1;
    const CavityParams& tuned = swapped ? cfg.cavity1 : cfg.cavity2;

    ProtocolRequest request;
    request.init = cfg.initial;
    request.decaying = decaying;
    request.tuned_lambda = tuned.lambda;
    request.tuned_delta = tuned.delta;
    request.f_threshold = cfg.protocol.f_threshold;
    request.t_bar = cfg.protocol.t_bar;
    request.target_e = cfg.protocol.target_e;

    const ProtocolDesign d = swapped ? swapped_design(request) : design_protocol(request);

    json bell = json::array();
    for (const auto& b : d.bell_outcomes) {
        bell.push_back({{"measurement", bell_label(b.which, d.roles)},
                        {"probability", round12(b.probability)},
                        {"fidelity", round12(b.fidelity)}});
    }
    json doc = header(cfg);
    doc["roles"] = swapped ? "swapped" : "direct";
    doc["decaying_atom"] = d.roles.decaying_index();
    doc["tuned_atom"] = d.roles.decaying_index() == 1 ? 2 : 1;
    doc["thresholds"] = {
        {"f_threshold", cfg.protocol.f_threshold},
        {"t_bar_source", cfg.protocol.t_bar ? "config" : "search"},
        {"t_bar_criterion", "abs_f >= f_threshold on [t_bar, 2 t_bar]"},
        {"target_e", round12(cfg.protocol.target_e)},
        {"coupling_bracket_lambda", 10.0},
        {"ground_probability_floor", 0.5},
    };
    doc["t_bar"] = round12(d.t_bar);
    doc["t_bar_abs"] = round12(d.t_bar / cfg.reference_rate);
    doc["t_bar_lambda_decaying"] = round12(d.t_bar * decaying.lambda);
    doc["tuned_omega"] = round12(d.omega2);
    doc["tuned_omega_over_lambda"] = tuned.lambda > 0.0 ? json(round12(d.omega2 / tuned.lambda)) : json(nullptr);
    doc["decaying_abs_f"] = round12(d.f1_at_tbar);
    doc["decaying_abs_e"] = round12(std::abs(d.e1_at_tbar));
    doc["tuned_abs_e"] = round12(std::abs(d.e2_at_tbar));
    doc["w_fidelity"] = round12(d.w.fidelity);
    doc["w_fidelity_conditional"] = round12(d.w.conditional);
    doc["w_fidelity_phase_corrected"] = round12(d.w.phase_corrected);
    doc["decaying_ground_probability"] = round12(d.w.decaying_ground_probability);
    doc["bell"] = std::move(bell);
    doc["warnings"] = d.warnings;

    RunOutput out;
    out.document = render(cfg, doc);
    if (cfg.dump_state) {
        out.state_dump = state_text(design_state(request, d));
    }
    return out;
}

RunOutput run_sweep(const RunConfig& cfg) {
    cfg.check();
    const std::vector<std::size_t> shape = sweep_shape(cfg);
    std::size_t total = 1;
    for (std::size_t n : shape) {
        total *= n;
    }

    std::vector<SweepRow> rows(total);
    kernels::for_each_index(total, [&](std::size_t flat) {
        RunConfig point = cfg;
        SweepRow& row = rows[flat];
        std::size_t rest = flat;
        row.values.resize(shape.size());
        for (std::size_t a = shape.size(); a-- > 0;) {
            row.values[a] = cfg.sweep[a].value(rest % shape[a]);
            rest /= shape[a];
        }
        for (std::size_t a = 0; a < shape.size(); ++a) {
            set_parameter(point, cfg.sweep[a].parameter, row.values[a]);
        }
        row.horizon = event_horizon(point);
        row.report = analyze_events(point.initial, point.cavity1, point.cavity2, row.horizon, point.events.scan_step);
    });

    const auto first = [](const std::vector<double>& v) {
        return v.empty() ? std::optional<double>() : std::optional<double>(v.front());
    };

    RunOutput out;
    if (cfg.effective_format() == Format::csv) {
        std::string text;
        for (const auto& axis : cfg.sweep) {
            text += axis.parameter + ",";
        }
        text += "horizon,regime,esd_possible,esd_count,first_esd,revival_count,dark_count,esb_time\n";
        for (const auto& row : rows) {
            for (double v : row.values) {
                text += format::number(v) + ",";
            }
            const EventReport& r = row.report;
            text += format::number(row.horizon) + "," + std::string(to_string(r.regime)) + "," +
                    (r.esd_possible ? "true" : "false") + "," + std::to_string(r.esd_times.size()) + "," +
                    csv_optional(first(r.esd_times)) + "," + std::to_string(r.revival_times.size()) + "," +
                    std::to_string(r.dark_intervals.size()) + "," + csv_optional(r.esb_time) + "\n";
        }
        out.document = std::move(text);
    } else {
        json axes = json::array();
        for (const auto& axis : cfg.sweep) {
            axes.push_back({{"parameter", axis.parameter}, {"min", axis.min}, {"max", axis.max}, {"count", axis.count}});
        }
        json items = json::array();
        for (const auto& row : rows) {
            json params = json::object();
            for (std::size_t a = 0; a < row.values.size(); ++a) {
                params[cfg.sweep[a].parameter] = round12(row.values[a]);
            }
            const EventReport& r = row.report;
            items.push_back({{"parameters", params},
                             {"horizon", round12(row.horizon)},
                             {"regime", to_string(r.regime)},
                             {"esd_possible", r.esd_possible},
                             {"esd_count", r.esd_times.size()},
                             {"first_esd", format::rounded(first(r.esd_times))},
                             {"revival_count", r.revival_times.size()},
                             {"dark_count", r.dark_intervals.size()},
                             {"esb_time", format::rounded(r.esb_time)}});
        }
        json doc = header(cfg);
        doc["axes"] = std::move(axes);
        doc["rows"] = std::move(items);
        out.document = format::json_text(doc);
    }
    return out;
}

RunOutput run_validate(const RunConfig& cfg) {
    cfg.check();
    const std::vector<Check> checks = validation_checks(cfg);
    bool passed = true;
    json items = json::array();
    for (const auto& c : checks) {
        passed = passed && (c.status == "pass" || c.status == "skipped");
        json item = {{"name", c.name},
                     {"status", c.status},
                     {"residual", std::isfinite(c.residual) ? json(round12(c.residual)) : json(nullptr)},
                     {"tolerance", c.tolerance}};
        if (!c.detail.empty()) {
            item["detail"] = c.detail;
        }
        items.push_back(std::move(item));
    }
    json doc = header(cfg);
    doc["passed"] = passed;
    doc["checks"] = std::move(items);

    RunOutput out;
    out.document = render(cfg, doc);
    out.validation_failed = !passed;
    return out;
}

RunOutput execute(const RunConfig& cfg) {
    switch (cfg.mode) {
        case Mode::dynamics: return run_dynamics(cfg);
        case Mode::events: return run_events(cfg);
        case Mode::protocol: return run_protocol(cfg);
        case Mode::sweep: return run_sweep(cfg);
        case Mode::validate: return run_validate(cfg);
    }
    throw ConfigError("mode: unknown");
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App cli{"Two atoms in independent lossy cavities: entanglement dynamics, events and W/Bell protocols"};
    cli.name("cavityent_cli");

    std::string config_path;
    std::string out_path;
    std::string format_name;
    int jobs = 0;
    bool dump_state = false;
    cli.add_option("--config", config_path, "JSON run configuration");
    cli.add_option("--out", out_path, "output file (default: stdout)");
    cli.add_option("--format", format_name, "output format")->check(CLI::IsMember({"csv", "json"}));
    cli.add_option("--jobs", jobs, "worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    cli.add_flag("--dump-state", dump_state, "also write the 16 joint-state amplitudes");

    std::map<std::string, std::string> overrides;
    for (const auto& path : override_paths()) {
        cli.add_option("--" + path, overrides[path], "override " + path)->group("Config overrides");
    }

    const std::pair<Mode, const char*> described[] = {
        {Mode::dynamics, "entanglement measures on the time grid"},
        {Mode::events, "sudden death and birth times with the regime label"},
        {Mode::protocol, "W-state design and Bell extraction"},
        {Mode::sweep, "event summary over a parameter grid"},
        {Mode::validate, "compare the closed forms against the oracles and invariants"},
    };
    std::map<std::string, Mode> commands;
    for (const auto& [m, what] : described) {
        const std::string name(to_string(m));
        cli.add_subcommand(name, what)->fallthrough();
        commands[name] = m;
    }
    cli.require_subcommand(1, 1);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const Mode mode = commands.at(cli.get_subcommands().front()->get_name());
        json doc = config_path.empty() ? json::object() : load_config_file(config_path);
        for (const auto& path : override_paths()) {
            if (cli.get_option("--" + path)->count() > 0) {
                apply_override(doc, path, overrides[path]);
            }
        }
        RunConfig cfg = parse_config(doc, mode);
        if (!out_path.empty()) {
            cfg.out_path = out_path;
        }
        if (!format_name.empty()) {
            cfg.format = format_name == "csv" ? Format::csv : Format::json;
        }
        cfg.jobs = jobs;
        cfg.dump_state = dump_state;
        cfg.check();
        kernels::set_threads(cfg.jobs);

        const RunOutput result = execute(cfg);
        if (cfg.out_path.empty()) {
            out << result.document;
        } else {
            write_file(cfg.out_path, result.document);
        }
        if (result.state_dump) {
            if (cfg.out_path.empty()) {
                out << *result.state_dump;
            } else {
                write_file(cfg.out_path + ".state", *result.state_dump);
            }
        } else if (cfg.dump_state) {
            err << "note: --dump-state applies to dynamics and protocol only\n";
        }
        if (!out) {
            throw IoError("failed writing to standard output");
        }
        if (result.validation_failed) {
            err << "validation failed\n";
            return kExitValidation;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UnsupportedRegimeError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cavityent::app
