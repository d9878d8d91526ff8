#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cavityent/app.hpp"

namespace cavityent::app {

using nlohmann::json;

namespace {

const std::vector<std::string> kSweepable = {
    "initial.s",     "initial.phi",  "cavity1.omega", "cavity1.lambda", "cavity1.delta", "cavity2.omega",
    "cavity2.lambda", "cavity2.delta", "both.omega",   "both.lambda",    "both.delta",    "opposite.delta",
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void check_object(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        fail(path.empty() ? "<root>" : path, "expected an object");
    }
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            fail(join(path, item.key()), "unknown field");
        }
    }
}

void read_number(const json& obj, const std::string& prefix, const char* key, double& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return;
    }
    if (!it->is_number()) {
        fail(join(prefix, key), "expected a number");
    }
    out = it->get<double>();
}

void read_number(const json& obj, const std::string& prefix, const char* key, std::optional<double>& out) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return;
    }
    double v = 0.0;
    read_number(obj, prefix, key, v);
    out = v;
}

void read_count(const json& obj, const std::string& prefix, const char* key, std::size_t& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return;
    }
    if (!it->is_number_integer() || it->get<long long>() < 0) {
        fail(join(prefix, key), "expected a non-negative integer");
    }
    out = it->get<std::size_t>();
}

void read_count(const json& obj, const std::string& prefix, const char* key, std::optional<std::size_t>& out) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return;
    }
    std::size_t v = 0;
    read_count(obj, prefix, key, v);
    out = v;
}

void read_bool(const json& obj, const std::string& prefix, const char* key, bool& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return;
    }
    if (!it->is_boolean()) {
        fail(join(prefix, key), "expected true or false");
    }
    out = it->get<bool>();
}

std::optional<std::string> read_string(const json& obj, const std::string& prefix, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return std::nullopt;
    }
    if (!it->is_string()) {
        fail(join(prefix, key), "expected a string");
    }
    return it->get<std::string>();
}

void read_cavity(const json& doc, const char* key, CavityParams& cavity) {
    const auto it = doc.find(key);
    if (it == doc.end()) {
        return;
    }
    check_object(*it, key, {"omega", "lambda", "delta"});
    read_number(*it, key, "omega", cavity.omega);
    read_number(*it, key, "lambda", cavity.lambda);
    read_number(*it, key, "delta", cavity.delta);
}

Mode parse_mode(const std::string& s) {
    for (Mode m : {Mode::dynamics, Mode::events, Mode::protocol, Mode::sweep, Mode::validate}) {
        if (to_string(m) == s) {
            return m;
        }
    }
    fail("mode", "unknown mode '" + s + "'");
}

Format parse_format(const std::string& s, const std::string& path) {
    if (s == "csv") {
        return Format::csv;
    }
    if (s == "json") {
        return Format::json;
    }
    fail(path, "expected csv or json, got '" + s + "'");
}

void check_cavity(const CavityParams& c, const std::string& path) {
    if (!std::isfinite(c.omega) || !(c.omega > 0.0)) {
        fail(path + ".omega", "must be a positive number");
    }
    if (!std::isfinite(c.lambda) || c.lambda < 0.0) {
        fail(path + ".lambda", "must be a non-negative number");
    }
    if (!std::isfinite(c.delta)) {
        fail(path + ".delta", "must be finite");
    }
}

std::string reference_field(Unit u) {
    return u == Unit::omega1 ? "cavity1.omega" : "cavity1.lambda";
}

} // namespace

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::dynamics: return "dynamics";
        case Mode::events: return "events";
        case Mode::protocol: return "protocol";
        case Mode::sweep: return "sweep";
        case Mode::validate: return "validate";
    }
    return "?";
}

std::string_view to_string(Format f) {
    return f == Format::csv ? "csv" : "json";
}

std::string_view to_string(Unit u) {
    return u == Unit::omega1 ? "omega1" : "lambda1";
}

double SweepAxis::value(std::size_t i) const {
    if (i + 1 == count) {
        return max;
    }
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

Format RunConfig::effective_format() const {
    if (format) {
        return *format;
    }
    return mode == Mode::dynamics || mode == Mode::sweep ? Format::csv : Format::json;
}

void RunConfig::check() const {
    if (!std::isfinite(reference_rate) || !(reference_rate > 0.0)) {
        fail("reference_rate", "must be a positive number");
    }
    if (!std::isfinite(initial.s) || initial.s < -1.0 || initial.s > 1.0) {
        fail("initial.s", "must lie in [-1, 1]");
    }
    if (!std::isfinite(initial.phi)) {
        fail("initial.phi", "must be finite");
    }
    check_cavity(cavity1, "cavity1");
    check_cavity(cavity2, "cavity2");
    const double ref = unit == Unit::omega1 ? cavity1.omega : cavity1.lambda;
    if (ref != 1.0) {
        fail(reference_field(unit), "must be 1 because rates are ratios to it (unit " + std::string(to_string(unit)) + ")");
    }
    if (!std::isfinite(grid.t_max) || !(grid.t_max > 0.0)) {
        fail("grid.t_max", "must be a positive number");
    }
    if (grid.n_steps < 2) {
        fail("grid.n_steps", "must be at least 2");
    }
    if (events.horizon && (!std::isfinite(*events.horizon) || !(*events.horizon > 0.0))) {
        fail("events.horizon", "must be a positive number");
    }
    if (!std::isfinite(events.scan_step) || events.scan_step < 0.0) {
        fail("events.scan_step", "must be a non-negative number");
    }
    if (!std::isfinite(protocol.f_threshold) || protocol.f_threshold < 0.0 || protocol.f_threshold >= 1.0) {
        fail("protocol.f_threshold", "must lie in [0, 1)");
    }
    if (!std::isfinite(protocol.target_e) || !(protocol.target_e > 0.0) || !(protocol.target_e < 1.0)) {
        fail("protocol.target_e", "must lie in (0, 1)");
    }
    if (protocol.t_bar && (!std::isfinite(*protocol.t_bar) || *protocol.t_bar < 0.0)) {
        fail("protocol.t_bar", "must be a non-negative number");
    }
    if (mode == Mode::sweep && sweep.empty()) {
        fail("sweep.axes", "a sweep needs at least one axis");
    }
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const SweepAxis& axis = sweep[i];
        const std::string path = "sweep.axes[" + std::to_string(i) + "]";
        if (std::find(kSweepable.begin(), kSweepable.end(), axis.parameter) == kSweepable.end()) {
            fail(path + ".parameter", "unknown parameter '" + axis.parameter + "'");
        }
        const std::string field = axis.parameter.substr(axis.parameter.find('.') + 1);
        const std::string ref_field = reference_field(unit);
        if (axis.parameter == ref_field || axis.parameter == "both." + ref_field.substr(ref_field.find('.') + 1)) {
            fail(path + ".parameter", "the reference rate cannot be swept");
        }
        if (axis.count < 2) {
            fail(path + ".count", "must be at least 2");
        }
        if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) {
            fail(path, "min and max must be finite");
        }
    }
    if (validate.n_modes && (*validate.n_modes == 0 || *validate.n_modes % 2 == 0)) {
        fail("validate.n_modes", "must be odd");
    }
    if (validate.cutoff && (!std::isfinite(*validate.cutoff) || *validate.cutoff < 5.0)) {
        fail("validate.cutoff", "must be at least 5");
    }
    if (validate.samples < 2) {
        fail("validate.samples", "must be at least 2");
    }
    if (validate.oracle_steps && *validate.oracle_steps < 2) {
        fail("validate.oracle_steps", "must be at least 2");
    }
    if (validate.t_max && (!std::isfinite(*validate.t_max) || !(*validate.t_max > 0.0))) {
        fail("validate.t_max", "must be a positive number");
    }
    if (jobs < 0) {
        fail("jobs", "must be non-negative");
    }
}

const std::vector<std::string>& override_paths() {
    static const std::vector<std::string> paths = {
        "unit",           "reference_rate",       "initial.s",        "initial.phi",        "cavity1.omega",
        "cavity1.lambda", "cavity1.delta",        "cavity2.omega",    "cavity2.lambda",     "cavity2.delta",
        "grid.t_max",     "grid.n_steps",         "events.horizon",   "events.scan_step",   "protocol.f_threshold",
        "protocol.t_bar", "protocol.target_e",    "protocol.swapped", "validate.t_max",     "validate.oracle_steps",
        "validate.n_modes", "validate.cutoff",    "validate.samples",
    };
    return paths;
}

void apply_override(json& doc, const std::string& path, const std::string& value) {
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (!node->is_object()) {
            *node = json::object();
        }
        node = &(*node)[key];
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }
    *node = json::accept(value) ? json::parse(value) : json(value);
}

RunConfig parse_config(const json& doc, Mode mode) {
    check_object(doc, "", {"mode", "unit", "reference_rate", "initial", "cavity1", "cavity2", "grid", "events",
                           "protocol", "sweep", "validate", "output"});
    RunConfig cfg;
    cfg.mode = mode;
    // the subcommand selects the mode; a document's own mode only has to be a valid name
    if (const auto m = read_string(doc, "", "mode")) {
        parse_mode(*m);
    }
    if (const auto u = read_string(doc, "", "unit")) {
        if (*u == "omega1") {
            cfg.unit = Unit::omega1;
        } else if (*u == "lambda1") {
            cfg.unit = Unit::lambda1;
        } else {
            fail("unit", "expected omega1 or lambda1, got '" + *u + "'");
        }
    }
    read_number(doc, "", "reference_rate", cfg.reference_rate);

    if (const auto it = doc.find("initial"); it != doc.end()) {
        check_object(*it, "initial", {"s", "phi"});
        read_number(*it, "initial", "s", cfg.initial.s);
        read_number(*it, "initial", "phi", cfg.initial.phi);
    }
    read_cavity(doc, "cavity1", cfg.cavity1);
    read_cavity(doc, "cavity2", cfg.cavity2);
    if (const auto it = doc.find("grid"); it != doc.end()) {
        check_object(*it, "grid", {"t_max", "n_steps"});
        read_number(*it, "grid", "t_max", cfg.grid.t_max);
        read_count(*it, "grid", "n_steps", cfg.grid.n_steps);
    }
    if (const auto it = doc.find("events"); it != doc.end()) {
        check_object(*it, "events", {"horizon", "scan_step"});
        read_number(*it, "events", "horizon", cfg.events.horizon);
        read_number(*it, "events", "scan_step", cfg.events.scan_step);
    }
    if (const auto it = doc.find("protocol"); it != doc.end()) {
        check_object(*it, "protocol", {"f_threshold", "t_bar", "target_e", "swapped"});
        read_number(*it, "protocol", "f_threshold", cfg.protocol.f_threshold);
        read_number(*it, "protocol", "t_bar", cfg.protocol.t_bar);
        read_number(*it, "protocol", "target_e", cfg.protocol.target_e);
        read_bool(*it, "protocol", "swapped", cfg.protocol.swapped);
    }
    if (const auto it = doc.find("sweep"); it != doc.end()) {
        check_object(*it, "sweep", {"axes"});
        if (const auto axes = it->find("axes"); axes != it->end()) {
            if (!axes->is_array()) {
                fail("sweep.axes", "expected an array");
            }
            for (std::size_t i = 0; i < axes->size(); ++i) {
                const std::string path = "sweep.axes[" + std::to_string(i) + "]";
                const json& a = (*axes)[i];
                check_object(a, path, {"parameter", "min", "max", "count"});
                SweepAxis axis;
                const auto name = read_string(a, path, "parameter");
                if (!name) {
                    fail(path + ".parameter", "missing");
                }
                axis.parameter = *name;
                read_number(a, path, "min", axis.min);
                read_number(a, path, "max", axis.max);
                read_count(a, path, "count", axis.count);
                cfg.sweep.push_back(axis);
            }
        }
    }
    if (const auto it = doc.find("validate"); it != doc.end()) {
        check_object(*it, "validate", {"t_max", "oracle_steps", "n_modes", "cutoff", "samples"});
        read_number(*it, "validate", "t_max", cfg.validate.t_max);
        read_count(*it, "validate", "oracle_steps", cfg.validate.oracle_steps);
        read_count(*it, "validate", "n_modes", cfg.validate.n_modes);
        read_number(*it, "validate", "cutoff", cfg.validate.cutoff);
        read_count(*it, "validate", "samples", cfg.validate.samples);
    }
    if (const auto it = doc.find("output"); it != doc.end()) {
        check_object(*it, "output", {"path", "format"});
        if (const auto p = read_string(*it, "output", "path")) {
            cfg.out_path = *p;
        }
        if (const auto f = read_string(*it, "output", "format")) {
            cfg.format = parse_format(*f, "output.format");
        }
    }
    cfg.check();
    return cfg;
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return json::parse(text.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

void set_parameter(RunConfig& cfg, const std::string& path, double value) {
    const auto set_field = [&](CavityParams& c, const std::string& field) {
        if (field == "omega") {
            c.omega = value;
        } else if (field == "lambda") {
            c.lambda = value;
        } else if (field == "delta") {
            c.delta = value;
        } else {
            fail(path, "unknown parameter");
        }
    };
    const std::size_t dot = path.find('.');
    const std::string group = path.substr(0, dot);
    const std::string field = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (group == "initial" && field == "s") {
        cfg.initial.s = value;
    } else if (group == "initial" && field == "phi") {
        cfg.initial.phi = value;
    } else if (group == "cavity1") {
        set_field(cfg.cavity1, field);
    } else if (group == "cavity2") {
        set_field(cfg.cavity2, field);
    } else if (group == "both") {
        set_field(cfg.cavity1, field);
        set_field(cfg.cavity2, field);
    } else if (path == "opposite.delta") {
        cfg.cavity1.delta = value;
        cfg.cavity2.delta = -value;
    } else {
        fail(path, "unknown parameter");
    }
}

} // namespace cavityent::app
