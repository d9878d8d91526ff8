// app.hpp: configuration and commands behind the cavityent_cli executable
//
// A run is described by one JSON document.  Rates in it are dimensionless ratios against a
// reference rate (`unit` = omega1 or lambda1, absolute value `reference_rate`), and times are
// in units of 1 / reference.  Command-line flags named after field paths (`--cavity1.omega`)
// override the document.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cavityent/amplitudes.hpp"
#include "cavityent/errors.hpp"
#include "cavityent/oracle.hpp"
#include "cavityent/quantum_state.hpp"

namespace cavityent::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitValidation = 4,
    kExitIo = 5,
};

// Invalid configuration; the message starts with the offending field path.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

enum class Mode { dynamics, events, protocol, sweep, validate };
enum class Format { csv, json };
enum class Unit { omega1, lambda1 };

std::string_view to_string(Mode m);
std::string_view to_string(Format f);
std::string_view to_string(Unit u);

struct SweepAxis {
    std::string parameter;  // numeric field path, `both.<field>` or `opposite.delta`
    double min{0.0};
    double max{0.0};
    std::size_t count{2};
    double value(std::size_t i) const;
};

struct EventSettings {
    std::optional<double> horizon;  // default_horizon when absent
    double scan_step{0.0};          // 0 selects the default step
};

struct ProtocolSettings {
    double f_threshold{0.99};
    std::optional<double> t_bar;  // skip the t_bar search when set
    double target_e{0.70710678118654752440};
    bool swapped{false};
};

struct ValidateSettings {
    std::optional<double> t_max;               // oracle window; 10 / lambda1 by default
    std::optional<std::size_t> oracle_steps;   // memory-kernel grid points; resolved from the rates by default
    std::optional<std::size_t> n_modes;        // chosen from cutoff by default
    std::optional<double> cutoff;              // max(50, 20 R / lambda) by default
    std::size_t samples{101};                  // snapshot times for the invariant checks
};

struct RunConfig {
    Mode mode{Mode::dynamics};
    Unit unit{Unit::omega1};
    double reference_rate{1.0};
    InitialState initial{0.2, 0.0};
    CavityParams cavity1{1.0, 0.1, 0.5};
    CavityParams cavity2{1.0, 0.1, 0.5};
    oracle::TimeGrid grid{40.0, 401};
    EventSettings events;
    ProtocolSettings protocol;
    std::vector<SweepAxis> sweep;
    ValidateSettings validate;
    std::string out_path;  // empty writes to stdout
    std::optional<Format> format;  // csv for tables, json for reports when unset
    int jobs{0};           // 0 keeps the OpenMP default
    bool dump_state{false};

    // ConfigError naming the offending field.
    void check() const;
    Format effective_format() const;
};

// Leaf paths accepted as override flags, in registration order.
const std::vector<std::string>& override_paths();

// Writes `value` (parsed as JSON when possible, else kept as a string) at a dotted path.
void apply_override(nlohmann::json& doc, const std::string& path, const std::string& value);

RunConfig parse_config(const nlohmann::json& doc, Mode mode);
nlohmann::json load_config_file(const std::string& path);

// Sets a sweepable numeric field.
void set_parameter(RunConfig& cfg, const std::string& path, double value);

struct RunOutput {
    std::string document;
    std::optional<std::string> state_dump;
    bool validation_failed{false};
};

RunOutput run_dynamics(const RunConfig& cfg);
RunOutput run_events(const RunConfig& cfg);
RunOutput run_protocol(const RunConfig& cfg);
RunOutput run_sweep(const RunConfig& cfg);
RunOutput run_validate(const RunConfig& cfg);
RunOutput execute(const RunConfig& cfg);

// Full command line handling; returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

namespace format {

// printf %.12g with negative zero printed as 0.
std::string number(double v);
// v rounded to 12 significant digits, for JSON output.
double round12(double v);
nlohmann::json rounded(std::optional<double> v);
// JSON document text with a trailing newline.
std::string json_text(const nlohmann::json& doc);
// "key,value" lines of a flattened document; nested keys are joined with '.', arrays with ';'.
std::string flat_csv(const nlohmann::json& doc);

} // namespace format

} // namespace cavityent::app
