#pragma once

#include "gravoptics/errors.hpp"
#include "gravoptics/quadrature.hpp"
#include "gravoptics/result_table.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gravoptics
{

enum class ScenarioKind
{
    PhaseShift,
    MachZehnder,
    HongOuMandel,
    TimeOfArrival,
    InternalDof,
    TunnelingSpread,
    PolarizationRotation,
};

struct ScenarioInfo
{
    ScenarioKind kind;
    const char* name;
    const char* summary;
};

const std::vector<ScenarioInfo>& scenario_catalog();
std::string_view scenario_name(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

/// Replaces the quantity at a JSON pointer with each of `steps` evenly spaced
/// values in [start, stop] (a single step uses start).
struct SweepSpec
{
    std::string parameter;
    std::string unit;
    double start = 0.0;
    double stop = 0.0;
    int steps = 1;

    std::vector<double> values() const;
};

/// A validated configuration. `document` is the parsed JSON as supplied; it is
/// the single source of truth, so serializing it and validating again yields
/// an identical config.
struct ScenarioConfig
{
    ScenarioKind kind;
    std::string name;
    nlohmann::json document;
    std::optional<SweepSpec> sweep;
    QuadratureSpec quadrature;
    std::string format = "csv";

    /// Key-sorted compact dump used for hashing.
    std::string canonical() const { return document.dump(); }
    std::string hash() const { return fnv1a_hex(canonical()); }
};

struct Diagnostic
{
    std::string path; ///< JSON pointer of the offending field
    std::string message;
};

struct ValidationReport
{
    std::optional<ScenarioConfig> config;
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;

    bool ok() const { return errors.empty() && config.has_value(); }
};

/// Structural and physical validation: JSON shape, units, on-shell particles,
/// path validity, and a weak-field pre-flight at path sample points (reported
/// as warnings with their location).
ValidationReport validate_config(std::string_view text);
ValidationReport validate_document(const nlohmann::json& document);

/// Invalid configuration handed to run_scenario.
class ConfigError : public Error
{
public:
    explicit ConfigError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Computation failure, with the scenario and sweep point in the message.
class ScenarioError : public Error
{
public:
    using Error::Error;
};

struct RunOptions
{
    int workers = 1;
    std::optional<double> rel_tol;
};

/// Runs the scenario and returns its table. SI inputs are converted to
/// geometric units on the way in; outputs carry geometric columns and SI or eV
/// columns where useful. Sweep points run on up to `workers` threads and are
/// assembled in sweep order.
ResultTable run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Distance from Earth's centre to the start of the default composite-particle
/// path: Earth's mean radius plus 1e8 m. The path then runs 1e7 m toward the Moon.
inline constexpr double kEarthRadius = 6.371e6;
inline constexpr double kDefaultCompositeAltitude = 1e8;
inline constexpr double kDefaultCompositeLength = 1e7;

} // namespace gravoptics
