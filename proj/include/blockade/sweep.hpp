#pragma once

#include "blockade/model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blockade {

enum class Spacing { linear, log };
enum class Observable { g2_zero, mean_n, p_n };
enum class OutputFormat { csv, json };

std::string_view to_string(Observable o);
std::string_view to_string(Spacing s);

struct AxisSpec {
    std::string param;
    double start = 0.0;
    double stop = 0.0;
    int count = 2;
    Spacing spacing = Spacing::linear;

    /// Grid coordinates; a single-point axis requires start == stop.
    std::vector<double> values() const;
};

/// target = scale * source + offset
struct DerivedRule {
    std::string target;
    std::string source;
    double scale = 1.0;
    double offset = 0.0;
};

/// Parses `target = expr` with an affine expr such as "-2*delta_a", "3.5 * g", "delta_a + 1".
DerivedRule parse_derived_rule(std::string_view text);

struct SweepConfig {
    SystemParams base;
    std::vector<AxisSpec> axes;
    std::vector<DerivedRule> derived;
    std::vector<Observable> observables{Observable::g2_zero, Observable::mean_n};
    double steady_state_tol = 1e-10;
    double truncation_tol = 1e-8;
    std::optional<int> n_max = 6; ///< nullopt selects auto_truncate per point
    int nmax_ceiling = 30;
    int workers = 1;

    /// Throws config_error on any rule violation.
    void validate() const;
    /// Derived rules in dependency order (throws config_error on cycles).
    std::vector<DerivedRule> ordered_rules() const;
    /// Base parameters with axis coordinates and derived rules applied.
    SystemParams resolve(const std::vector<double>& coords) const;
    std::size_t point_count() const;
};

/// Flat `key = value` lines, `#` comments, `[axis]` blocks and
/// `derive: target = expr` rules. Throws config_error.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::string& path);

/// Applies one `key=value` override; axis keys are addressed as axisN.key.
void apply_override(SweepConfig& config, std::string_view assignment);

struct SweepRow {
    std::vector<double> coords;
    std::vector<double> derived_values;
    std::optional<double> g2_zero;
    std::optional<double> mean_n;
    std::vector<double> p_n;
    std::optional<double> residual;
    int n_max = 0;
    std::string error; ///< empty on success
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRow> rows; ///< row-major over the axes, last axis fastest

    std::size_t failures() const;
    std::vector<std::string> header() const;
};

/// Evaluates every grid point with config.workers threads; output order and
/// values do not depend on the worker count.
SweepResult run_sweep(const SweepConfig& config);

/// Evaluates one parameter set as a sweep row (shared by sweeps and the CLI point command).
SweepRow evaluate_point(const SweepConfig& config, const SystemParams& params);

std::string to_csv(const SweepResult& result);
std::string to_json(const SweepResult& result, std::string_view timestamp);
std::string config_to_json(const SweepConfig& config);

/// Writes the result; throws io_error when the path is unwritable.
void emit(const SweepResult& result, OutputFormat format, const std::string& path);
void emit(const SweepResult& result, OutputFormat format, std::ostream& out);

/// %.17g, the shortest fixed-width form that round-trips any double.
std::string format_number(double value);

inline constexpr std::string_view kVersion = "1.0.0";

} // namespace blockade
