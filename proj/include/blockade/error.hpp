#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blockade {

enum class ErrorCode {
    invalid_cutoff,
    invalid_index,
    dimension_mismatch,
    invalid_parameter,
    singular_geometry,
    no_solution,
    degenerate_steady_state,
    ambiguous_steady_state,
    numerical_failure,
    stiffness,
    no_convergence,
    undefined_correlation,
    scan_window,
    config_error,
    io_error,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Non-fatal diagnostics (weak cutoffs, drive outside the perturbative window).
// The default handler writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

} // namespace blockade
