#include "blockade/error.hpp"

#include <iostream>
#include <mutex>

namespace blockade {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::invalid_cutoff: return "invalid-cutoff";
    case ErrorCode::invalid_index: return "invalid-index";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::singular_geometry: return "singular-geometry";
    case ErrorCode::no_solution: return "no-solution";
    case ErrorCode::degenerate_steady_state: return "degenerate-steady-state";
    case ErrorCode::ambiguous_steady_state: return "ambiguous-steady-state";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::stiffness: return "stiffness";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::undefined_correlation: return "undefined-correlation";
    case ErrorCode::scan_window: return "scan-window";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

namespace {
std::mutex g_warning_mutex;
WarningHandler g_warning_handler;
}

void set_warning_handler(WarningHandler handler)
{
    std::lock_guard lock(g_warning_mutex);
    g_warning_handler = std::move(handler);
}

void warn(std::string_view message)
{
    std::lock_guard lock(g_warning_mutex);
    if (g_warning_handler) {
        g_warning_handler(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

} // namespace blockade
