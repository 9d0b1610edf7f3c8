#pragma once

#include "blockade/density_matrix.hpp"
#include "blockade/liouvillian.hpp"
#include "blockade/model.hpp"

#include <optional>
#include <string_view>

namespace blockade {

enum class SolveMethod { sparse_direct, dense_null_space, time_evolution };

std::string_view to_string(SolveMethod method);

struct SteadyStateResult {
    DensityMatrix rho;
    double residual = 0.0; ///< Frobenius norm of L(ρ)
    /// P(n_max); absent when the dimension is not 4·(n_max + 1).
    std::optional<double> top_fock_population;
    SolveMethod method = SolveMethod::sparse_direct;
};

inline constexpr double kDefaultSteadyStateTol = 1e-10;

/// Solves L(ρ) = 0 with tr ρ = 1 by replacing the first row of the generator
/// with the trace functional and factorizing with sparse LU.
///
/// Throws degenerate_steady_state when the factorization fails or the
/// estimated 1-norm condition number exceeds 1e12, and numerical_failure
/// when the solution misses the state invariants or the residual tolerance.
SteadyStateResult steady_state(const Liouvillian& liouvillian, double tol = kDefaultSteadyStateTol);

/// Kernel of the dense generator from its smallest right singular vector.
/// Test oracle; requires D² <= 1e4. Throws ambiguous_steady_state unless the
/// numerical kernel is one-dimensional.
SteadyStateResult steady_state_dense_oracle(const Liouvillian& liouvillian);

/// 1-norm condition estimate (Hager/Higham) of the trace-augmented generator.
double steady_state_condition_estimate(const Liouvillian& liouvillian);

struct EvolveOptions {
    double rtol = 1e-10;
    /// Absolute floor of the per-entry error scale, as a multiple of rtol.
    double atol_factor = 1e-12;
    /// Per-step error target as a fraction of rtol, leaving room for accumulation.
    double step_fraction = 1e-2;
    double initial_step = 1e-3;
};

/// Integrates dρ/dt = L(ρ) from t = 0 to t_final with Dormand-Prince 5(4).
/// Throws stiffness when the accepted step falls below 1e-12·t_final.
DensityMatrix evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t_final,
                     double rtol = 1e-10);
DensityMatrix evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t_final,
                     const EvolveOptions& options);

struct TruncationOptions {
    int min_cutoff = 3;
    int step = 2;
    int ceiling = 30;
    double steady_state_tol = kDefaultSteadyStateTol;
};

/// Smallest n_max >= 3 for which raising the cutoff by 2 changes g2(0) and
/// ⟨a†a⟩ by less than tol (relative) and P(n_max) < tol.
/// Throws no_convergence when the search passes the ceiling.
int auto_truncate(const SystemParams& params, double tol = 1e-8, const TruncationOptions& options = {});

/// Builds the standard Liouvillian at this cutoff and solves for its steady state.
SteadyStateResult solve_steady_state(const SystemParams& params, int n_max,
                                     double tol = kDefaultSteadyStateTol);

} // namespace blockade
