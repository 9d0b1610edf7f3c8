#pragma once

#include "blockade/hilbert.hpp"

namespace blockade {

/// Tolerances applied by DensityMatrix::from_matrix.
struct StateTolerance {
    double hermiticity = 1e-10;
    double trace = 1e-10;
    double min_eigenvalue = -1e-8;
};

struct StateDiagnostics {
    double hermiticity_error = 0.0; ///< max |ρ − ρ†| entrywise
    double trace_error = 0.0;       ///< |tr ρ − 1|
    double min_eigenvalue = 0.0;    ///< of the Hermitian part
};

StateDiagnostics diagnose(const DenseMatrix& rho);

/// Hermitian, unit-trace, positive-semidefinite state.
class DensityMatrix {
public:
    /// Validates the invariants; throws numerical_failure with diagnostics otherwise.
    static DensityMatrix from_matrix(DenseMatrix rho, const StateTolerance& tol = {});
    /// |ψ><ψ| for a ket normalized internally.
    static DensityMatrix pure(const DenseVector& ket);
    /// Basis projector |k><k|.
    static DensityMatrix projector(int dim, int index);

    int dim() const { return static_cast<int>(rho_.rows()); }
    const DenseMatrix& matrix() const { return rho_; }

private:
    explicit DensityMatrix(DenseMatrix rho) : rho_(std::move(rho)) {}
    DenseMatrix rho_;
};

inline Complex expectation(const Operator& a, const DensityMatrix& rho)
{
    return expectation(a, rho.matrix());
}

/// Truncated coherent state |α> on the cavity with both qubits in |g>, renormalized.
DensityMatrix coherent_state(const HilbertSpace& space, Complex alpha);

} // namespace blockade
