#include "blockade/density_matrix.hpp"

#include "blockade/error.hpp"

#include <cmath>
#include <sstream>

namespace blockade {

StateDiagnostics diagnose(const DenseMatrix& rho)
{
    StateDiagnostics d;
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
    const DenseMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = eig.eigenvalues().minCoeff();
    return d;
}

DensityMatrix DensityMatrix::from_matrix(DenseMatrix rho, const StateTolerance& tol)
{
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw Error(ErrorCode::dimension_mismatch, "density matrix must be square and non-empty");
    }
    const StateDiagnostics d = diagnose(rho);
    if (d.hermiticity_error > tol.hermiticity || d.trace_error > tol.trace ||
        d.min_eigenvalue < tol.min_eigenvalue || !std::isfinite(d.min_eigenvalue)) {
        std::ostringstream msg;
        msg << "density matrix invariants violated: hermiticity error " << d.hermiticity_error
            << ", trace error " << d.trace_error << ", min eigenvalue " << d.min_eigenvalue;
        throw Error(ErrorCode::numerical_failure, msg.str());
    }
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::pure(const DenseVector& ket)
{
    const double norm = ket.norm();
    if (norm == 0.0) {
        throw Error(ErrorCode::invalid_parameter, "zero ket has no density matrix");
    }
    const DenseVector psi = ket / norm;
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::projector(int dim, int index)
{
    if (index < 0 || index >= dim) {
        throw Error(ErrorCode::invalid_index, "projector index out of range");
    }
    DenseMatrix rho = DenseMatrix::Zero(dim, dim);
    rho(index, index) = 1.0;
    return DensityMatrix(std::move(rho));
}

DensityMatrix coherent_state(const HilbertSpace& space, Complex alpha)
{
    DenseVector ket = DenseVector::Zero(space.dim());
    Complex amp = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n <= space.n_max(); ++n) {
        if (n > 0) {
            amp *= alpha / std::sqrt(static_cast<double>(n));
        }
        ket(space.index(0, 0, n)) = amp;
    }
    return DensityMatrix::pure(ket);
}

} // namespace blockade
