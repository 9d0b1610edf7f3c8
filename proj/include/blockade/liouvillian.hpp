#pragma once

#include "blockade/hilbert.hpp"
#include "blockade/model.hpp"

#include <vector>

namespace blockade {

/// Dissipator term rate·(2·AρB† − B†Aρ − ρB†A).
/// A == B gives an ordinary Lindblad channel; A != B houses the cross terms
/// of collective qubit damping.
struct CollapseChannel {
    Operator left;
    Operator right;
    double rate = 0.0;
};

/// Vectorized master-equation generator in column-stacking convention,
/// vec(ρ)[i + D·j] = ρ(i, j), so that vec(AρB) = (Bᵀ ⊗ A)·vec(ρ).
class Liouvillian {
public:
    Liouvillian(int dim, SparseMatrix generator);

    int dim() const { return dim_; }
    const SparseMatrix& generator() const { return generator_; }

private:
    int dim_;
    SparseMatrix generator_;
};

/// Cavity leakage, two independent qubit channels and the two collective
/// cross channels (omitted when γ′ = 0).
std::vector<CollapseChannel> standard_channels(const SystemParams& params, const HilbertSpace& space);

Liouvillian build(const Operator& hamiltonian, const std::vector<CollapseChannel>& channels);

/// hamiltonian(params) with standard_channels(params); validates params.
Liouvillian build(const SystemParams& params, const HilbertSpace& space);

/// dρ/dt for the given ρ.
DenseMatrix apply(const Liouvillian& liouvillian, const DenseMatrix& rho);

DenseVector vectorize(const DenseMatrix& rho);
DenseMatrix unvectorize(const DenseVector& v, int dim);

/// Sparse Kronecker product a ⊗ b.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

} // namespace blockade
