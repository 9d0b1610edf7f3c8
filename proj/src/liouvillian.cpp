#include "blockade/liouvillian.hpp"

#include "blockade/error.hpp"

#include <string>

namespace blockade {

Liouvillian::Liouvillian(int dim, SparseMatrix generator) : dim_(dim), generator_(std::move(generator))
{
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    if (generator_.rows() != n || generator_.cols() != n) {
        throw Error(ErrorCode::dimension_mismatch, "generator must be D^2 x D^2");
    }
    generator_.makeCompressed();
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b)
{
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (int ca = 0; ca < a.outerSize(); ++ca) {
        for (SparseMatrix::InnerIterator ia(a, ca); ia; ++ia) {
            for (int cb = 0; cb < b.outerSize(); ++cb) {
                for (SparseMatrix::InnerIterator ib(b, cb); ib; ++ib) {
                    triplets.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                          ia.value() * ib.value());
                }
            }
        }
    }
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

std::vector<CollapseChannel> standard_channels(const SystemParams& params, const HilbertSpace& space)
{
    const Operator a = annihilation(space);
    const Operator s1 = lowering(space, 1);
    const Operator s2 = lowering(space, 2);
    std::vector<CollapseChannel> channels{
        {a, a, params.kappa},
        {s1, s1, params.gamma},
        {s2, s2, params.gamma},
    };
    if (params.gamma_collective != 0.0) {
        channels.push_back({s1, s2, params.gamma_collective});
        channels.push_back({s2, s1, params.gamma_collective});
    }
    return channels;
}

Liouvillian build(const Operator& hamiltonian, const std::vector<CollapseChannel>& channels)
{
    const int dim = hamiltonian.dim();
    const SparseMatrix& h = hamiltonian.matrix();
    SparseMatrix id(dim, dim);
    id.setIdentity();

    const Complex minus_i{0.0, -1.0};
    SparseMatrix gen = minus_i * (kron(id, h) - kron(SparseMatrix(h.transpose()), id));

    for (const CollapseChannel& ch : channels) {
        if (ch.left.dim() != dim || ch.right.dim() != dim) {
            throw Error(ErrorCode::dimension_mismatch,
                        "collapse channel dimension differs from the Hamiltonian");
        }
        if (ch.rate < 0.0 && ch.left == ch.right) {
            throw Error(ErrorCode::invalid_parameter, "negative rate on a diagonal collapse channel");
        }
        if (ch.rate == 0.0) {
            continue;
        }
        const SparseMatrix& A = ch.left.matrix();
        const SparseMatrix& B = ch.right.matrix();
        const SparseMatrix bda = SparseMatrix(B.adjoint()) * A;
        gen += ch.rate * (2.0 * kron(SparseMatrix(B.conjugate()), A) - kron(id, bda) -
                          kron(SparseMatrix(bda.transpose()), id));
    }
    gen.prune(Complex(0.0, 0.0));
    return Liouvillian(dim, std::move(gen));
}

Liouvillian build(const SystemParams& params, const HilbertSpace& space)
{
    params.validate();
    return build(hamiltonian(params, space), standard_channels(params, space));
}

DenseVector vectorize(const DenseMatrix& rho)
{
    return Eigen::Map<const DenseVector>(rho.data(), rho.size());
}

DenseMatrix unvectorize(const DenseVector& v, int dim)
{
    if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
        throw Error(ErrorCode::dimension_mismatch, "vector length is not dim^2");
    }
    return Eigen::Map<const DenseMatrix>(v.data(), dim, dim);
}

DenseMatrix apply(const Liouvillian& liouvillian, const DenseMatrix& rho)
{
    if (rho.rows() != liouvillian.dim() || rho.cols() != liouvillian.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "state dimension differs from the Liouvillian");
    }
    const DenseVector out = liouvillian.generator() * vectorize(rho);
    return unvectorize(out, liouvillian.dim());
}

} // namespace blockade
