#include "blockade/hilbert.hpp"

#include "blockade/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace blockade {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void require_same_dim(const Operator& a, const Operator& b, const char* what)
{
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::dimension_mismatch,
                    std::string(what) + ": operator dimensions " + std::to_string(a.dim()) +
                        " and " + std::to_string(b.dim()) + " differ");
    }
}

SparseMatrix from_triplets(int dim, const std::vector<Triplet>& triplets)
{
    SparseMatrix m(dim, dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

} // namespace

HilbertSpace::HilbertSpace(int n_max) : n_max_(n_max)
{
    if (n_max < 1) {
        throw Error(ErrorCode::invalid_cutoff,
                    "photon cutoff n_max must be >= 1, got " + std::to_string(n_max));
    }
}

int HilbertSpace::index(int q1, int q2, int n) const
{
    if (q1 < 0 || q1 > 1 || q2 < 0 || q2 > 1 || n < 0 || n > n_max_) {
        throw Error(ErrorCode::invalid_index,
                    "basis state |" + std::to_string(q1) + std::to_string(q2) + "," +
                        std::to_string(n) + "> outside the space");
    }
    return (2 * q1 + q2) * fock_levels() + n;
}

BasisState HilbertSpace::state(int index) const
{
    if (index < 0 || index >= dim()) {
        throw Error(ErrorCode::invalid_index, "basis index " + std::to_string(index) + " out of range");
    }
    const int qubits = index / fock_levels();
    return {qubits / 2, qubits % 2, index % fock_levels()};
}

HilbertSpace space(int n_max)
{
    HilbertSpace s(n_max);
    if (n_max < 2) {
        warn("n_max < 2 cannot represent two-photon states; g2(0) will be identically zero");
    }
    return s;
}

Operator::Operator(int dim) : matrix_(dim, dim)
{
    if (dim < 0) {
        throw Error(ErrorCode::dimension_mismatch, "negative operator dimension");
    }
}

Operator::Operator(SparseMatrix matrix) : matrix_(std::move(matrix))
{
    if (matrix_.rows() != matrix_.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "operator matrix must be square");
    }
    matrix_.makeCompressed();
}

Operator Operator::identity(int dim)
{
    SparseMatrix m(dim, dim);
    m.setIdentity();
    return Operator(std::move(m));
}

Operator Operator::adjoint() const { return Operator(SparseMatrix(matrix_.adjoint())); }
Operator Operator::conjugate() const { return Operator(SparseMatrix(matrix_.conjugate())); }
Operator Operator::transpose() const { return Operator(SparseMatrix(matrix_.transpose())); }

Operator& Operator::operator+=(const Operator& other)
{
    require_same_dim(*this, other, "add");
    matrix_ += other.matrix_;
    matrix_.prune(Complex(0.0));
    return *this;
}

Operator& Operator::operator-=(const Operator& other)
{
    require_same_dim(*this, other, "subtract");
    matrix_ -= other.matrix_;
    matrix_.prune(Complex(0.0));
    return *this;
}

Operator& Operator::operator*=(Complex factor)
{
    matrix_ *= factor;
    return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs)
{
    require_same_dim(lhs, rhs, "mul");
    return Operator(SparseMatrix((lhs.matrix_ * rhs.matrix_).pruned()));
}

bool operator==(const Operator& lhs, const Operator& rhs)
{
    return lhs.dim() == rhs.dim() && max_abs_difference(lhs, rhs) == 0.0;
}

Operator add(const Operator& a, const Operator& b) { return a + b; }
Operator scale(Complex factor, const Operator& a) { return factor * a; }
Operator mul(const Operator& a, const Operator& b) { return a * b; }
Operator adjoint(const Operator& a) { return a.adjoint(); }
Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Complex trace(const Operator& a)
{
    Complex sum{0.0, 0.0};
    for (int k = 0; k < a.dim(); ++k) {
        sum += a.matrix().coeff(k, k);
    }
    return sum;
}

Complex expectation(const Operator& a, const DenseMatrix& rho)
{
    if (rho.rows() != a.dim() || rho.cols() != a.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "expectation: state and operator dimensions differ");
    }
    // tr(A rho) = sum_ij A_ij rho_ji
    Complex sum{0.0, 0.0};
    const SparseMatrix& m = a.matrix();
    for (int col = 0; col < m.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
            sum += it.value() * rho(it.col(), it.row());
        }
    }
    return sum;
}

Operator annihilation(const HilbertSpace& space)
{
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(space.dim()));
    for (int q1 = 0; q1 < 2; ++q1) {
        for (int q2 = 0; q2 < 2; ++q2) {
            for (int n = 1; n <= space.n_max(); ++n) {
                triplets.emplace_back(space.index(q1, q2, n - 1), space.index(q1, q2, n),
                                      std::sqrt(static_cast<double>(n)));
            }
        }
    }
    return Operator(from_triplets(space.dim(), triplets));
}

Operator lowering(const HilbertSpace& space, int j)
{
    if (j != 1 && j != 2) {
        throw Error(ErrorCode::invalid_index, "qubit index must be 1 or 2, got " + std::to_string(j));
    }
    std::vector<Triplet> triplets;
    for (int other = 0; other < 2; ++other) {
        for (int n = 0; n <= space.n_max(); ++n) {
            const int from = j == 1 ? space.index(1, other, n) : space.index(other, 1, n);
            const int to = j == 1 ? space.index(0, other, n) : space.index(other, 0, n);
            triplets.emplace_back(to, from, 1.0);
        }
    }
    return Operator(from_triplets(space.dim(), triplets));
}

Operator photon_number(const HilbertSpace& space)
{
    const Operator a = annihilation(space);
    return a.adjoint() * a;
}

Operator excitation_number(const HilbertSpace& space)
{
    const Operator s1 = lowering(space, 1);
    const Operator s2 = lowering(space, 2);
    return photon_number(space) + s1.adjoint() * s1 + s2.adjoint() * s2;
}

double max_abs_difference(const Operator& a, const Operator& b)
{
    require_same_dim(a, b, "compare");
    const SparseMatrix diff = a.matrix() - b.matrix();
    double worst = 0.0;
    for (int col = 0; col < diff.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(diff, col); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

} // namespace blockade
