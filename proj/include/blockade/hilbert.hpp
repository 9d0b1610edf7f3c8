#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

namespace blockade {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

/// Qubit label 0 is |g>, 1 is |e>; n is the cavity photon number.
struct BasisState {
    int q1 = 0;
    int q2 = 0;
    int n = 0;

    int excitations() const { return q1 + q2 + n; }
    bool operator==(const BasisState&) const = default;
};

/// qubit ⊗ qubit ⊗ cavity space truncated at n_max photons.
///
/// Basis ordering is qubit-major, cavity-minor:
///   index(q1, q2, n) = (2*q1 + q2) * (n_max + 1) + n
/// so the four qubit configurations gg, ge, eg, ee each own a contiguous
/// block of n_max + 1 Fock levels.
class HilbertSpace {
public:
    explicit HilbertSpace(int n_max);

    int n_max() const { return n_max_; }
    int fock_levels() const { return n_max_ + 1; }
    int dim() const { return 4 * (n_max_ + 1); }

    int index(int q1, int q2, int n) const;
    int index(const BasisState& s) const { return index(s.q1, s.q2, s.n); }
    BasisState state(int index) const;

    bool operator==(const HilbertSpace&) const = default;

private:
    int n_max_;
};

/// Throws invalid_cutoff for n_max < 1; warns for n_max < 2.
HilbertSpace space(int n_max);

/// Square complex operator on a HilbertSpace (sparse storage).
class Operator {
public:
    explicit Operator(int dim);
    explicit Operator(SparseMatrix matrix);

    static Operator identity(int dim);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const SparseMatrix& matrix() const { return matrix_; }
    DenseMatrix dense() const { return DenseMatrix(matrix_); }
    Complex coeff(int row, int col) const { return matrix_.coeff(row, col); }
    Eigen::Index nonzeros() const { return matrix_.nonZeros(); }

    Operator adjoint() const;
    /// Entrywise complex conjugate.
    Operator conjugate() const;
    Operator transpose() const;

    Operator& operator+=(const Operator& other);
    Operator& operator-=(const Operator& other);
    Operator& operator*=(Complex factor);

    friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
    friend Operator operator*(Complex factor, Operator op) { return op *= factor; }
    friend Operator operator*(Operator op, Complex factor) { return op *= factor; }
    friend Operator operator*(const Operator& lhs, const Operator& rhs);

    friend bool operator==(const Operator& lhs, const Operator& rhs);

private:
    SparseMatrix matrix_;
};

Operator add(const Operator& a, const Operator& b);
Operator scale(Complex factor, const Operator& a);
Operator mul(const Operator& a, const Operator& b);
Operator adjoint(const Operator& a);
Operator commutator(const Operator& a, const Operator& b);
Complex trace(const Operator& a);

/// trace(A·rho) summed over the nonzeros of A; the product is never formed.
Complex expectation(const Operator& a, const DenseMatrix& rho);

/// Cavity annihilation a, identity on both qubits.
Operator annihilation(const HilbertSpace& space);
/// Qubit lowering sigma_j = |g><e| on qubit j ∈ {1, 2}.
Operator lowering(const HilbertSpace& space, int j);
/// a†a.
Operator photon_number(const HilbertSpace& space);
/// a†a + sigma_1†sigma_1 + sigma_2†sigma_2.
Operator excitation_number(const HilbertSpace& space);

/// Largest entrywise modulus of (a - b).
double max_abs_difference(const Operator& a, const Operator& b);

} // namespace blockade
