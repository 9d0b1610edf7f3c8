#include "blockade/density_matrix.hpp"
#include "blockade/error.hpp"
#include "blockade/liouvillian.hpp"

#include "support/oracles.hpp"

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace blockade;
using blockade::testing::direct_master_equation;
using blockade::testing::figure_parameter_sets;
using blockade::testing::random_density;
using blockade::testing::random_hermitian;

TEST_CASE("vectorization is column stacking")
{
    DenseMatrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    const DenseVector v = vectorize(m);
    CHECK(v(0) == Complex(1.0));
    CHECK(v(1) == Complex(3.0));
    CHECK(v(2) == Complex(2.0));
    CHECK(unvectorize(v, 2) == m);
    CHECK_THROWS_AS(unvectorize(v, 3), Error);

    // vec(A X B) = (Bᵀ ⊗ A) vec(X)
    std::mt19937 rng(3);
    const DenseMatrix a = random_hermitian(3, rng) + Complex(0.0, 1.0) * random_hermitian(3, rng);
    const DenseMatrix b = random_hermitian(3, rng);
    const DenseMatrix x = random_hermitian(3, rng);
    const SparseMatrix k = kron(SparseMatrix(b.transpose().sparseView()), SparseMatrix(a.sparseView()));
    CHECK((DenseVector(k * vectorize(x)) - vectorize(a * x * b)).norm() < 1e-12);
}

TEST_CASE("single photon decay at rate 2 kappa")
{
    const HilbertSpace hs(2);
    const Operator a = annihilation(hs);
    const Liouvillian l = build(Operator(hs.dim()), {{a, a, 1.0}});
    const DenseMatrix d = blockade::apply(l, DensityMatrix::projector(hs.dim(), hs.index(0, 0, 1)).matrix());
    CHECK(std::abs(d(hs.index(0, 0, 0), hs.index(0, 0, 0)) - 2.0) < 1e-14);
    CHECK(std::abs(d(hs.index(0, 0, 1), hs.index(0, 0, 1)) + 2.0) < 1e-14);
}

TEST_CASE("closed-system limit is the commutator")
{
    std::mt19937 rng(5);
    const DenseMatrix h = random_hermitian(6, rng);
    const DenseMatrix rho = random_density(6, rng);
    const Liouvillian l = build(Operator(SparseMatrix(h.sparseView())), {});
    const DenseMatrix expected = Complex(0.0, -1.0) * (h * rho - rho * h);
    CHECK((blockade::apply(l, rho) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vectorized and direct master equations agree")
{
    std::mt19937 rng(17);
    const HilbertSpace hs(3);
    for (auto params : figure_parameter_sets()) {
        SystemParams p = params.params;
        p.gamma_collective = -0.4 * p.gamma; // exercise the cross channels too
        const Liouvillian l = build(p, hs);
        const Operator h = hamiltonian(p, hs);
        const auto channels = standard_channels(p, hs);
        CHECK(channels.size() == 5);
        for (int trial = 0; trial < 3; ++trial) {
            const DenseMatrix rho = random_density(hs.dim(), rng);
            const DenseMatrix direct = direct_master_equation(h.dense(), channels, rho);
            const DenseMatrix vec = blockade::apply(l, rho);
            CHECK((vec - direct).norm() <= 1e-12 * direct.norm());
        }
    }
}

TEST_CASE("trace preservation and Hermiticity of the generator output")
{
    std::mt19937 rng(23);
    const HilbertSpace hs(3);
    SystemParams p = testing::make_params(1.5, -2.0, 1.2, 0.7, 0.4, 0.3);
    p.gamma_collective = 0.2;
    const Liouvillian l = build(p, hs);

    // every basis matrix E_ij maps to a traceless matrix
    const int d = hs.dim();
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            DenseMatrix e = DenseMatrix::Zero(d, d);
            e(i, j) = 1.0;
            CHECK(std::abs(blockade::apply(l, e).trace()) < 1e-13);
        }
    }
    for (int trial = 0; trial < 10; ++trial) {
        const DenseMatrix rho = random_density(d, rng);
        const DenseMatrix out = blockade::apply(l, rho);
        CHECK(std::abs(out.trace()) < 1e-12);
        CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("undriven ground state is stationary")
{
    const HilbertSpace hs(3);
    SystemParams p = testing::make_params(3.0, -1.0, 2.0, 0.5, 1.0, 0.0);
    const Liouvillian l = build(p, hs);
    const DenseMatrix out = blockade::apply(l, DensityMatrix::projector(hs.dim(), 0).matrix());
    CHECK(out.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectrum stability and unique kernel at figure parameters")
{
    const HilbertSpace hs(2);
    for (const auto& set : figure_parameter_sets()) {
        CAPTURE(set.name);
        const Liouvillian l = build(set.params, hs);
        const DenseMatrix dense(l.generator());
        Eigen::ComplexEigenSolver<DenseMatrix> eig(dense, false);
        const auto& values = eig.eigenvalues();
        int near_zero = 0;
        for (Eigen::Index k = 0; k < values.size(); ++k) {
            CHECK(values(k).real() <= 1e-8);
            if (std::abs(values(k)) < 1e-8) {
                ++near_zero;
            }
        }
        CHECK(near_zero == 1);
    }
}

TEST_CASE("channel validation")
{
    const HilbertSpace hs(2);
    const Operator a = annihilation(hs);
    const Operator s1 = lowering(hs, 1);
    const Operator s2 = lowering(hs, 2);
    CHECK_THROWS_AS(build(Operator(hs.dim()), {{a, a, -1.0}}), Error);
    CHECK_NOTHROW(build(Operator(hs.dim()), {{s1, s2, -0.5}, {s2, s1, -0.5}}));
    const Operator small = annihilation(HilbertSpace(3));
    CHECK_THROWS_AS(build(Operator(hs.dim()), {{small, small, 1.0}}), Error);
    CHECK_THROWS_AS(blockade::apply(build(Operator(hs.dim()), {}), DenseMatrix::Zero(3, 3)), Error);
}
