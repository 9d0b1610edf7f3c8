#include "blockade/error.hpp"
#include "blockade/observables.hpp"
#include "blockade/solvers.hpp"

#include "support/oracles.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace blockade;
using blockade::testing::make_params;
using blockade::testing::random_density;
using blockade::testing::random_hermitian;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::io_error;
}

SystemParams fig2c(double delta_a) { return make_params(delta_a, -30.0, 5.0, 0.0, 1.0, 0.1); }

} // namespace

TEST_CASE("undriven system relaxes to the ground state")
{
    const HilbertSpace hs(3);
    SystemParams p = make_params(2.0, -3.0, 1.5, 0.5, 0.7, 0.0);
    const Liouvillian l = build(p, hs);
    for (const SteadyStateResult& r : {steady_state(l), steady_state_dense_oracle(l)}) {
        CHECK(std::abs(r.rho.matrix()(0, 0) - 1.0) < 1e-12);
        CHECK(r.rho.matrix().cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(r.top_fock_population.has_value());
        CHECK(*r.top_fock_population < 1e-14);
    }
    CHECK(steady_state(l).method == SolveMethod::sparse_direct);
    CHECK(steady_state_dense_oracle(l).method == SolveMethod::dense_null_space);
}

TEST_CASE("sparse solve matches the dense oracle at the QDI dip")
{
    const HilbertSpace hs(6);
    const Liouvillian l = build(fig2c(15.0), hs);
    const SteadyStateResult sparse = steady_state(l);
    const SteadyStateResult dense = steady_state_dense_oracle(l);
    CHECK(sparse.residual < kDefaultSteadyStateTol);
    const double g2s = g2_zero(sparse.rho, hs);
    const double g2d = g2_zero(dense.rho, hs);
    CHECK(std::abs(g2s - g2d) <= 1e-8 * g2d);
    CHECK(std::abs(mean_photon(sparse.rho, hs) - mean_photon(dense.rho, hs)) <= 1e-8 * mean_photon(dense.rho, hs));
    // QDI dip is well below the ELA side of the curve
    CHECK(g2s < 0.05);
    CHECK(steady_state_condition_estimate(l) < 1e12);
}

TEST_CASE("constructed fixed point is recovered")
{
    std::mt19937 rng(99);
    for (int dim : {3, 5}) {
        const DenseMatrix h = random_hermitian(dim, rng);
        const DenseMatrix jump = random_hermitian(dim, rng) + Complex(0.0, 1.0) * random_hermitian(dim, rng);
        const Liouvillian base = build(Operator(SparseMatrix(h.sparseView())),
                                       {{Operator(SparseMatrix(jump.sparseView())),
                                         Operator(SparseMatrix(jump.sparseView())), 0.7}});
        const DenseMatrix rho0 = random_density(dim, rng);
        // L' = L − (L vec ρ0) ⊗ vec(I)ᵀ keeps trace preservation and has ρ0 in its kernel
        const DenseVector defect = base.generator() * vectorize(rho0);
        const DenseVector trace_row = vectorize(DenseMatrix::Identity(dim, dim));
        const DenseMatrix gen = DenseMatrix(base.generator()) - defect * trace_row.transpose();
        const Liouvillian l(dim, SparseMatrix(gen.sparseView()));

        const SteadyStateResult r = steady_state(l);
        CHECK((r.rho.matrix() - rho0).cwiseAbs().maxCoeff() < 1e-10);
        CHECK_FALSE(r.top_fock_population.has_value());
        CHECK((steady_state_dense_oracle(l).rho.matrix() - rho0).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("degenerate generators are rejected")
{
    const HilbertSpace hs(2);
    SystemParams p = make_params(1.0, -1.0, 1.0, 0.0, 0.0, 0.0);
    const Liouvillian closed = build(hamiltonian(p, hs), {});
    CHECK(code_of([&] { steady_state_dense_oracle(closed); }) == ErrorCode::ambiguous_steady_state);
    CHECK(code_of([&] { steady_state(closed); }) == ErrorCode::degenerate_steady_state);
    CHECK(code_of([&] { steady_state(build(fig2c(1.0), hs), -1.0); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("time evolution")
{
    const HilbertSpace hs(4);
    const Liouvillian l = build(fig2c(15.0), hs);
    const DensityMatrix ground = DensityMatrix::projector(hs.dim(), 0);

    SUBCASE("short times return the initial state")
    {
        const DensityMatrix r = evolve(l, ground, 1e-12);
        CHECK((r.matrix() - ground.matrix()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(code_of([&] { evolve(l, ground, 0.0); }) == ErrorCode::invalid_parameter);
    }

    SUBCASE("long-time evolution converges to the steady state")
    {
        const DensityMatrix r = evolve(l, ground, 20.0, 1e-10);
        const SteadyStateResult ss = steady_state(l);
        CHECK(std::abs(r.matrix().trace() - 1.0) < 1e-8);
        CHECK(std::abs(g2_zero(r, hs) - g2_zero(ss.rho, hs)) < 1e-4 * g2_zero(ss.rho, hs));
        CHECK(std::abs(mean_photon(r, hs) - mean_photon(ss.rho, hs)) < 1e-4 * mean_photon(ss.rho, hs));
    }

    SUBCASE("closed evolution conserves purity")
    {
        const Liouvillian closed = build(hamiltonian(fig2c(2.0), hs), {});
        std::mt19937 rng(1);
        DenseVector ket(hs.dim());
        std::normal_distribution<double> normal;
        for (int k = 0; k < hs.dim(); ++k) {
            ket(k) = Complex(normal(rng), normal(rng));
        }
        const DensityMatrix psi = DensityMatrix::pure(ket);
        const double rtol = 1e-9;
        const DensityMatrix r = evolve(closed, psi, 2.0, rtol);
        const double purity = (r.matrix() * r.matrix()).trace().real();
        CHECK(std::abs(purity - 1.0) < rtol);
    }

    SUBCASE("stiff generators raise a stiffness error")
    {
        const Liouvillian stiff(l.dim(), SparseMatrix(1e14 * l.generator()));
        CHECK(code_of([&] { evolve(stiff, ground, 1.0); }) == ErrorCode::stiffness);
    }
}

TEST_CASE("automatic Fock cutoff")
{
    SystemParams vacuum = fig2c(15.0);
    vacuum.omega_p = 0.0;
    CHECK(auto_truncate(vacuum) == 3);

    const SystemParams p = fig2c(15.0);
    const int n = auto_truncate(p);
    CHECK(n >= 3);
    CHECK(n < 10);

    // doubling the cutoff leaves g2 unchanged to 1e-6
    const HilbertSpace lo(n);
    const HilbertSpace hi(2 * n);
    const double g2_lo = g2_zero(solve_steady_state(p, n).rho, lo);
    const double g2_hi = g2_zero(solve_steady_state(p, 2 * n).rho, hi);
    CHECK(std::abs(g2_lo - g2_hi) < 1e-6 * g2_hi);

    CHECK(code_of([&] { auto_truncate(p, 0.0); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("strong drive does not converge below the ceiling")
{
    // resonant qubits and cavity, saturated drive
    const SystemParams p = make_params(0.0, 0.0, 5.0, 0.0, 1.0, 10.0);
    CHECK(code_of([&] { auto_truncate(p, 1e-12); }) == ErrorCode::no_convergence);
}
