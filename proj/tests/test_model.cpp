#include "blockade/error.hpp"
#include "blockade/hilbert.hpp"
#include "blockade/model.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace blockade;
using std::numbers::pi;

namespace {

DenseVector basis_ket(const HilbertSpace& hs, int q1, int q2, int n)
{
    DenseVector v = DenseVector::Zero(hs.dim());
    v(hs.index(q1, q2, n)) = 1.0;
    return v;
}

DenseVector symmetric_ket(const HilbertSpace& hs, int n, double sign = 1.0)
{
    return (basis_ket(hs, 1, 0, n) + sign * basis_ket(hs, 0, 1, n)) / std::sqrt(2.0);
}

SystemParams sample_params(std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    std::uniform_real_distribution<double> pos(0.0, 10.0);
    SystemParams p;
    p.delta_a = u(rng);
    p.delta_c = u(rng);
    p.g = pos(rng);
    p.j_ddi = u(rng);
    p.gamma = pos(rng);
    p.omega_p = pos(rng);
    return p;
}

} // namespace

TEST_CASE("decoupled Hamiltonian is diagonal")
{
    const HilbertSpace hs(3);
    SystemParams p;
    p.delta_a = 1.7;
    p.delta_c = -2.3;
    const DenseMatrix h = hamiltonian(p, hs).dense();
    for (int k = 0; k < hs.dim(); ++k) {
        const BasisState s = hs.state(k);
        const double expected = -p.delta_a * (s.q1 + s.q2) - p.delta_c * s.n;
        CHECK(std::abs(h(k, k) - expected) < 1e-14);
        for (int c = 0; c < hs.dim(); ++c) {
            if (c != k) {
                CHECK(h(k, c) == Complex(0.0));
            }
        }
    }

    p.sign_convention = SignConvention::collective;
    const DenseMatrix hc = hamiltonian(p, hs).dense();
    CHECK((hc + h).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("collective matrix elements")
{
    const HilbertSpace hs(3);
    SystemParams p;
    p.delta_a = 3.0;
    p.delta_c = -4.0;
    p.g = 1.3;
    p.j_ddi = 0.8;
    const DenseMatrix h = hamiltonian(p, hs).dense();

    const DenseVector gg1 = basis_ket(hs, 0, 0, 1);
    CHECK(std::abs(gg1.dot(h * symmetric_ket(hs, 0)) - std::sqrt(2.0) * p.g) < 1e-14);

    for (int n = 0; n < hs.n_max(); ++n) {
        const DenseVector minus = symmetric_ket(hs, n, -1.0);
        CHECK(std::abs(minus.dot(h * basis_ket(hs, 0, 0, n + 1))) < 1e-14);
    }

    // the antisymmetric state is an eigenvector of the drive-free coupling block
    const DenseVector minus0 = symmetric_ket(hs, 0, -1.0);
    const DenseVector hm = h * minus0;
    const Complex eigen = minus0.dot(hm);
    CHECK((hm - eigen * minus0).norm() < 1e-13);
    CHECK(std::abs(eigen - (-p.delta_a - p.j_ddi)) < 1e-13);
}

TEST_CASE("Hamiltonian properties over random parameters")
{
    std::mt19937 rng(2024);
    const HilbertSpace hs(4);
    const Operator n_exc = excitation_number(hs);
    for (int trial = 0; trial < 50; ++trial) {
        SystemParams p = sample_params(rng);
        const Operator h = hamiltonian(p, hs);
        CHECK(max_abs_difference(h, h.adjoint()) < 1e-13);

        p.omega_p = 0.0;
        const Operator h0 = hamiltonian(p, hs);
        CHECK(commutator(h0, n_exc).dense().cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("dipole-dipole coupling")
{
    // reference values from an independent 30-digit evaluation
    CHECK(ddi_coupling({pi / 2, pi}, 1.0) == doctest::Approx(0.214543763812943386765).epsilon(1e-14));
    CHECK(ddi_coupling({pi / 2, pi}, 1.0) == doctest::Approx(0.75 * (1.0 / pi - 1.0 / (pi * pi * pi))).epsilon(1e-14));

    const double magic = std::acos(1.0 / std::sqrt(3.0));
    for (double kd : {0.3, 2.0, 7.5}) {
        const double expected = -0.75 * (2.0 / 3.0) * std::cos(kd) / kd;
        CHECK(ddi_coupling({magic, kd}, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(ddi_coupling({magic, 2.0}, 1.0) == doctest::Approx(0.104036709136785596749).epsilon(1e-12));
    CHECK(std::abs(ddi_coupling({0.3, 1e4}, 1.0)) < 1e-4);
    CHECK(ddi_coupling({0.3, 1e4}, 1.0) == doctest::Approx(6.24052112906841486e-6).epsilon(1e-9));
    CHECK(ddi_coupling({0.3, 1.0}, 2.0) == doctest::Approx(2.0 * ddi_coupling({0.3, 1.0}, 1.0)));

    CHECK_THROWS_AS(ddi_coupling({0.1, 0.0}, 1.0), Error);
    CHECK_THROWS_AS(ddi_coupling({0.1, -1.0}, 1.0), Error);
}

TEST_CASE("collective emission rate")
{
    CHECK(collective_rate({pi / 2, pi}, 1.0) == doctest::Approx(-1.5 / (pi * pi)).epsilon(1e-14));
    CHECK(collective_rate({pi / 2, pi}, 1.0) == doctest::Approx(-0.151981775463506657165).epsilon(1e-14));
    for (double theta : {0.0, 0.7, pi / 2}) {
        CHECK(std::abs(collective_rate({theta, 1e-3}, 1.0) - 1.0) < 1e-5);
        CHECK(std::abs(collective_rate({theta, 1e-7}, 1.0) - 1.0) < 1e-12);
    }
    // either side of the small-kd branch
    CHECK(collective_rate({0.7, 0.05}, 1.0) == doctest::Approx(0.999646286739490278557).epsilon(1e-13));
    CHECK(collective_rate({0.7, 0.15}, 1.0) == doctest::Approx(0.996819520109735126301).epsilon(1e-13));
    CHECK(std::abs(collective_rate({0.3, 1e4}, 1.0)) < 1e-4);
    CHECK_THROWS_AS(collective_rate({0.1, 0.0}, 1.0), Error);
}

TEST_CASE("geometry positivity bound on a grid")
{
    // |γ′| <= γ over θ ∈ [0, π], kd ∈ [0.05, 20]
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
        const double theta = pi * i / 99.0;
        for (int k = 0; k < 100; ++k) {
            const double kd = 0.05 + (20.0 - 0.05) * k / 99.0;
            if (std::abs(collective_rate({theta, kd}, 1.0)) > 1.0 + 1e-12) {
                ++violations;
            }
        }
    }
    CHECK(violations == 0);

    SystemParams p;
    p.gamma = 1.0;
    const SystemParams q = with_geometry(p, {pi / 2, pi});
    CHECK(q.j_ddi == doctest::Approx(0.214543763812943));
    CHECK(q.gamma_collective == doctest::Approx(-0.151981775463507));
    CHECK_NOTHROW(q.validate());
}

TEST_CASE("parameter validation")
{
    SystemParams p;
    CHECK_NOTHROW(p.validate());
    p.kappa = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.kappa = 1.0;
    p.gamma = 0.5;
    p.gamma_collective = 0.6;
    CHECK_THROWS_AS(p.validate(), Error);
    p.gamma_collective = -0.5;
    CHECK_NOTHROW(p.validate());
    p.g = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.g = 1.0;
    p.omega_p = -0.1;
    CHECK_THROWS_AS(p.validate(), Error);

    CHECK(parse_sign_convention("collective") == SignConvention::collective);
    CHECK_THROWS_AS(parse_sign_convention("eq2"), Error);
    CHECK_THROWS_AS(set_param(p, "nope", 1.0), Error);
    set_param(p, "j_ddi", 2.5);
    CHECK(get_param(p, "j_ddi") == 2.5);
}

TEST_CASE("ELA detuning")
{
    CHECK(ela_detuning(5.0, -30.0, 0.0) == doctest::Approx(-5.0 / 3.0));
    CHECK(ela_detuning(5.0, -30.0, 50.0 / 3.0) == doctest::Approx(15.0));
    CHECK(ela_detuning(0.0, -30.0, 2.0) == 2.0);
    CHECK_THROWS_AS(ela_detuning(5.0, 0.0, 0.0), Error);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int trial = 0; trial < 200; ++trial) {
        SystemParams p;
        p.g = std::abs(u(rng)) / 3.0;
        p.delta_c = u(rng);
        p.j_ddi = u(rng);
        if (std::abs(p.delta_c) < 0.1) {
            continue;
        }
        p.delta_a = ela_detuning(p.g, p.delta_c, p.j_ddi);
        CHECK(std::abs(ela_residual(p)) < 1e-12 * std::max(1.0, p.g * p.g));
    }
}

TEST_CASE("QDI and hybrid conditions")
{
    CHECK(qdi_condition(15.0) == -30.0);
    CHECK(qdi_condition(0.0) == 0.0);
    CHECK(qdi_condition(-2.0) == 4.0);

    CHECK(hybrid_j(5.0, 15.0) == doctest::Approx(15.0 + 25.0 / 15.0));
    CHECK(hybrid_j(5.0, 15.0) / 5.0 == doctest::Approx(3.3333333333));
    CHECK(hybrid_j(0.0, 4.0) == 4.0);
    CHECK_THROWS_AS(hybrid_j(5.0, 0.0), Error);

    // J = 2g is a double root at Δa = g
    const auto roots = hybrid_detunings(5.0, 10.0);
    REQUIRE(roots.has_value());
    CHECK((*roots)[0] == doctest::Approx(5.0));
    CHECK((*roots)[1] == doctest::Approx(5.0));
    CHECK_FALSE(hybrid_detunings(5.0, 9.99).has_value());
    CHECK(hybrid_feasible(5.0, 10.0));
    CHECK_FALSE(hybrid_feasible(5.0, 9.0));

    // hybrid J never falls below 2g for Δa > 0
    for (double da = 0.1; da < 40.0; da += 0.37) {
        CHECK(hybrid_j(5.0, da) >= 10.0 - 1e-12);
        SystemParams p;
        p.g = 5.0;
        p.delta_a = da;
        p.j_ddi = hybrid_j(5.0, da);
        p.delta_c = qdi_condition(da);
        CHECK(std::abs(hybrid_residual(p)) < 1e-10);
        CHECK(qdi_residual(p) == 0.0);
        // with Δc = −2Δa the hybrid condition is the ELA condition
        CHECK(std::abs(ela_residual(p) - 2.0 * hybrid_residual(p)) < 1e-9);
    }
}
