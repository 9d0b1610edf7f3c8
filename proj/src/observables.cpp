#include "blockade/observables.hpp"

#include "blockade/error.hpp"

#include <cmath>
#include <sstream>

namespace blockade {

namespace {

double real_expectation(const Operator& op, const DensityMatrix& rho, const char* what)
{
    const Complex value = expectation(op, rho);
    if (std::abs(value.imag()) > 1e-10) {
        std::ostringstream msg;
        msg << what << " has imaginary part " << value.imag();
        throw Error(ErrorCode::numerical_failure, msg.str());
    }
    return value.real();
}

void require_space(const DensityMatrix& rho, const HilbertSpace& space)
{
    if (rho.dim() != space.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "state dimension differs from the Hilbert space");
    }
}

} // namespace

double mean_photon(const DensityMatrix& rho, const HilbertSpace& space)
{
    require_space(rho, space);
    return real_expectation(photon_number(space), rho, "<a†a>");
}

double g2_zero(const DensityMatrix& rho, const HilbertSpace& space, double floor)
{
    require_space(rho, space);
    const Operator a = annihilation(space);
    const Operator ad = a.adjoint();
    const double n = real_expectation(ad * a, rho, "<a†a>");
    if (!(n > floor)) {
        std::ostringstream msg;
        msg << "g2(0) undefined: mean photon number " << n << " below floor " << floor;
        throw Error(ErrorCode::undefined_correlation, msg.str());
    }
    const double n2 = real_expectation(ad * ad * a * a, rho, "<a†a†aa>");
    return n2 / (n * n);
}

std::vector<double> photon_distribution(const DensityMatrix& rho, const HilbertSpace& space)
{
    require_space(rho, space);
    std::vector<double> p(static_cast<std::size_t>(space.fock_levels()), 0.0);
    for (int q = 0; q < 4; ++q) {
        for (int n = 0; n <= space.n_max(); ++n) {
            const int k = space.index(q / 2, q % 2, n);
            p[static_cast<std::size_t>(n)] += rho.matrix()(k, k).real();
        }
    }
    return p;
}

PhotonStatistics photon_statistics(const DensityMatrix& rho, const HilbertSpace& space, double floor)
{
    PhotonStatistics stats;
    stats.p_n = photon_distribution(rho, space);
    stats.mean_n = mean_photon(rho, space);
    stats.poisson_deviation.assign(stats.p_n.size(), std::nullopt);
    if (!(stats.mean_n > floor)) {
        return stats;
    }
    stats.g2_zero = g2_zero(rho, space, floor);

    const double mu = stats.mean_n;
    for (std::size_t n = 0; n < stats.p_n.size(); ++n) {
        const double k = static_cast<double>(n);
        const double poisson = std::exp(-mu + k * std::log(mu) - std::lgamma(k + 1.0));
        if (poisson > 1e-30) {
            stats.poisson_deviation[n] = (stats.p_n[n] - poisson) / poisson;
        }
    }
    return stats;
}

ManifoldSpectrum manifold_spectrum(const SystemParams& params, const HilbertSpace& space, int excitations)
{
    ManifoldSpectrum out;
    out.excitations = excitations;
    for (int k = 0; k < space.dim(); ++k) {
        if (space.state(k).excitations() == excitations) {
            out.basis.push_back(k);
        }
    }
    if (out.basis.empty()) {
        throw Error(ErrorCode::invalid_parameter,
                    "excitation manifold " + std::to_string(excitations) + " is empty at this cutoff");
    }

    SystemParams undriven = params;
    undriven.omega_p = 0.0;
    const DenseMatrix h = hamiltonian(undriven, space).dense();

    const auto m = static_cast<Eigen::Index>(out.basis.size());
    DenseMatrix block(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            block(r, c) = h(out.basis[static_cast<std::size_t>(r)], out.basis[static_cast<std::size_t>(c)]);
        }
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(block, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& values = eig.eigenvalues();
    out.eigenvalues.assign(values.data(), values.data() + values.size());
    return out;
}

} // namespace blockade
