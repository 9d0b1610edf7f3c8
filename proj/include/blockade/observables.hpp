#pragma once

#include "blockade/density_matrix.hpp"
#include "blockade/hilbert.hpp"
#include "blockade/model.hpp"

#include <optional>
#include <vector>

namespace blockade {

/// Mean photon numbers below this make g2(0) undefined.
inline constexpr double kMeanPhotonFloor = 1e-14;

/// ⟨a†a⟩.
double mean_photon(const DensityMatrix& rho, const HilbertSpace& space);

/// ⟨a†a†aa⟩ / ⟨a†a⟩². Throws undefined_correlation when ⟨a†a⟩ <= floor.
double g2_zero(const DensityMatrix& rho, const HilbertSpace& space, double floor = kMeanPhotonFloor);

/// P(n) = Σ_{q1,q2} <q1 q2, n|ρ|q1 q2, n>, n = 0..n_max.
std::vector<double> photon_distribution(const DensityMatrix& rho, const HilbertSpace& space);

struct PhotonStatistics {
    double mean_n = 0.0;
    std::optional<double> g2_zero;  ///< absent below the mean-photon floor
    std::vector<double> p_n;
    /// (P(n) − Poisson(n)) / Poisson(n) at the same mean; absent where Poisson(n) <= 1e-30
    /// or the mean is below the floor.
    std::vector<std::optional<double>> poisson_deviation;
};

PhotonStatistics photon_statistics(const DensityMatrix& rho, const HilbertSpace& space,
                                   double floor = kMeanPhotonFloor);

struct ManifoldSpectrum {
    int excitations = 0;
    std::vector<int> basis;          ///< indices with q1 + q2 + n == excitations
    std::vector<double> eigenvalues; ///< ascending
};

/// Eigenvalues of the drive-free Hamiltonian inside one excitation manifold.
/// Throws invalid_parameter when the manifold is empty within the cutoff.
ManifoldSpectrum manifold_spectrum(const SystemParams& params, const HilbertSpace& space, int excitations);

} // namespace blockade
