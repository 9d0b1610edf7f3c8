#pragma once

#include "blockade/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string_view>
#include <vector>

namespace blockade {

/// Symmetric collective states up to two excitations, |±,n> = (|eg,n> ± |ge,n>)/√2.
/// The antisymmetric |−,n> decouple for equal couplings and are omitted.
enum class CollectiveState { gg0 = 0, gg1, plus0, gg2, plus1, ee0 };

inline constexpr int kCollectiveDim = 6;

std::string_view to_string(CollectiveState s);

using CollectiveMatrix = Eigen::Matrix<std::complex<double>, kCollectiveDim, kCollectiveDim>;

/// Hamiltonian projected on the collective basis with non-Hermitian half-width
/// terms: −iκ per photon, −i(γ+γ′) per symmetric qubit excitation, −2iγ on |ee,0>.
CollectiveMatrix effective_hamiltonian(const SystemParams& params);

/// Steady amplitudes relative to c(gg,0) = 1; first order in Ωp for the
/// one-excitation states, second order for the two-excitation states.
struct AmplitudeSolution {
    std::complex<double> gg1;
    std::complex<double> plus0;
    std::complex<double> gg2;
    std::complex<double> plus1;
    std::complex<double> ee0;

    /// 2|c(gg,2)|² / (|c(gg,1)|² + |c(+,1)|²)², the weak-drive estimate of g2(0).
    double g2_proxy() const;
};

/// Warns (does not throw) above Ωp = 0.2κ and on near-singular order blocks.
AmplitudeSolution perturbative_amplitudes(const SystemParams& params);

struct ScanWindow {
    double delta_c_min = 0.0;
    double delta_c_max = 0.0;
    int points = 4001;
};

/// Symmetric window [−L, L], L = max(4|Δa|, 10), around zero cavity detuning.
ScanWindow default_scan_window(double delta_a);

struct QdiRoot {
    double g = 0.0;
    double delta_c = 0.0;        ///< minimizer of |c(gg,2)|²
    double amplitude_sq = 0.0;   ///< |c(gg,2)|² at the minimizer
};

/// For each g, the Δc minimizing |c(gg,2)|² at the template's fixed Δa:
/// deepest interior local minimum of a grid scan, refined by golden section.
/// Throws scan_window when the scan has no interior minimum.
std::vector<QdiRoot> qdi_root_scan(const SystemParams& params_template, const std::vector<double>& g_values,
                                   const ScanWindow& window);
std::vector<QdiRoot> qdi_root_scan(const SystemParams& params_template, const std::vector<double>& g_values);

} // namespace blockade
