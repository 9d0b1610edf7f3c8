#pragma once

#include "blockade/hilbert.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace blockade {

/// Overall sign of the bare detuning terms.
///   eq1:        H ⊃ -Δa Σσ†σ - Δc a†a
///   collective: H ⊃ +Δa Σσ†σ + Δc a†a
enum class SignConvention { eq1, collective };

std::string_view to_string(SignConvention c);
SignConvention parse_sign_convention(std::string_view text);

/// Model parameters; every rate and detuning is in units of the cavity decay kappa.
struct SystemParams {
    double delta_a = 0.0;          ///< ωp − ωa
    double delta_c = 0.0;          ///< ωp − ωc
    double g = 0.0;                ///< qubit-cavity coupling (same for both qubits)
    double j_ddi = 0.0;            ///< dipole-dipole exchange J
    double gamma = 0.0;            ///< single-qubit decay
    double gamma_collective = 0.0; ///< cross-qubit decay γ′
    double kappa = 1.0;
    double omega_p = 0.0;          ///< drive Rabi frequency on each qubit
    SignConvention sign_convention = SignConvention::eq1;

    /// Throws invalid_parameter when kappa <= 0, gamma/g/omega_p < 0 or |γ′| > γ.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

/// Names accepted by get_param/set_param, in a fixed order.
inline constexpr std::array<std::string_view, 8> kParamNames = {
    "delta_a", "delta_c", "g", "j_ddi", "gamma", "gamma_collective", "kappa", "omega_p"};

bool is_param_name(std::string_view name);
double get_param(const SystemParams& p, std::string_view name);
void set_param(SystemParams& p, std::string_view name, double value);

struct Geometry {
    double theta = 0.0; ///< angle between the dipole moment and the separation vector [rad]
    double kd = 1.0;    ///< k·d = ωa d / c
};

/// Rotating-frame Hamiltonian
///   H = s(−Δa Σσj†σj − Δc a†a) + g Σ(a†σj + aσj†) + J(σ1σ2† + σ2σ1†) + Ωp Σ(σj + σj†)
/// with s = +1 for SignConvention::eq1 and s = −1 for SignConvention::collective.
Operator hamiltonian(const SystemParams& params, const HilbertSpace& space);

/// Coherent dipole-dipole coupling J(θ, kd) for free-space decay rate gamma.
double ddi_coupling(const Geometry& geom, double gamma);

/// Collective emission rate γ′(θ, kd) for free-space decay rate gamma.
double collective_rate(const Geometry& geom, double gamma);

/// Copy of params with j_ddi and gamma_collective derived from geom and params.gamma.
SystemParams with_geometry(SystemParams params, const Geometry& geom);

// Analytic blockade conditions.

/// Δa satisfying the single-excitation resonance 2g² = Δc(Δa − J).
double ela_detuning(double g, double delta_c, double j_ddi);
/// Δc = −2Δa, the two-photon interference condition (independent of g).
double qdi_condition(double delta_a);
/// J satisfying g² = −Δa(Δa − J) at Δc = −2Δa.
double hybrid_j(double g, double delta_a);

/// Real roots Δa of Δa² − JΔa + g² = 0, i.e. where both conditions can hold
/// simultaneously for a given J. Empty when J² < 4g².
std::optional<std::array<double, 2>> hybrid_detunings(double g, double j_ddi);
/// J ≥ 2g, the necessary condition for hybrid_detunings to exist (for J ≥ 0).
bool hybrid_feasible(double g, double j_ddi);

double ela_residual(const SystemParams& p);    ///< 2g² − Δc(Δa − J)
double qdi_residual(const SystemParams& p);    ///< Δc + 2Δa
double hybrid_residual(const SystemParams& p); ///< g² + Δa(Δa − J)

} // namespace blockade
