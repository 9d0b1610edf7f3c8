#include "blockade/model.hpp"

#include "blockade/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blockade {

std::string_view to_string(SignConvention c)
{
    return c == SignConvention::eq1 ? "eq1" : "collective";
}

SignConvention parse_sign_convention(std::string_view text)
{
    if (text == "eq1") {
        return SignConvention::eq1;
    }
    if (text == "collective") {
        return SignConvention::collective;
    }
    throw Error(ErrorCode::invalid_parameter,
                "sign_convention must be 'eq1' or 'collective', got '" + std::string(text) + "'");
}

void SystemParams::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_parameter, msg); };
    for (std::string_view name : kParamNames) {
        if (!std::isfinite(get_param(*this, name))) {
            fail(std::string(name) + " is not finite");
        }
    }
    if (kappa <= 0.0) fail("kappa must be positive");
    if (gamma < 0.0) fail("gamma must be non-negative");
    if (g < 0.0) fail("g must be non-negative");
    if (omega_p < 0.0) fail("omega_p must be non-negative");
    // damping matrix [[γ, γ′], [γ′, γ]] must be positive semidefinite
    if (std::abs(gamma_collective) > gamma) {
        fail("|gamma_collective| must not exceed gamma");
    }
}

bool is_param_name(std::string_view name)
{
    return std::find(kParamNames.begin(), kParamNames.end(), name) != kParamNames.end();
}

namespace {

template <typename P>
auto& param_ref(P& p, std::string_view name)
{
    if (name == "delta_a") return p.delta_a;
    if (name == "delta_c") return p.delta_c;
    if (name == "g") return p.g;
    if (name == "j_ddi") return p.j_ddi;
    if (name == "gamma") return p.gamma;
    if (name == "gamma_collective") return p.gamma_collective;
    if (name == "kappa") return p.kappa;
    if (name == "omega_p") return p.omega_p;
    throw Error(ErrorCode::invalid_parameter, "unknown parameter '" + std::string(name) + "'");
}

void require_positive_kd(const Geometry& geom)
{
    if (!(geom.kd > 0.0)) {
        throw Error(ErrorCode::singular_geometry, "k·d must be positive (coincident qubits)");
    }
}

} // namespace

double get_param(const SystemParams& p, std::string_view name) { return param_ref(p, name); }
void set_param(SystemParams& p, std::string_view name, double value) { param_ref(p, name) = value; }

Operator hamiltonian(const SystemParams& params, const HilbertSpace& space)
{
    const Operator a = annihilation(space);
    const Operator s1 = lowering(space, 1);
    const Operator s2 = lowering(space, 2);
    const Operator ad = a.adjoint();
    const Operator s1d = s1.adjoint();
    const Operator s2d = s2.adjoint();

    const double sign = params.sign_convention == SignConvention::eq1 ? 1.0 : -1.0;

    Operator h = Complex(-sign * params.delta_a) * (s1d * s1 + s2d * s2);
    h += Complex(-sign * params.delta_c) * (ad * a);
    h += Complex(params.g) * (ad * s1 + a * s1d + ad * s2 + a * s2d);
    h += Complex(params.j_ddi) * (s1 * s2d + s2 * s1d);
    h += Complex(params.omega_p) * (s1 + s1d + s2 + s2d);
    return h;
}

double ddi_coupling(const Geometry& geom, double gamma)
{
    require_positive_kd(geom);
    const double c2 = std::cos(geom.theta) * std::cos(geom.theta);
    const double x = geom.kd;
    return 0.75 * gamma *
           (-(1.0 - c2) * std::cos(x) / x +
            (1.0 - 3.0 * c2) * (std::sin(x) / (x * x) + std::cos(x) / (x * x * x)));
}

double collective_rate(const Geometry& geom, double gamma)
{
    require_positive_kd(geom);
    const double c2 = std::cos(geom.theta) * std::cos(geom.theta);
    const double x = geom.kd;
    // (x cos x − sin x)/x³ cancels catastrophically for small x; use its series there
    const double x2 = x * x;
    const double radial = x < 0.1 ? -1.0 / 3.0 + x2 * (1.0 / 30.0 - x2 * (1.0 / 840.0 - x2 / 45360.0))
                                  : (x * std::cos(x) - std::sin(x)) / (x2 * x);
    return 1.5 * gamma * ((1.0 - c2) * std::sin(x) / x + (1.0 - 3.0 * c2) * radial);
}

SystemParams with_geometry(SystemParams params, const Geometry& geom)
{
    params.j_ddi = ddi_coupling(geom, params.gamma);
    params.gamma_collective = collective_rate(geom, params.gamma);
    return params;
}

double ela_detuning(double g, double delta_c, double j_ddi)
{
    if (delta_c == 0.0) {
        throw Error(ErrorCode::no_solution, "ELA condition 2g^2 = Δc(Δa − J) has no solution for Δc = 0");
    }
    return j_ddi + 2.0 * g * g / delta_c;
}

double qdi_condition(double delta_a) { return -2.0 * delta_a; }

double hybrid_j(double g, double delta_a)
{
    if (delta_a == 0.0) {
        throw Error(ErrorCode::no_solution, "hybrid condition g^2 = −Δa(Δa − J) has no solution for Δa = 0");
    }
    return delta_a + g * g / delta_a;
}

std::optional<std::array<double, 2>> hybrid_detunings(double g, double j_ddi)
{
    const double disc = j_ddi * j_ddi - 4.0 * g * g;
    if (disc < 0.0) {
        return std::nullopt;
    }
    const double root = std::sqrt(disc);
    return std::array<double, 2>{0.5 * (j_ddi - root), 0.5 * (j_ddi + root)};
}

bool hybrid_feasible(double g, double j_ddi) { return j_ddi >= 2.0 * g; }

double ela_residual(const SystemParams& p)
{
    return 2.0 * p.g * p.g - p.delta_c * (p.delta_a - p.j_ddi);
}

double qdi_residual(const SystemParams& p) { return p.delta_c + 2.0 * p.delta_a; }

double hybrid_residual(const SystemParams& p)
{
    return p.g * p.g + p.delta_a * (p.delta_a - p.j_ddi);
}

} // namespace blockade
