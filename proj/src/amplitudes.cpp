#include "blockade/amplitudes.hpp"

#include "blockade/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace blockade {

std::string_view to_string(CollectiveState s)
{
    switch (s) {
    case CollectiveState::gg0: return "|gg,0>";
    case CollectiveState::gg1: return "|gg,1>";
    case CollectiveState::plus0: return "|+,0>";
    case CollectiveState::gg2: return "|gg,2>";
    case CollectiveState::plus1: return "|+,1>";
    case CollectiveState::ee0: return "|ee,0>";
    }
    return "?";
}

namespace {

constexpr int idx(CollectiveState s) { return static_cast<int>(s); }

void check_block(const Eigen::MatrixXcd& block, const char* order)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    const double cond = smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
    if (cond > 1e12) {
        std::ostringstream msg;
        msg << order << " amplitude block is near-singular (condition " << cond
            << "); the drive sits on a complex resonance";
        warn(msg.str());
    }
}

} // namespace

CollectiveMatrix effective_hamiltonian(const SystemParams& params)
{
    using C = std::complex<double>;
    const double s = params.sign_convention == SignConvention::eq1 ? 1.0 : -1.0;
    const double da = s * params.delta_a;
    const double dc = s * params.delta_c;
    const double j = params.j_ddi;
    const C i{0.0, 1.0};
    const double qubit_width = params.gamma + params.gamma_collective;
    const double r2 = std::sqrt(2.0);

    CollectiveMatrix h = CollectiveMatrix::Zero();
    h(idx(CollectiveState::gg1), idx(CollectiveState::gg1)) = -dc - i * params.kappa;
    h(idx(CollectiveState::plus0), idx(CollectiveState::plus0)) = -da + j - i * qubit_width;
    h(idx(CollectiveState::gg2), idx(CollectiveState::gg2)) = -2.0 * dc - 2.0 * i * params.kappa;
    h(idx(CollectiveState::plus1), idx(CollectiveState::plus1)) =
        -da - dc + j - i * (params.kappa + qubit_width);
    // the exchange term only couples |eg> and |ge>, so |ee,0> carries no J shift
    h(idx(CollectiveState::ee0), idx(CollectiveState::ee0)) = -2.0 * da - 2.0 * i * params.gamma;

    auto couple = [&h](CollectiveState a, CollectiveState b, double value) {
        h(idx(a), idx(b)) = value;
        h(idx(b), idx(a)) = value;
    };
    couple(CollectiveState::gg1, CollectiveState::plus0, r2 * params.g);
    couple(CollectiveState::gg2, CollectiveState::plus1, 2.0 * params.g);
    couple(CollectiveState::plus1, CollectiveState::ee0, r2 * params.g);

    couple(CollectiveState::gg0, CollectiveState::plus0, r2 * params.omega_p);
    couple(CollectiveState::gg1, CollectiveState::plus1, r2 * params.omega_p);
    couple(CollectiveState::plus0, CollectiveState::ee0, r2 * params.omega_p);
    return h;
}

double AmplitudeSolution::g2_proxy() const
{
    const double n = std::norm(gg1) + std::norm(plus1);
    return 2.0 * std::norm(gg2) / (n * n);
}

AmplitudeSolution perturbative_amplitudes(const SystemParams& params)
{
    if (params.omega_p >= 0.2 * params.kappa) {
        warn("perturbative amplitudes used outside the weak-drive window (omega_p >= 0.2 kappa)");
    }
    const CollectiveMatrix h = effective_hamiltonian(params);

    // first order: H11·c1 = −V10·c0 with c0 = 1
    const Eigen::Matrix2cd h11 = h.block<2, 2>(1, 1);
    const Eigen::Vector2cd v10 = h.block<2, 1>(1, 0);
    check_block(h11, "first-order");
    const Eigen::Vector2cd c1 = h11.fullPivLu().solve(-v10);

    // second order: H22·c2 = −V21·c1
    const Eigen::Matrix3cd h22 = h.block<3, 3>(3, 3);
    const Eigen::Matrix<std::complex<double>, 3, 2> v21 = h.block<3, 2>(3, 1);
    check_block(h22, "second-order");
    const Eigen::Vector3cd c2 = h22.fullPivLu().solve(-v21 * c1);

    return {c1(0), c1(1), c2(0), c2(1), c2(2)};
}

ScanWindow default_scan_window(double delta_a)
{
    const double half = std::max(4.0 * std::abs(delta_a), 10.0);
    return {-half, half, 4001};
}

std::vector<QdiRoot> qdi_root_scan(const SystemParams& params_template, const std::vector<double>& g_values)
{
    return qdi_root_scan(params_template, g_values, default_scan_window(params_template.delta_a));
}

std::vector<QdiRoot> qdi_root_scan(const SystemParams& params_template, const std::vector<double>& g_values,
                                   const ScanWindow& window)
{
    if (g_values.empty()) {
        throw Error(ErrorCode::invalid_parameter, "qdi_root_scan needs at least one coupling value");
    }
    if (window.points < 3 || !(window.delta_c_max > window.delta_c_min)) {
        throw Error(ErrorCode::invalid_parameter, "scan window needs >= 3 points and a positive width");
    }

    std::vector<QdiRoot> roots;
    roots.reserve(g_values.size());
    for (double g : g_values) {
        SystemParams p = params_template;
        p.g = g;
        auto amp2 = [&p](double delta_c) {
            p.delta_c = delta_c;
            return std::norm(perturbative_amplitudes(p).gg2);
        };

        const double step = (window.delta_c_max - window.delta_c_min) / (window.points - 1);
        std::vector<double> values(static_cast<std::size_t>(window.points));
        for (int k = 0; k < window.points; ++k) {
            values[static_cast<std::size_t>(k)] = amp2(window.delta_c_min + step * k);
        }
        int best = -1;
        for (int k = 1; k + 1 < window.points; ++k) {
            const auto u = static_cast<std::size_t>(k);
            if (values[u] <= values[u - 1] && values[u] <= values[u + 1] &&
                (best < 0 || values[u] < values[static_cast<std::size_t>(best)])) {
                best = k;
            }
        }
        if (best < 0) {
            std::ostringstream msg;
            msg << "no interior minimum of |c(gg,2)|^2 in [" << window.delta_c_min << ", "
                << window.delta_c_max << "] at g = " << g;
            throw Error(ErrorCode::scan_window, msg.str());
        }

        // golden-section refinement inside the bracketing grid cells
        const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = window.delta_c_min + step * (best - 1);
        double hi = window.delta_c_min + step * (best + 1);
        double x1 = hi - ratio * (hi - lo);
        double x2 = lo + ratio * (hi - lo);
        double f1 = amp2(x1);
        double f2 = amp2(x2);
        while (hi - lo > 1e-11 * std::max(1.0, std::abs(lo))) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = amp2(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = amp2(x2);
            }
        }
        const double x = 0.5 * (lo + hi);
        roots.push_back({g, x, amp2(x)});
    }
    return roots;
}

} // namespace blockade
