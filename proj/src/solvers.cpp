#include "blockade/solvers.hpp"

#include "blockade/error.hpp"
#include "blockade/observables.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

namespace blockade {

std::string_view to_string(SolveMethod method)
{
    switch (method) {
    case SolveMethod::sparse_direct: return "sparse-direct";
    case SolveMethod::dense_null_space: return "dense-null-space";
    case SolveMethod::time_evolution: return "time-evolution";
    }
    return "unknown";
}

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kPreCorrectionTol = 1e-8;

using SparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

// Generator with row 0 replaced by the vectorized trace functional.
SparseMatrix trace_augmented(const Liouvillian& liouvillian)
{
    const int dim = liouvillian.dim();
    const SparseMatrix& gen = liouvillian.generator();
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(static_cast<std::size_t>(gen.nonZeros() + dim));
    for (int col = 0; col < gen.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(gen, col); it; ++it) {
            if (it.row() != 0) {
                triplets.emplace_back(it.row(), it.col(), it.value());
            }
        }
    }
    for (int k = 0; k < dim; ++k) {
        triplets.emplace_back(0, k * (dim + 1), 1.0);
    }
    SparseMatrix m(gen.rows(), gen.cols());
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

double one_norm(const SparseMatrix& m)
{
    double worst = 0.0;
    for (int col = 0; col < m.outerSize(); ++col) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
            sum += std::abs(it.value());
        }
        worst = std::max(worst, sum);
    }
    return worst;
}

// Hager's estimate of ||A^{-1}||_1 from a few solves with A and A^H.
double inverse_one_norm_estimate(SparseLU& lu, Eigen::Index n)
{
    DenseVector x = DenseVector::Constant(n, Complex(1.0 / static_cast<double>(n), 0.0));
    double estimate = 0.0;
    Eigen::Index last = -1;
    for (int iter = 0; iter < 5; ++iter) {
        const DenseVector y = lu.solve(x);
        estimate = y.cwiseAbs().sum();
        DenseVector xi(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double mag = std::abs(y(k));
            xi(k) = mag > 0.0 ? y(k) / mag : Complex(1.0, 0.0);
        }
        const DenseVector z = lu.adjoint().solve(xi);
        Eigen::Index j = 0;
        const double zmax = z.cwiseAbs().maxCoeff(&j);
        if (iter > 0 && (zmax <= std::real(z.dot(x)) || j == last)) {
            break;
        }
        last = j;
        x.setZero();
        x(j) = 1.0;
    }
    return estimate;
}

// Sweeps solve many systems sharing a sparsity pattern, so the symbolic
// analysis (column ordering) is cached per thread and per pattern.
struct CachedAnalysis {
    std::vector<int> outer;
    std::vector<int> inner;
    std::unique_ptr<SparseLU> lu;
};

SparseLU& factorization_for(const SparseMatrix& m)
{
    thread_local std::map<Eigen::Index, CachedAnalysis> cache;
    CachedAnalysis& entry = cache[m.rows()];
    const int* outer = m.outerIndexPtr();
    const int* inner = m.innerIndexPtr();
    const bool same = entry.lu && entry.outer.size() == static_cast<std::size_t>(m.outerSize() + 1) &&
                      std::equal(entry.outer.begin(), entry.outer.end(), outer) &&
                      entry.inner.size() == static_cast<std::size_t>(m.nonZeros()) &&
                      std::equal(entry.inner.begin(), entry.inner.end(), inner);
    if (!same) {
        entry.outer.assign(outer, outer + m.outerSize() + 1);
        entry.inner.assign(inner, inner + m.nonZeros());
        entry.lu = std::make_unique<SparseLU>();
        entry.lu->analyzePattern(m);
    }
    return *entry.lu;
}

std::optional<double> top_fock(const DenseMatrix& rho)
{
    const auto dim = static_cast<int>(rho.rows());
    if (dim % 4 != 0 || dim < 8) {
        return std::nullopt;
    }
    const HilbertSpace space(dim / 4 - 1);
    double p = 0.0;
    for (int q = 0; q < 4; ++q) {
        const int k = space.index(q / 2, q % 2, space.n_max());
        p += rho(k, k).real();
    }
    return p;
}

double residual_norm(const Liouvillian& liouvillian, const DenseMatrix& rho)
{
    return (liouvillian.generator() * vectorize(rho)).norm();
}

// Hermitizes and renormalizes a raw kernel vector after checking that the
// raw solution is already close to a valid state.
DensityMatrix finalize_state(DenseMatrix rho, bool check_raw)
{
    if (check_raw) {
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        const double tr = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (herm > kPreCorrectionTol || tr > kPreCorrectionTol) {
            std::ostringstream msg;
            msg << "steady-state solve drifted before correction: hermiticity error " << herm
                << ", trace error " << tr;
            throw Error(ErrorCode::numerical_failure, msg.str());
        }
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return DensityMatrix::from_matrix(std::move(rho));
}

} // namespace

constexpr int kRefinementRounds = 3;

SteadyStateResult steady_state(const Liouvillian& liouvillian, double tol)
{
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::invalid_parameter, "steady-state tolerance must be positive");
    }
    const SparseMatrix m = trace_augmented(liouvillian);
    SparseLU& lu = factorization_for(m);
    lu.factorize(m);
    if (lu.info() != Eigen::Success) {
        throw Error(ErrorCode::degenerate_steady_state,
                    "sparse LU factorization failed: " + lu.lastErrorMessage());
    }
    const double condition = one_norm(m) * inverse_one_norm_estimate(lu, m.rows());
    if (!(condition <= kMaxCondition)) {
        std::ostringstream msg;
        msg << "trace-augmented generator is ill-conditioned (estimate " << condition << ")";
        throw Error(ErrorCode::degenerate_steady_state, msg.str());
    }

    DenseVector rhs = DenseVector::Zero(m.rows());
    rhs(0) = 1.0;
    DenseVector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw Error(ErrorCode::degenerate_steady_state, "sparse LU solve failed");
    }
    // Multi-photon populations sit many orders below the vacuum entry; a few
    // rounds of iterative refinement recover their relative accuracy.
    for (int round = 0; round < kRefinementRounds; ++round) {
        const DenseVector correction = lu.solve(DenseVector(rhs - m * x));
        x += correction;
    }

    DensityMatrix rho = finalize_state(unvectorize(x, liouvillian.dim()), true);
    const double residual = residual_norm(liouvillian, rho.matrix());
    if (!(residual < tol)) {
        std::ostringstream msg;
        msg << "steady-state residual " << residual << " exceeds tolerance " << tol;
        throw Error(ErrorCode::numerical_failure, msg.str());
    }
    auto top = top_fock(rho.matrix());
    return {std::move(rho), residual, top, SolveMethod::sparse_direct};
}

double steady_state_condition_estimate(const Liouvillian& liouvillian)
{
    const SparseMatrix m = trace_augmented(liouvillian);
    SparseLU lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) {
        return std::numeric_limits<double>::infinity();
    }
    return one_norm(m) * inverse_one_norm_estimate(lu, m.rows());
}

SteadyStateResult steady_state_dense_oracle(const Liouvillian& liouvillian)
{
    const Eigen::Index n = liouvillian.generator().rows();
    if (n > 10000) {
        throw Error(ErrorCode::invalid_parameter, "dense oracle limited to D^2 <= 1e4");
    }
    const DenseMatrix gen(liouvillian.generator());
    Eigen::BDCSVD<DenseMatrix> svd(gen);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double threshold = 1e-10 * sigma(0);
    const auto kernel_dim = (sigma.array() <= threshold).count();
    if (kernel_dim != 1) {
        std::ostringstream msg;
        msg << "numerical kernel has dimension " << kernel_dim << " (expected 1)";
        throw Error(ErrorCode::ambiguous_steady_state, msg.str());
    }
    // The singular vector carries absolute errors ~eps*|L| that swamp the tiny
    // multi-photon populations; full-pivot LU back substitution resolves them.
    Eigen::FullPivLU<DenseMatrix> lu(gen);
    lu.setThreshold(1e-10);
    const DenseMatrix kernel = lu.kernel();
    if (kernel.cols() != 1) {
        throw Error(ErrorCode::numerical_failure, "LU kernel disagrees with singular value count");
    }
    const DenseVector v = kernel.col(0);
    DenseMatrix rho = unvectorize(v, liouvillian.dim());
    rho /= rho.trace();
    DensityMatrix state = finalize_state(std::move(rho), false);
    const double residual = residual_norm(liouvillian, state.matrix());
    auto top = top_fock(state.matrix());
    return {std::move(state), residual, top, SolveMethod::dense_null_space};
}

DensityMatrix evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t_final, double rtol)
{
    EvolveOptions options;
    options.rtol = rtol;
    return evolve(liouvillian, rho0, t_final, options);
}

DensityMatrix evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t_final,
                     const EvolveOptions& options)
{
    if (rho0.dim() != liouvillian.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "initial state dimension differs from the Liouvillian");
    }
    if (!(t_final > 0.0) || !(options.rtol > 0.0)) {
        throw Error(ErrorCode::invalid_parameter, "evolve requires t_final > 0 and rtol > 0");
    }

    // Dormand-Prince 5(4) tableau
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2, (void)c3, (void)c4, (void)c5;

    const SparseMatrix& gen = liouvillian.generator();
    const double step_rtol = options.rtol * options.step_fraction;
    const double atol = step_rtol * options.atol_factor;
    const double min_step = 1e-12 * t_final;

    DenseVector y = vectorize(rho0.matrix());
    DenseVector k1 = gen * y;
    DenseVector k2, k3, k4, k5, k6, k7, y_new, err;
    double t = 0.0;
    double h = std::min(options.initial_step, t_final);

    while (t < t_final) {
        if (t + h > t_final) {
            h = t_final - t;
        }
        k2 = gen * (y + h * a21 * k1);
        k3 = gen * (y + h * (a31 * k1 + a32 * k2));
        k4 = gen * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = gen * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = gen * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = gen * y_new;
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double scale = atol + step_rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
            err_norm = std::max(err_norm, std::abs(err(i)) / scale);
        }
        if (!std::isfinite(err_norm)) {
            throw Error(ErrorCode::numerical_failure, "non-finite error estimate during evolution");
        }

        const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        if (err_norm <= 1.0) {
            t += h;
            y.swap(y_new);
            k1.swap(k7);
            h *= factor;
        } else {
            h *= std::min(factor, 0.9);
            if (h < min_step) {
                std::ostringstream msg;
                msg << "step size " << h << " underflowed at t = " << t
                    << "; the problem is stiff, use the direct steady-state solver";
                throw Error(ErrorCode::stiffness, msg.str());
            }
        }
    }

    DenseMatrix rho = unvectorize(y, liouvillian.dim());
    const double drift = std::abs(rho.trace() - rho0.matrix().trace());
    if (drift > 1e-8) {
        std::ostringstream msg;
        msg << "trace drifted by " << drift << " during evolution";
        throw Error(ErrorCode::numerical_failure, msg.str());
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix::from_matrix(std::move(rho));
}

SteadyStateResult solve_steady_state(const SystemParams& params, int n_max, double tol)
{
    const HilbertSpace hs(n_max);
    return steady_state(build(params, hs), tol);
}

int auto_truncate(const SystemParams& params, double tol, const TruncationOptions& options)
{
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::invalid_parameter, "truncation tolerance must be positive");
    }
    struct Sample {
        double mean_n;
        std::optional<double> g2;
        double top;
    };
    std::map<int, Sample> cache;
    auto sample = [&](int n_max) -> const Sample& {
        auto it = cache.find(n_max);
        if (it != cache.end()) {
            return it->second;
        }
        const HilbertSpace hs(n_max);
        const SteadyStateResult ss = steady_state(build(params, hs), options.steady_state_tol);
        const PhotonStatistics stats = photon_statistics(ss.rho, hs);
        return cache.emplace(n_max, Sample{stats.mean_n, stats.g2_zero, ss.top_fock_population.value_or(0.0)})
            .first->second;
    };
    auto rel_change = [](double a, double b) {
        const double scale = std::max(std::abs(a), std::abs(b));
        return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
    };

    for (int n_max = std::max(options.min_cutoff, 1); n_max + options.step <= options.ceiling; ++n_max) {
        const Sample& lo = sample(n_max);
        const Sample& hi = sample(n_max + options.step);
        if (lo.top >= tol) {
            continue;
        }
        if (rel_change(lo.mean_n, hi.mean_n) >= tol) {
            continue;
        }
        // both below the mean-photon floor: vacuum-dominated, g2 has nothing to converge
        if (lo.g2.has_value() != hi.g2.has_value()) {
            continue;
        }
        if (lo.g2 && rel_change(*lo.g2, *hi.g2) >= tol) {
            continue;
        }
        return n_max;
    }
    throw Error(ErrorCode::no_convergence,
                "Fock cutoff did not converge below the ceiling n_max = " + std::to_string(options.ceiling) +
                    "; the drive is likely outside the weak-drive regime");
}

} // namespace blockade
