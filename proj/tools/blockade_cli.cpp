// Command-line entry point: parameter sweeps, single-point evaluation and
// analytic condition checks.
//
//   blockade sweep figures/fig2c.conf --out fig2c.csv --workers 4
//   blockade point --set delta_a=15 --set delta_c=-30 --set g=5 --set gamma=1 --set omega_p=0.1
//   blockade check-conditions --set g=5 --set delta_a=15 --set delta_c=-30 --set j_ddi=16.667

#include "blockade/error.hpp"
#include "blockade/observables.hpp"
#include "blockade/solvers.hpp"
#include "blockade/sweep.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

void apply_nmax(blockade::SweepConfig& config, const std::string& nmax)
{
    if (!nmax.empty()) {
        blockade::apply_override(config, "nmax=" + nmax);
    }
}

int run_sweep_command(const std::string& config_path, const std::string& out, const std::string& format,
                      int workers, const std::vector<std::string>& sets, const std::string& nmax)
{
    blockade::SweepConfig config = blockade::load_config(config_path);
    for (const std::string& s : sets) {
        blockade::apply_override(config, s);
    }
    apply_nmax(config, nmax);
    if (workers > 0) {
        config.workers = workers;
    }
    config.validate();

    const auto fmt = format == "json" ? blockade::OutputFormat::json : blockade::OutputFormat::csv;
    const blockade::SweepResult result = blockade::run_sweep(config);
    if (out.empty() || out == "-") {
        blockade::emit(result, fmt, std::cout);
    } else {
        blockade::emit(result, fmt, out);
    }
    const std::size_t failed = result.failures();
    if (failed > 0) {
        std::cerr << failed << " of " << result.rows.size() << " points failed\n";
        return kExitPartial;
    }
    return kExitOk;
}

int run_point_command(const std::vector<std::string>& sets, const std::string& nmax)
{
    blockade::SweepConfig config;
    config.observables = {blockade::Observable::g2_zero, blockade::Observable::mean_n,
                          blockade::Observable::p_n};
    for (const std::string& s : sets) {
        blockade::apply_override(config, s);
    }
    apply_nmax(config, nmax);

    const blockade::SystemParams params = config.base;
    for (std::string_view name : blockade::kParamNames) {
        std::cout << name << " = " << blockade::format_number(blockade::get_param(params, name)) << '\n';
    }
    const blockade::SweepRow row = blockade::evaluate_point(config, params);
    if (row.n_max > 0) {
        std::cout << "n_max = " << row.n_max << '\n';
    }
    if (row.residual) {
        std::cout << "residual = " << blockade::format_number(*row.residual) << '\n';
    }
    if (row.mean_n) {
        std::cout << "mean_n = " << blockade::format_number(*row.mean_n) << '\n';
    }
    if (row.g2_zero) {
        std::cout << "g2_zero = " << blockade::format_number(*row.g2_zero) << '\n';
    }
    if (!row.p_n.empty() && row.mean_n) {
        const double mu = *row.mean_n;
        std::cout << "n,P(n),(P-Poisson)/Poisson\n";
        for (std::size_t n = 0; n < row.p_n.size(); ++n) {
            const double k = static_cast<double>(n);
            const double poisson = mu > 0.0 ? std::exp(-mu + k * std::log(mu) - std::lgamma(k + 1.0)) : 0.0;
            std::cout << n << ',' << blockade::format_number(row.p_n[n]) << ',';
            if (poisson > 1e-30) {
                std::cout << blockade::format_number((row.p_n[n] - poisson) / poisson);
            }
            std::cout << '\n';
        }
    }
    if (!row.error.empty()) {
        std::cout << "error = " << row.error << '\n';
        return kExitPartial;
    }
    return kExitOk;
}

void print_value(const char* name, auto&& compute)
{
    try {
        std::cout << name << " = " << blockade::format_number(compute()) << '\n';
    } catch (const blockade::Error& e) {
        std::cout << name << " = (" << blockade::to_string(e.code()) << ")\n";
    }
}

int run_check_command(const std::vector<std::string>& sets)
{
    blockade::SweepConfig config;
    for (const std::string& s : sets) {
        blockade::apply_override(config, s);
    }
    const blockade::SystemParams& p = config.base;
    std::cout << "ela_residual = " << blockade::format_number(blockade::ela_residual(p)) << "   # 2g^2 - dc(da - J)\n";
    std::cout << "qdi_residual = " << blockade::format_number(blockade::qdi_residual(p)) << "   # dc + 2da\n";
    std::cout << "hybrid_residual = " << blockade::format_number(blockade::hybrid_residual(p))
              << "   # g^2 + da(da - J)\n";
    print_value("ela_delta_a", [&] { return blockade::ela_detuning(p.g, p.delta_c, p.j_ddi); });
    print_value("qdi_delta_c", [&] { return blockade::qdi_condition(p.delta_a); });
    print_value("hybrid_j", [&] { return blockade::hybrid_j(p.g, p.delta_a); });
    std::cout << "hybrid_feasible = " << (blockade::hybrid_feasible(p.g, p.j_ddi) ? "true" : "false")
              << "   # J >= 2g\n";
    if (const auto roots = blockade::hybrid_detunings(p.g, p.j_ddi)) {
        std::cout << "hybrid_delta_a = " << blockade::format_number((*roots)[0]) << ", "
                  << blockade::format_number((*roots)[1]) << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Steady-state photon blockade of a driven two-qubit cavity with dipole-dipole interaction"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::string format = "csv";
    int workers = 0;
    std::vector<std::string> sets;
    std::string nmax;

    CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a config file");
    sweep->add_option("config", config_path, "Sweep config file")->required();
    sweep->add_option("--out", out, "Output path (stdout when omitted)");
    sweep->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--set", sets, "Override a config key (key=value)");
    sweep->add_option("--nmax", nmax, "Fock cutoff or 'auto'");

    CLI::App* point = app.add_subcommand("point", "Evaluate observables at one parameter set");
    point->add_option("--set", sets, "Parameter assignment (key=value)");
    point->add_option("--nmax", nmax, "Fock cutoff or 'auto'");

    CLI::App* check = app.add_subcommand("check-conditions", "Print blockade condition residuals");
    check->add_option("--set", sets, "Parameter assignment (key=value)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sweep) {
            return run_sweep_command(config_path, out, format, workers, sets, nmax);
        }
        if (*point) {
            return run_point_command(sets, nmax);
        }
        return run_check_command(sets);
    } catch (const blockade::Error& e) {
        std::cerr << "error [" << blockade::to_string(e.code()) << "]: " << e.what() << '\n';
        return e.code() == blockade::ErrorCode::config_error ? kExitConfig : kExitPartial;
    }
}
