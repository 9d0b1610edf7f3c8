#include "blockade/sweep.hpp"

#include "blockade/error.hpp"
#include "blockade/liouvillian.hpp"
#include "blockade/observables.hpp"
#include "blockade/solvers.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace blockade {

std::string_view to_string(Observable o)
{
    switch (o) {
    case Observable::g2_zero: return "g2_zero";
    case Observable::mean_n: return "mean_n";
    case Observable::p_n: return "p_n";
    }
    return "?";
}

std::string_view to_string(Spacing s) { return s == Spacing::linear ? "linear" : "log"; }

namespace {

[[noreturn]] void config_fail(const std::string& msg) { throw Error(ErrorCode::config_error, msg); }

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view key)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        config_fail("invalid number '" + std::string(text) + "' for key '" + std::string(key) + "'");
    }
    return value;
}

int parse_int(std::string_view text, std::string_view key)
{
    text = trim(text);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        config_fail("invalid integer '" + std::string(text) + "' for key '" + std::string(key) + "'");
    }
    return value;
}

bool is_identifier_char(char c, bool first)
{
    const bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    return first ? alpha : alpha || (c >= '0' && c <= '9');
}

std::vector<Observable> parse_observables(std::string_view text)
{
    std::vector<Observable> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string_view item = trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
        if (item == "g2_zero") {
            out.push_back(Observable::g2_zero);
        } else if (item == "mean_n") {
            out.push_back(Observable::mean_n);
        } else if (item == "p_n") {
            out.push_back(Observable::p_n);
        } else {
            config_fail("unknown observable '" + std::string(item) + "'");
        }
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

void set_axis_key(AxisSpec& axis, std::string_view key, std::string_view value)
{
    if (key == "param") {
        axis.param = std::string(trim(value));
    } else if (key == "start") {
        axis.start = parse_double(value, key);
    } else if (key == "stop") {
        axis.stop = parse_double(value, key);
    } else if (key == "count") {
        axis.count = parse_int(value, key);
    } else if (key == "scale") {
        const auto v = trim(value);
        if (v == "linear") {
            axis.spacing = Spacing::linear;
        } else if (v == "log") {
            axis.spacing = Spacing::log;
        } else {
            config_fail("axis scale must be 'linear' or 'log'");
        }
    } else {
        config_fail("unknown axis key '" + std::string(key) + "'");
    }
}

bool is_axis_key(std::string_view key)
{
    return key == "param" || key == "start" || key == "stop" || key == "count" || key == "scale";
}

void set_global_key(SweepConfig& config, std::string_view key, std::string_view value)
{
    value = trim(value);
    if (is_param_name(key)) {
        set_param(config.base, key, parse_double(value, key));
    } else if (key == "sign_convention") {
        try {
            config.base.sign_convention = parse_sign_convention(value);
        } catch (const Error& e) {
            config_fail(e.what());
        }
    } else if (key == "nmax") {
        if (value == "auto") {
            config.n_max.reset();
        } else {
            config.n_max = parse_int(value, key);
        }
    } else if (key == "nmax_ceiling") {
        config.nmax_ceiling = parse_int(value, key);
    } else if (key == "tol") {
        config.steady_state_tol = parse_double(value, key);
    } else if (key == "truncation_tol") {
        config.truncation_tol = parse_double(value, key);
    } else if (key == "workers") {
        config.workers = parse_int(value, key);
    } else if (key == "observables") {
        config.observables = parse_observables(value);
    } else {
        config_fail("unknown key '" + std::string(key) + "'");
    }
}

std::pair<std::string_view, std::string_view> split_assignment(std::string_view line)
{
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        config_fail("expected 'key = value', got '" + std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
        config_fail("empty key in '" + std::string(line) + "'");
    }
    return {key, trim(line.substr(eq + 1))};
}

bool wants(const SweepConfig& config, Observable o)
{
    return std::find(config.observables.begin(), config.observables.end(), o) != config.observables.end();
}

} // namespace

std::vector<double> AxisSpec::values() const
{
    std::vector<double> out;
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / (count - 1);
        double v = spacing == Spacing::linear
                       ? start + (stop - start) * t
                       : std::exp(std::log(start) + (std::log(stop) - std::log(start)) * t);
        if (k == count - 1) {
            v = stop;
        }
        out.push_back(v);
    }
    return out;
}

DerivedRule parse_derived_rule(std::string_view text)
{
    const auto [target, expr_raw] = split_assignment(text);
    std::string expr;
    for (char c : expr_raw) {
        if (c != ' ' && c != '\t') {
            expr.push_back(c);
        }
    }
    DerivedRule rule;
    rule.target = std::string(target);
    const auto bad = [&]() {
        config_fail("derived rule must be affine in one parameter (a*x + b), got '" + std::string(expr_raw) + "'");
    };

    std::size_t pos = 0;
    double sign = 1.0;
    if (pos < expr.size() && (expr[pos] == '-' || expr[pos] == '+')) {
        sign = expr[pos] == '-' ? -1.0 : 1.0;
        ++pos;
    }
    double coefficient = 1.0;
    if (pos < expr.size() && (std::isdigit(static_cast<unsigned char>(expr[pos])) || expr[pos] == '.')) {
        const auto [ptr, ec] = std::from_chars(expr.data() + pos, expr.data() + expr.size(), coefficient);
        if (ec != std::errc()) {
            bad();
        }
        pos = static_cast<std::size_t>(ptr - expr.data());
        if (pos >= expr.size() || expr[pos] != '*') {
            bad();
        }
        ++pos;
    }
    const std::size_t ident_start = pos;
    while (pos < expr.size() && is_identifier_char(expr[pos], pos == ident_start)) {
        ++pos;
    }
    if (pos == ident_start) {
        bad();
    }
    rule.source = expr.substr(ident_start, pos - ident_start);
    rule.scale = sign * coefficient;
    if (pos < expr.size()) {
        if (expr[pos] != '+' && expr[pos] != '-') {
            bad();
        }
        const double offset_sign = expr[pos] == '-' ? -1.0 : 1.0;
        ++pos;
        double offset = 0.0;
        const auto [ptr, ec] = std::from_chars(expr.data() + pos, expr.data() + expr.size(), offset);
        if (ec != std::errc() || ptr != expr.data() + expr.size()) {
            bad();
        }
        rule.offset = offset_sign * offset;
    }
    return rule;
}

void SweepConfig::validate() const
{
    for (std::string_view name : kParamNames) {
        if (!std::isfinite(get_param(base, name))) {
            config_fail("base parameter " + std::string(name) + " is not finite");
        }
    }
    if (axes.empty() || axes.size() > 2) {
        config_fail("a sweep needs one or two [axis] blocks");
    }
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const AxisSpec& ax = axes[i];
        if (!is_param_name(ax.param)) {
            config_fail("axis parameter '" + ax.param + "' is not a model parameter");
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (axes[k].param == ax.param) {
                config_fail("axis parameter '" + ax.param + "' appears twice");
            }
        }
        if (ax.count < 1) {
            config_fail("axis count must be >= 1");
        }
        if (ax.count == 1 && ax.start != ax.stop) {
            config_fail("a single-point axis needs start == stop");
        }
        if (ax.spacing == Spacing::log && (ax.start <= 0.0 || ax.stop <= 0.0)) {
            config_fail("log axis '" + ax.param + "' needs positive endpoints");
        }
    }
    for (std::size_t i = 0; i < derived.size(); ++i) {
        const DerivedRule& r = derived[i];
        if (!is_param_name(r.target) || !is_param_name(r.source)) {
            config_fail("derived rule " + r.target + " = f(" + r.source + ") names an unknown parameter");
        }
        if (r.target == r.source) {
            config_fail("derived rule for " + r.target + " refers to itself");
        }
        if (!std::isfinite(r.scale) || !std::isfinite(r.offset)) {
            config_fail("derived rule for " + r.target + " has non-finite coefficients");
        }
        for (const AxisSpec& ax : axes) {
            if (ax.param == r.target) {
                config_fail("parameter " + r.target + " is both an axis and a derived target");
            }
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (derived[k].target == r.target) {
                config_fail("parameter " + r.target + " has two derived rules");
            }
        }
    }
    (void)ordered_rules();
    if (observables.empty()) {
        config_fail("observable list is empty");
    }
    if (!(steady_state_tol > 0.0) || !(truncation_tol > 0.0)) {
        config_fail("tolerances must be positive");
    }
    if (workers < 1) {
        config_fail("workers must be >= 1");
    }
    if (n_max && *n_max < 1) {
        config_fail("nmax must be >= 1 or 'auto'");
    }
    if (nmax_ceiling < 5) {
        config_fail("nmax_ceiling must be >= 5");
    }
}

std::vector<DerivedRule> SweepConfig::ordered_rules() const
{
    // Kahn's algorithm, ties broken by declaration order
    std::vector<DerivedRule> ordered;
    std::vector<bool> placed(derived.size(), false);
    while (ordered.size() < derived.size()) {
        bool progressed = false;
        for (std::size_t i = 0; i < derived.size(); ++i) {
            if (placed[i]) {
                continue;
            }
            bool ready = true;
            for (std::size_t k = 0; k < derived.size(); ++k) {
                if (!placed[k] && k != i && derived[k].target == derived[i].source) {
                    ready = false;
                }
            }
            if (ready) {
                placed[i] = true;
                ordered.push_back(derived[i]);
                progressed = true;
                break;
            }
        }
        if (!progressed) {
            config_fail("derived rules form a cycle");
        }
    }
    return ordered;
}

SystemParams SweepConfig::resolve(const std::vector<double>& coords) const
{
    SystemParams p = base;
    for (std::size_t i = 0; i < axes.size() && i < coords.size(); ++i) {
        set_param(p, axes[i].param, coords[i]);
    }
    for (const DerivedRule& r : ordered_rules()) {
        set_param(p, r.target, r.scale * get_param(p, r.source) + r.offset);
    }
    return p;
}

std::size_t SweepConfig::point_count() const
{
    std::size_t n = 1;
    for (const AxisSpec& ax : axes) {
        n *= static_cast<std::size_t>(std::max(ax.count, 0));
    }
    return n;
}

SweepConfig parse_config(std::string_view text)
{
    SweepConfig config;
    bool in_axis = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        try {
            if (line == "[axis]") {
                config.axes.emplace_back();
                in_axis = true;
            } else if (line.rfind("derive:", 0) == 0) {
                config.derived.push_back(parse_derived_rule(line.substr(7)));
            } else if (line.front() == '[') {
                config_fail("unknown section " + std::string(line));
            } else {
                const auto [key, value] = split_assignment(line);
                if (in_axis && is_axis_key(key)) {
                    set_axis_key(config.axes.back(), key, value);
                } else {
                    set_global_key(config, key, value);
                }
            }
        } catch (const Error& e) {
            config_fail("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

SweepConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::config_error, "cannot read config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void apply_override(SweepConfig& config, std::string_view assignment)
{
    const auto [key, value] = split_assignment(assignment);
    if (key.rfind("axis", 0) == 0 && key.find('.') != std::string_view::npos) {
        const auto dot = key.find('.');
        const int index = parse_int(key.substr(4, dot - 4), key);
        if (index < 0 || static_cast<std::size_t>(index) >= config.axes.size()) {
            config_fail("override addresses missing axis " + std::to_string(index));
        }
        set_axis_key(config.axes[static_cast<std::size_t>(index)], key.substr(dot + 1), value);
    } else if (key == "derive") {
        config.derived.push_back(parse_derived_rule(value));
    } else {
        set_global_key(config, key, value);
    }
}

SweepRow evaluate_point(const SweepConfig& config, const SystemParams& params)
{
    SweepRow row;
    try {
        params.validate();
        int n_max = 0;
        if (config.n_max) {
            n_max = *config.n_max;
        } else {
            TruncationOptions opts;
            opts.ceiling = config.nmax_ceiling;
            opts.steady_state_tol = config.steady_state_tol;
            n_max = auto_truncate(params, config.truncation_tol, opts);
        }
        row.n_max = n_max;
        const HilbertSpace hs(n_max);
        const SteadyStateResult ss = steady_state(build(params, hs), config.steady_state_tol);
        row.residual = ss.residual;
        const PhotonStatistics stats = photon_statistics(ss.rho, hs);
        if (wants(config, Observable::mean_n)) {
            row.mean_n = stats.mean_n;
        }
        if (wants(config, Observable::p_n)) {
            row.p_n = stats.p_n;
        }
        if (wants(config, Observable::g2_zero)) {
            if (stats.g2_zero) {
                row.g2_zero = stats.g2_zero;
            } else {
                row.error = std::string(to_string(ErrorCode::undefined_correlation));
            }
        }
    } catch (const Error& e) {
        row.g2_zero.reset();
        row.mean_n.reset();
        row.p_n.clear();
        row.error = std::string(to_string(e.code()));
    } catch (const std::exception&) {
        row.g2_zero.reset();
        row.mean_n.reset();
        row.p_n.clear();
        row.error = "internal-error";
    }
    return row;
}

SweepResult run_sweep(const SweepConfig& config)
{
    config.validate();
    const std::vector<DerivedRule> rules = config.ordered_rules();

    std::vector<std::vector<double>> axis_values;
    for (const AxisSpec& ax : config.axes) {
        axis_values.push_back(ax.values());
    }
    const std::size_t total = config.point_count();

    SweepResult result;
    result.config = config;
    result.rows.resize(total);

    auto coords_of = [&](std::size_t flat) {
        std::vector<double> coords(axis_values.size());
        for (std::size_t a = axis_values.size(); a-- > 0;) {
            const std::size_t n = axis_values[a].size();
            coords[a] = axis_values[a][flat % n];
            flat /= n;
        }
        return coords;
    };

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < total; i = next++) {
            const std::vector<double> coords = coords_of(i);
            const SystemParams params = config.resolve(coords);
            SweepRow row = evaluate_point(config, params);
            row.coords = coords;
            for (const DerivedRule& r : rules) {
                row.derived_values.push_back(get_param(params, r.target));
            }
            result.rows[i] = std::move(row);
        }
    };

    const auto workers = static_cast<std::size_t>(config.workers);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, total); ++w) {
            pool.emplace_back(work);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    return result;
}

std::size_t SweepResult::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); }));
}

namespace {

int max_fock_column(const SweepResult& result)
{
    if (!wants(result.config, Observable::p_n)) {
        return -1;
    }
    if (result.config.n_max) {
        return *result.config.n_max;
    }
    int top = -1;
    for (const SweepRow& row : result.rows) {
        top = std::max(top, static_cast<int>(row.p_n.size()) - 1);
    }
    return top;
}

} // namespace

std::vector<std::string> SweepResult::header() const
{
    std::vector<std::string> cols;
    for (const AxisSpec& ax : config.axes) {
        cols.push_back(ax.param);
    }
    for (const DerivedRule& r : config.ordered_rules()) {
        cols.push_back(r.target);
    }
    if (wants(config, Observable::g2_zero)) cols.emplace_back("g2_zero");
    if (wants(config, Observable::mean_n)) cols.emplace_back("mean_n");
    for (int n = 0; n <= max_fock_column(*this); ++n) {
        cols.push_back("p_" + std::to_string(n));
    }
    cols.emplace_back("residual");
    cols.emplace_back("n_max");
    cols.emplace_back("error");
    return cols;
}

std::string format_number(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string to_csv(const SweepResult& result)
{
    std::string out;
    const std::vector<std::string> cols = result.header();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += (i ? "," : "") + cols[i];
    }
    out += '\n';

    const int fock_cols = max_fock_column(result);
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const SweepRow& row : result.rows) {
        std::vector<std::string> cells;
        for (double c : row.coords) cells.push_back(format_number(c));
        for (double d : row.derived_values) cells.push_back(format_number(d));
        if (wants(result.config, Observable::g2_zero)) cells.push_back(opt(row.g2_zero));
        if (wants(result.config, Observable::mean_n)) cells.push_back(opt(row.mean_n));
        for (int n = 0; n <= fock_cols; ++n) {
            const auto u = static_cast<std::size_t>(n);
            cells.push_back(u < row.p_n.size() ? format_number(row.p_n[u]) : std::string());
        }
        cells.push_back(opt(row.residual));
        cells.push_back(row.n_max > 0 ? std::to_string(row.n_max) : std::string());
        cells.push_back(row.error);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? "," : "") + cells[i];
        }
        out += '\n';
    }
    return out;
}

std::string config_to_json(const SweepConfig& config)
{
    nlohmann::ordered_json j;
    nlohmann::ordered_json base;
    for (std::string_view name : kParamNames) {
        base[std::string(name)] = get_param(config.base, name);
    }
    base["sign_convention"] = to_string(config.base.sign_convention);
    j["base"] = base;
    j["axes"] = nlohmann::ordered_json::array();
    for (const AxisSpec& ax : config.axes) {
        j["axes"].push_back({{"param", ax.param},
                             {"start", ax.start},
                             {"stop", ax.stop},
                             {"count", ax.count},
                             {"scale", to_string(ax.spacing)}});
    }
    j["derived"] = nlohmann::ordered_json::array();
    for (const DerivedRule& r : config.derived) {
        j["derived"].push_back({{"target", r.target}, {"source", r.source}, {"scale", r.scale}, {"offset", r.offset}});
    }
    j["observables"] = nlohmann::ordered_json::array();
    for (Observable o : config.observables) {
        j["observables"].push_back(to_string(o));
    }
    j["tol"] = config.steady_state_tol;
    j["truncation_tol"] = config.truncation_tol;
    if (config.n_max) {
        j["nmax"] = *config.n_max;
    } else {
        j["nmax"] = "auto";
    }
    j["nmax_ceiling"] = config.nmax_ceiling;
    return j.dump();
}

std::string to_json(const SweepResult& result, std::string_view timestamp)
{
    nlohmann::ordered_json j;
    j["metadata"] = {{"version", kVersion},
                     {"timestamp", timestamp},
                     {"config", nlohmann::ordered_json::parse(config_to_json(result.config))}};
    const std::vector<std::string> cols = result.header();
    j["columns"] = cols;
    j["rows"] = nlohmann::ordered_json::array();

    const int fock_cols = max_fock_column(result);
    for (const SweepRow& row : result.rows) {
        nlohmann::ordered_json r;
        std::size_t c = 0;
        for (double v : row.coords) r[cols[c++]] = v;
        for (double v : row.derived_values) r[cols[c++]] = v;
        auto put = [&](const std::optional<double>& v) {
            r[cols[c++]] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
        };
        if (wants(result.config, Observable::g2_zero)) put(row.g2_zero);
        if (wants(result.config, Observable::mean_n)) put(row.mean_n);
        for (int n = 0; n <= fock_cols; ++n) {
            const auto u = static_cast<std::size_t>(n);
            put(u < row.p_n.size() ? std::optional<double>(row.p_n[u]) : std::nullopt);
        }
        put(row.residual);
        r[cols[c++]] = row.n_max > 0 ? nlohmann::ordered_json(row.n_max) : nlohmann::ordered_json(nullptr);
        r[cols[c++]] = row.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(row.error);
        j["rows"].push_back(std::move(r));
    }
    return j.dump(1);
}

namespace {

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

void emit(const SweepResult& result, OutputFormat format, std::ostream& out)
{
    out << (format == OutputFormat::csv ? to_csv(result) : to_json(result, utc_timestamp()) + "\n");
}

void emit(const SweepResult& result, OutputFormat format, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    }
    emit(result, format, out);
    out.flush();
    if (!out) {
        throw Error(ErrorCode::io_error, "failed writing '" + path + "'");
    }
}

} // namespace blockade
