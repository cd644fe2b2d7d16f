#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptwell/error.hpp"
#include "ptwell/export.hpp"
#include "ptwell/oracle.hpp"
#include "ptwell/parity.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell::cli {
namespace {

using nlohmann::json;

std::pair<std::string, double> parse_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        throw InvalidInput("--set expects LABEL=VALUE, got '" + text + "'");
    }
    const std::string label = text.substr(0, eq);
    const std::string number = text.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(number, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != number.size() || !std::isfinite(value)) {
        throw InvalidInput("--set " + label + ": '" + number + "' is not a finite number");
    }
    return {label, value};
}

int channels(const RunConfig& config) { return config.k.value_or(1); }

int rotation(const RunConfig& config) {
    if (config.l) {
        return *config.l;
    }
    return channels(config) > 1 ? 1 : 0;
}

CouplingPattern pattern_of(const RunConfig& config) {
    return solve_pattern(channels(config), rotation(config),
                         config.unconstrained ? ConstraintMode::unconstrained
                                              : ConstraintMode::pseudo_hermitian);
}

CouplingMatrix coupling_of(const RunConfig& config) {
    const CouplingPattern pattern = pattern_of(config);
    try {
        return assemble(pattern, config.params);
    } catch (const InvalidInput& e) {
        std::string labels;
        for (const auto& label : pattern.labels) {
            labels += (labels.empty() ? "" : ", ") + label;
        }
        throw InvalidInput(std::string(e.what()) + " (pattern labels: " + labels + ")");
    }
}

Spectrum spectrum_of(const RunConfig& config) {
    Spectrum s = spectrum(coupling_of(config), config.s_max, config.tol);
    s.l = rotation(config);
    s.params = config.params;
    return s;
}

std::string render_pattern(const RunConfig& config) {
    const CouplingPattern pattern = pattern_of(config);
    switch (config.format) {
        case Format::json:
            return pattern_to_json(pattern);
        case Format::csv: {
            std::ostringstream out;
            for (const auto& row : pattern.label_grid()) {
                for (std::size_t j = 0; j < row.size(); ++j) {
                    out << (j ? "," : "") << row[j];
                }
                out << '\n';
            }
            return out.str();
        }
        case Format::table:
            break;
    }
    return pattern_to_table(pattern);
}

std::string render_spectrum(const RunConfig& config) {
    const Spectrum s = spectrum_of(config);
    switch (config.format) {
        case Format::json:
            return spectrum_to_json(s);
        case Format::csv:
            return spectrum_to_csv(s, output_precision());
        case Format::table:
            break;
    }
    return spectrum_to_table(s, output_precision());
}

std::string render_critical(const RunConfig& config) {
    const int precision = output_precision();
    const double z_crit = critical_coupling();
    std::optional<double> scale;
    if (config.k) {
        scale = critical_scaling(coupling_of(config));
    }
    switch (config.format) {
        case Format::json: {
            json doc = {{"z_crit", z_crit}};
            if (scale) {
                doc["K"] = *config.k;
                doc["L"] = rotation(config);
                doc["params"] = config.params;
                doc["scale"] = *scale;
            }
            return doc.dump(2) + "\n";
        }
        case Format::csv: {
            if (scale) {
                return "z_crit,scale\n" + format_number(z_crit, precision) + "," +
                       format_number(*scale, precision) + "\n";
            }
            return "z_crit\n" + format_number(z_crit, precision) + "\n";
        }
        case Format::table:
            break;
    }
    std::string out = "Z_crit = " + format_number(z_crit, precision) + "\n";
    if (scale) {
        out += "scale  = " + format_number(*scale, precision) +
               "  (max |Z_eff| reaches Z_crit at scale * params)\n";
    }
    return out;
}

std::string render_verify(const RunConfig& config) {
    const CouplingMatrix a = coupling_of(config);
    const Spectrum analytic = spectrum(a, config.s_max, config.tol);
    if (!analytic.all_real) {
        throw BrokenSymmetry("verify: coupling matrix has complex effective charges");
    }
    std::optional<GeneralizedParity> parity;
    if (!config.unconstrained) {
        parity = make_parity(channels(config), rotation(config));
    }
    ValidationOptions options;
    options.n = config.grid_n;
    options.n_levels = config.levels;
    options.s_max = config.s_max;
    options.tol = config.tol;
    options.convergence = config.convergence;
    options.solver = config.full_oracle ? OracleSolver::full : OracleSolver::channel_schur;
    const ValidationReport report = validate(a, parity, options);
    const int precision = output_precision();
    switch (config.format) {
        case Format::json:
            return validation_to_json(report);
        case Format::csv: {
            std::string out = "quantity,value\nmax_rel_error," + format_number(report.max_rel_error, precision) + "\n";
            if (report.convergence_ratio) {
                out += "convergence_ratio," + format_number(*report.convergence_ratio, precision) + "\n";
            }
            for (const auto& [name, value] : report.residuals) {
                out += name + "," + format_number(value, precision) + "\n";
            }
            return out;
        }
        case Format::table:
            break;
    }
    std::string out = "K = " + std::to_string(report.k) + ", N = " + std::to_string(report.n) +
                      ", levels = " + std::to_string(report.n_levels) + "\n";
    out += "max relative error     " + format_number(report.max_rel_error, precision) + "\n";
    if (report.convergence_ratio) {
        out += "convergence ratio      " + format_number(*report.convergence_ratio, precision) + "\n";
    }
    for (const auto& [name, value] : report.residuals) {
        out += name + std::string(name.size() < 23 ? 23 - name.size() : 1, ' ') +
               format_number(value, precision) + "\n";
    }
    return out;
}

std::string render_metric(const RunConfig& config) {
    const CouplingMatrix a = coupling_of(config);
    for (const EffectiveCharge& c : effective_charges(a)) {
        if (!c.is_real) {
            throw BrokenSymmetry("metric: coupling matrix has complex effective charges");
        }
    }
    const DiscretizedHamiltonian h = discretize(a, config.grid_n);
    const std::vector<BiorthogonalPair> pairs = biorthogonal_basis(h);
    const MetricTheta theta = build_metric(pairs);
    const MetricDiagnostics d = metric_diagnostics(theta, h);
    const int precision = output_precision();
    switch (config.format) {
        case Format::json: {
            json doc = {{"K", h.k},
                        {"N", h.n},
                        {"hermiticity", d.hermiticity},
                        {"min_eigenvalue", d.min_eigenvalue},
                        {"quasi_hermiticity", d.quasi_hermiticity}};
            return doc.dump(2) + "\n";
        }
        case Format::csv:
            return "quantity,value\nhermiticity," + format_number(d.hermiticity, precision) +
                   "\nmin_eigenvalue," + format_number(d.min_eigenvalue, precision) +
                   "\nquasi_hermiticity," + format_number(d.quasi_hermiticity, precision) + "\n";
        case Format::table:
            break;
    }
    return "K = " + std::to_string(h.k) + ", N = " + std::to_string(h.n) + "\n" +
           "||Theta - Theta^+|| / ||Theta||          " + format_number(d.hermiticity, precision) + "\n" +
           "min eigenvalue of Theta                 " + format_number(d.min_eigenvalue, precision) + "\n" +
           "||Theta H - H^+ Theta|| / (||Theta|| ||H||) " + format_number(d.quasi_hermiticity, precision) + "\n";
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Coupled-channel PT-symmetric square wells: patterns, spectra, validation", "ptwell"};
    app.require_subcommand(1);

    RunConfig config;
    std::vector<std::string> assignments;
    std::string format = "table";
    std::optional<int> k;
    std::optional<int> l;

    const std::map<std::string, Format> formats{
        {"table", Format::table}, {"csv", Format::csv}, {"json", Format::json}};

    auto add_common = [&](CLI::App* sub, bool needs_k) {
        auto* kopt = sub->add_option("--k", k, "Number of channels K");
        if (needs_k) {
            kopt->required();
        }
        sub->add_option("--l", l, "Rotation index L of the pseudo-parity (default 1, or 0 for K = 1)");
        sub->add_option("--set", assignments, "Coupling parameter LABEL=VALUE (repeatable)");
        sub->add_flag("--unconstrained", config.unconstrained,
                      "Leave all K^2 couplings free instead of solving the pseudo-Hermiticity constraint");
        sub->add_option("--format", format, "Output format: table, csv or json")
            ->check(CLI::IsMember({"table", "csv", "json"}));
        sub->add_option("--output,-o", config.output_path, "Write the result to this file");
    };
    auto add_spectral = [&](CLI::App* sub) {
        sub->add_option("--smax", config.s_max, "Root scan cutoff in s");
        sub->add_option("--tol", config.tol, "Root residual tolerance");
    };

    auto* pattern = app.add_subcommand("pattern", "Print the coupling pattern allowed by the pseudo-parity");
    add_common(pattern, true);
    auto* spec = app.add_subcommand("spectrum", "Bound-state roots of the secular system");
    add_common(spec, true);
    add_spectral(spec);
    auto* critical = app.add_subcommand("critical", "Critical coupling, or the scaling that reaches it");
    add_common(critical, false);
    auto* verify = app.add_subcommand("verify", "Compare the analytic spectrum with finite differences");
    add_common(verify, true);
    add_spectral(verify);
    verify->add_option("--grid-n", config.grid_n, "Interior grid points per channel (even)");
    verify->add_option("--levels", config.levels, "Number of lowest levels compared");
    verify->add_flag("--convergence", config.convergence, "Also compare at grid-n / 2 and report the error ratio");
    verify->add_flag("--full-oracle", config.full_oracle,
                     "Diagonalize the whole (K N) x (K N) matrix instead of channel blocks");
    auto* metric = app.add_subcommand("metric", "Build the metric Theta on the discretized model");
    add_common(metric, true);
    metric->add_option("--grid-n", config.grid_n, "Interior grid points per channel (even)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw InvalidInput(e.what());
    }

    if (pattern->parsed()) {
        config.command = Command::pattern;
    } else if (spec->parsed()) {
        config.command = Command::spectrum;
    } else if (critical->parsed()) {
        config.command = Command::critical;
    } else if (verify->parsed()) {
        config.command = Command::verify;
    } else {
        config.command = Command::metric;
    }
    config.k = k;
    config.l = l;
    config.format = formats.at(format);
    for (const std::string& text : assignments) {
        const auto [label, value] = parse_assignment(text);
        if (!config.params.emplace(label, value).second) {
            throw InvalidInput("--set " + label + " given more than once");
        }
    }
    return config;
}

void validate(const RunConfig& config) {
    if (config.command != Command::critical && !config.k) {
        throw InvalidInput("--k is required");
    }
    if (config.k && *config.k < 1) {
        throw InvalidInput("--k must be >= 1");
    }
    if (config.l && !config.k) {
        throw InvalidInput("--l needs --k");
    }
    if (!config.params.empty() && !config.k) {
        throw InvalidInput("--set needs --k");
    }
    if (config.k) {
        const int l = rotation(config);
        if (l < 0 || l >= *config.k) {
            throw InvalidInput("--l must lie in [0, K)");
        }
    }
    if (!(config.s_max > 0.0) || !std::isfinite(config.s_max)) {
        throw InvalidInput("--smax must be positive");
    }
    if (!(config.tol > 0.0)) {
        throw InvalidInput("--tol must be positive");
    }
    if (config.grid_n < 4 || config.grid_n % 2 != 0) {
        throw InvalidInput("--grid-n must be even and >= 4");
    }
    if (config.convergence && (config.grid_n / 2) % 2 != 0) {
        throw InvalidInput("--convergence needs --grid-n divisible by 4");
    }
    if (config.levels < 1) {
        throw InvalidInput("--levels must be >= 1");
    }
    if (config.k && (config.command != Command::pattern)) {
        const CouplingPattern pattern = pattern_of(config);
        if (config.command != Command::critical || !config.params.empty()) {
            for (const auto& label : pattern.labels) {
                if (!config.params.count(label)) {
                    throw InvalidInput("missing --set " + label + "=VALUE");
                }
            }
        }
        for (const auto& [label, value] : config.params) {
            if (std::find(pattern.labels.begin(), pattern.labels.end(), label) == pattern.labels.end()) {
                throw InvalidInput("unknown label '" + label + "'; run `ptwell pattern` to list labels");
            }
        }
    }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
        std::string result;
        switch (config.command) {
            case Command::pattern:
                result = render_pattern(config);
                break;
            case Command::spectrum:
                result = render_spectrum(config);
                break;
            case Command::critical:
                result = render_critical(config);
                break;
            case Command::verify:
                result = render_verify(config);
                break;
            case Command::metric:
                result = render_metric(config);
                break;
        }
        if (config.output_path.empty()) {
            out << result;
        } else {
            std::ofstream file(config.output_path, std::ios::binary);
            if (!file) {
                throw InvalidInput("cannot open output file '" + config.output_path + "'");
            }
            file << result;
        }
        return kOk;
    } catch (const InvalidInput& e) {
        err << "ptwell: invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const BrokenSymmetry& e) {
        err << "ptwell: broken symmetry: " << e.what() << '\n';
        return kBrokenSymmetry;
    } catch (const NumericalFailure& e) {
        err << "ptwell: numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::optional<RunConfig> config;
    try {
        config = parse_args(argc, argv, out);
    } catch (const InvalidInput& e) {
        err << "ptwell: " << e.what() << '\n';
        return kInvalidInput;
    }
    if (!config) {
        return kOk;
    }
    return run(*config, out, err);
}

}  // namespace ptwell::cli
