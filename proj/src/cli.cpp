#include "etk/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "etk/csv.hpp"
#include "etk/error.hpp"
#include "etk/et_core.hpp"
#include "etk/experiments.hpp"
#include "etk/improvement.hpp"
#include "etk/model.hpp"

namespace etk {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kParamNames[] = {"G", "beta", "c", "d", "alpha", "C"};

std::string real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Ordered key/value output, printed as "key=value" lines or one JSON object.
class Report {
public:
    void add(const std::string& key, double value) { items_.push_back({key, value}); }
    void add(const std::string& key, const std::string& value) { items_.push_back({key, value}); }
    void add(const std::string& key, bool value) { items_.push_back({key, value}); }
    void add(const std::string& key, int value) { items_.push_back({key, value}); }

    std::string render(const std::string& format) const {
        if (format == "json") {
            Json j = Json::object();
            for (const auto& [k, v] : items_) j[k] = v;
            return j.dump(2) + "\n";
        }
        std::string out;
        for (const auto& [k, v] : items_) {
            out += k + '=';
            if (v.is_number_integer()) {
                out += std::to_string(v.get<long>());
            } else if (v.is_number()) {
                out += real(v.get<double>());
            } else if (v.is_boolean()) {
                out += v.get<bool>() ? "true" : "false";
            } else {
                out += v.get<std::string>();
            }
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::pair<std::string, Json>> items_;
};

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
    if (config.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::Io, "cannot open '" + config.out + "' for writing");
    file << text;
    if (!file.flush()) throw Error(ErrorKind::Io, "write to '" + config.out + "' failed");
}

SystemSpec build_system(const RunConfig& config) {
    if (config.potential.empty()) throw Error(ErrorKind::Usage, "--potential is required");
    PotentialSpec potential = make_potential(config.potential, config.params);
    return make_system(config.N, config.m, config.D, std::move(potential),
                       QuantumNumbers::parse(config.state, config.N));
}

void add_solution(Report& report, const EnvelopeSolution& s) {
    report.add("E", s.energy);
    report.add("rho0", s.rho0);
    report.add("p0", s.p0);
    report.add("Q", s.Q_used);
    report.add("phi", s.phi_used);
}

// Turns the JSON config into flag tokens. They are placed ahead of the real
// command-line flags, and every option keeps its last value, so flags win.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw Error(ErrorKind::Usage, "cannot read config file '" + path + "'");
    Json j;
    try {
        j = Json::parse(file);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::Usage, "config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::Usage, "config file must hold a JSON object");
    std::vector<std::string> tokens;
    for (const auto& [key, value] : j.items()) {
        if (key == "config") throw Error(ErrorKind::Usage, "config files cannot nest");
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
        } else if (value.is_number()) {
            tokens.push_back(flag);
            tokens.push_back(value.dump());
        } else if (value.is_string()) {
            tokens.push_back(flag);
            tokens.push_back(value.get<std::string>());
        } else {
            throw Error(ErrorKind::Usage, "config key '" + key + "' must be a number, string or boolean");
        }
    }
    return tokens;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty() || args.size() < 2) return args;
    std::vector<std::string> out(args.begin(), args.begin() + 2);
    const auto tokens = config_tokens(path);
    out.insert(out.end(), tokens.begin(), tokens.end());
    out.insert(out.end(), args.begin() + 2, args.end());
    return out;
}

struct HelpRequest {
    std::string text;
};

void run_sweep_command(const RunConfig& config, std::ostream& out) {
    if (config.figure.empty()) throw Error(ErrorKind::Usage, "--figure is required");
    const Figure figure = parse_figure(config.figure);
    const std::vector<double> grid = config.grid.empty() ? default_grid(figure) : parse_grid(config.grid);
    SweepOptions options;
    options.oracle = config.oracle;
    options.run_oracle = config.run_oracle;
    options.threads = config.threads;
    const std::string format = config.format.empty() ? "csv" : config.format;
    if (format != "csv" && format != "json") throw Error(ErrorKind::Usage, "sweep output is csv or json");

    const SweepTable table = run_sweep(figure, grid, options);
    if (!config.summary.empty()) {
        std::ofstream file(config.summary, std::ios::binary | std::ios::trunc);
        if (!file) throw Error(ErrorKind::Io, "cannot open '" + config.summary + "' for writing");
        file << summary_json(summarize(table));
    }
    if (format == "json") {
        emit(config, out, summary_json(summarize(table)));
    } else if (config.out.empty()) {
        out << format_csv(table);
    } else {
        write_csv(table, config.out);
    }
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v)) {
            throw Error(ErrorKind::Usage, "malformed grid value '" + s + "' in '" + text + "'");
        }
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(number(item));
        if (parts.size() != 3) throw Error(ErrorKind::Usage, "grid range must be start:stop:step");
        const double start = parts[0], stop = parts[1], step = parts[2];
        if (!(step > 0.0) || stop < start) throw Error(ErrorKind::Usage, "grid range needs step > 0 and stop >= start");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 100000) throw Error(ErrorKind::Usage, "grid has too many points");
        for (long i = 0; i < count; ++i) out.push_back(std::round((start + i * step) * 1e10) / 1e10);
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(number(item));
    }
    if (out.empty()) throw Error(ErrorKind::Usage, "grid is empty");
    return out;
}

RunConfig parse_run_config(const std::vector<std::string>& raw) {
    const std::vector<std::string> args = expand_config(raw);
    RunConfig cfg;
    std::map<std::string, std::optional<double>> params;
    std::string config_path;
    std::optional<int> oracle_n;
    bool quadrature = false;
    bool no_oracle = false;

    CLI::App app{"Envelope theory solver and three-boson variational oracle", "etk"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON file with the same keys as the flags");
        sub->add_option("--out", cfg.out, "Write output to this file");
        sub->add_option("--format", cfg.format, "Output format");
    };
    auto system = [&](CLI::App* sub) {
        sub->add_option("--potential", cfg.potential, "Potential family id");
        for (const char* name : kParamNames) {
            sub->add_option(std::string("--") + name, params[name], std::string("Potential parameter ") + name);
        }
        sub->add_option("--N", cfg.N, "Number of particles");
        sub->add_option("--m", cfg.m, "Particle mass");
        sub->add_option("--D", cfg.D, "Space dimension");
        sub->add_option("--state", cfg.state, "bgs or n,l;n,l;...");
    };
    auto oracle_flags = [&](CLI::App* sub) {
        sub->add_option("--oracle-n", oracle_n, "Width grid size per Jacobi coordinate");
        sub->add_option("--oracle-a-min", cfg.oracle.a_min, "Smallest relative width");
        sub->add_option("--oracle-a-max", cfg.oracle.a_max, "Largest relative width");
        sub->add_option("--oracle-tol", cfg.oracle.tol_rel, "Relative convergence tolerance");
        sub->add_option("--oracle-cap", cfg.oracle.cond_cap, "Overlap conditioning cap");
        sub->add_option("--oracle-refinements", cfg.oracle.max_refinements, "Grid refinements");
        sub->add_option("--oracle-length", cfg.oracle.length_scale, "Length scale (0: automatic)");
        sub->add_flag("--oracle-quadrature", quadrature, "Quadrature for every potential element");
    };

    auto* solve = app.add_subcommand("solve", "Classical envelope solution");
    auto* improve = app.add_subcommand("improve", "Envelope solution with the computed or given phi");
    auto* phi = app.add_subcommand("phi", "Dominantly-orbital phi report");
    auto* classify = app.add_subcommand("classify", "Variational character of the envelope energy");
    auto* oracle = app.add_subcommand("oracle", "Three-boson variational ground state");
    auto* sweep = app.add_subcommand("sweep", "Figure sweep as CSV");
    for (auto* sub : {solve, improve, phi, classify, oracle}) {
        common(sub);
        system(sub);
    }
    improve->add_option("--phi", cfg.phi, "Override phi");
    oracle_flags(oracle);

    common(sweep);
    oracle_flags(sweep);
    sweep->add_option("--figure", cfg.figure, "npp|tcoulomb|exciton|cubic-linear|cubic-log|cubic-gauss");
    sweep->add_option("--grid", cfg.grid, "start:stop:step or v1,v2,...");
    sweep->add_flag("--no-oracle", no_oracle, "Skip the oracle column");
    sweep->add_option("--threads", cfg.threads, "Worker threads (0: ETK_THREADS or all cores)");
    sweep->add_option("--summary", cfg.summary, "Write a JSON summary here");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const auto parsed = app.get_subcommands();
        throw HelpRequest{parsed.empty() ? app.help() : parsed.front()->help()};
    }

    cfg.command = app.get_subcommands().front()->get_name();
    for (const auto& [name, value] : params) {
        if (value) cfg.params[name] = *value;
    }
    if (oracle_n) cfg.oracle.n_a = cfg.oracle.n_b = *oracle_n;
    cfg.oracle.analytic_elements = !quadrature;
    cfg.run_oracle = !no_oracle;
    cfg.oracle.validate();
    return cfg;
}

void run(const RunConfig& config, std::ostream& out) {
    if (config.command == "sweep") {
        run_sweep_command(config, out);
        return;
    }
    const std::string format = config.format.empty() ? "text" : config.format;
    if (format != "text" && format != "json") throw Error(ErrorKind::Usage, "output format is text or json");

    const SystemSpec spec = build_system(config);
    Report report;
    if (config.command == "solve") {
        const EnvelopeSolution s = solve_compact(spec, 2.0);
        add_solution(report, s);
        report.add("character", std::string(to_string(s.character)));
    } else if (config.command == "improve") {
        add_solution(report, solve_improved(spec, config.phi));
    } else if (config.command == "phi") {
        const PhiReport r = compute_phi(spec);
        report.add("phi", r.phi);
        report.add("p_tilde", r.p_tilde);
        report.add("rho_tilde", r.rho_tilde);
        report.add("mu", r.mu);
        report.add("k", r.k);
        report.add("lambda", r.lambda);
    } else if (config.command == "classify") {
        const auto samples = default_curvature_samples();
        report.add("bT", std::string(to_string(bT_curvature_sign(spec.kinematics, samples))));
        report.add("bV", std::string(to_string(bV_curvature_sign(spec.potential, samples))));
        report.add("character", std::string(to_string(classify_character(spec.kinematics, spec.potential))));
    } else if (config.command == "oracle") {
        const OracleResult r = oracle_ground_energy(spec, config.oracle);
        report.add("E", r.energy);
        report.add("basis_size", r.basis_size);
        report.add("converged", r.converged);
        report.add("delta_last", r.delta_last);
        report.add("bound", r.bound);
        emit(config, out, report.render(format));
        if (!r.bound) throw Error(ErrorKind::NoBoundState, "no bound state below the continuum");
        if (!r.converged) {
            throw Error(ErrorKind::Domain, "oracle did not converge (last change " + real(r.delta_last) + ")");
        }
        return;
    } else {
        throw Error(ErrorKind::Usage, "unknown command '" + config.command + "'");
    }
    emit(config, out, report.render(format));
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        run(parse_run_config(args), out);
        return 0;
    } catch (const HelpRequest& help) {
        out << help.text;
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::Usage ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace etk
