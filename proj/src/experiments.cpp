#include "etk/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "etk/error.hpp"
#include "etk/et_core.hpp"
#include "etk/improvement.hpp"

namespace etk {

namespace {

constexpr std::array<std::string_view, 6> kFigureIds{"npp",       "tcoulomb",  "exciton",
                                                     "cubic-linear", "cubic-log", "cubic-gauss"};

std::vector<double> stepped(double start, int count, double step) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        // Snap to ten decimals so printed grids read as typed.
        out.push_back(std::round((start + i * step) * 1e10) / 1e10);
    }
    return out;
}

SweepRow evaluate_row(Figure figure, double param, const SweepOptions& options) {
    SweepRow row;
    row.param = param;
    row.system = figure_system(figure, param);
    row.et = solve_compact(row.system, 2.0);
    row.improved = solve_improved(row.system);
    row.E_et = row.et.energy;
    row.E_improved = row.improved.energy;
    row.phi = row.improved.phi_used;
    row.rho0_et = row.et.rho0;
    row.character = row.et.character;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.E_oracle = nan;
    row.rel_err_et = nan;
    row.rel_err_improved = nan;
    if (options.run_oracle) {
        const OracleResult oracle = oracle_ground_energy(row.system, options.oracle);
        row.E_oracle = oracle.energy;
        row.oracle_converged = oracle.converged && oracle.bound;
        row.oracle_history = oracle.history;
        if (oracle.energy != 0.0) {
            row.rel_err_et = relative_error(row.E_et, oracle.energy);
            row.rel_err_improved = relative_error(row.E_improved, oracle.energy);
        }
    }
    return row;
}

}  // namespace

std::span<const std::string_view> figure_ids() { return kFigureIds; }

Figure parse_figure(std::string_view id) {
    for (std::size_t i = 0; i < kFigureIds.size(); ++i) {
        if (kFigureIds[i] == id) return static_cast<Figure>(i);
    }
    throw Error(ErrorKind::Usage, "unknown figure '" + std::string(id) + "'");
}

std::string_view to_string(Figure figure) { return kFigureIds[static_cast<std::size_t>(figure)]; }

std::vector<double> default_grid(Figure figure) {
    switch (figure) {
        case Figure::NegativePower: return stepped(-1.5, 29, 0.05);
        case Figure::TruncCoulomb: return stepped(0.1, 50, 0.1);
        case Figure::Exciton: return stepped(0.0, 51, 0.1);
        case Figure::CubicLinear:
        case Figure::CubicLog:
        case Figure::CubicGauss: return stepped(0.0, 51, 0.02);
    }
    return {};
}

SystemSpec figure_system(Figure figure, double param) {
    switch (figure) {
        case Figure::NegativePower:
            if (!(param > -2.0 && param < 0.0)) throw Error(ErrorKind::Usage, "npp grid must lie in (-2, 0)");
            return three_boson_system(power_law(1.0, param));
        case Figure::TruncCoulomb:
            if (!(param > 0.0)) throw Error(ErrorKind::Usage, "tcoulomb grid must be positive");
            return three_boson_system(truncated_coulomb(1.0, param));
        case Figure::Exciton:
            if (!(param >= 0.0)) throw Error(ErrorKind::Usage, "exciton grid must be non-negative");
            return three_boson_system(exciton(1.0, param));
        case Figure::CubicLinear: return three_boson_system(cubic_linear(1.0, 1.0, param));
        case Figure::CubicLog: return three_boson_system(cubic_log(1.0, 1.0, param));
        case Figure::CubicGauss: return three_boson_system(cubic_gauss(1.0, 10.0, param));
    }
    throw Error(ErrorKind::Usage, "unknown figure");
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ETK_THREADS")) {
        const int value = std::atoi(env);
        if (value > 0) return value;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SweepTable run_sweep(Figure figure, std::span<const double> grid, const SweepOptions& options) {
    if (grid.empty()) throw Error(ErrorKind::Usage, "sweep grid is empty");
    std::vector<double> params(grid.begin(), grid.end());
    std::sort(params.begin(), params.end());
    for (double p : params) (void)figure_system(figure, p);  // validate before any work

    SweepTable table;
    table.figure = std::string(to_string(figure));
    table.rows.resize(params.size());

    const int workers = std::min<int>(resolve_threads(options.threads), static_cast<int>(params.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < params.size(); i = next++) {
            try {
                table.rows[i] = evaluate_row(figure, params[i], options);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

SweepTable sweep_npp(std::span<const double> beta_grid, const SweepOptions& options) {
    return run_sweep(Figure::NegativePower, beta_grid, options);
}

SweepTable sweep_trunc_coulomb(std::span<const double> d_grid, const SweepOptions& options) {
    return run_sweep(Figure::TruncCoulomb, d_grid, options);
}

SweepTable sweep_exciton(std::span<const double> d_grid, const SweepOptions& options) {
    return run_sweep(Figure::Exciton, d_grid, options);
}

SweepTable sweep_mix(std::string_view family, std::span<const double> C_grid, const SweepOptions& options) {
    if (family != "cubic-linear" && family != "cubic-log" && family != "cubic-gauss") {
        throw Error(ErrorKind::Usage, "unknown mix family '" + std::string(family) + "'");
    }
    return run_sweep(parse_figure(family), C_grid, options);
}

std::vector<double> crossing_points(const SweepTable& table) {
    std::vector<double> out;
    const SweepRow* prev = nullptr;
    double prev_gap = 0.0;
    for (const auto& row : table.rows) {
        const double gap = row.E_et - row.E_oracle;
        if (!std::isfinite(gap)) continue;
        if (gap == 0.0) {
            out.push_back(row.param);
        } else if (prev && prev_gap != 0.0 && (gap < 0.0) != (prev_gap < 0.0)) {
            const double t = prev_gap / (prev_gap - gap);
            out.push_back(prev->param + t * (row.param - prev->param));
        }
        prev = &row;
        prev_gap = gap;
    }
    return out;
}

SweepSummary summarize(const SweepTable& table) {
    SweepSummary s;
    s.figure = table.figure;
    s.rows = table.rows.size();
    s.crossings = crossing_points(table);
    const double inf = std::numeric_limits<double>::infinity();
    s.min_rel_err_et = s.min_rel_err_improved = inf;
    s.max_rel_err_et = s.max_rel_err_improved = -inf;
    for (const auto& row : table.rows) {
        if (row.oracle_converged) ++s.oracle_converged;
        if (std::isfinite(row.rel_err_et)) {
            s.min_rel_err_et = std::min(s.min_rel_err_et, row.rel_err_et);
            s.max_rel_err_et = std::max(s.max_rel_err_et, row.rel_err_et);
        }
        if (std::isfinite(row.rel_err_improved)) {
            s.min_rel_err_improved = std::min(s.min_rel_err_improved, row.rel_err_improved);
            s.max_rel_err_improved = std::max(s.max_rel_err_improved, row.rel_err_improved);
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(s.min_rel_err_et)) s.min_rel_err_et = s.max_rel_err_et = nan;
    if (!std::isfinite(s.min_rel_err_improved)) s.min_rel_err_improved = s.max_rel_err_improved = nan;
    return s;
}

std::string summary_json(const SweepSummary& s) {
    nlohmann::ordered_json j;
    j["figure"] = s.figure;
    j["rows"] = s.rows;
    j["oracle_converged"] = s.oracle_converged;
    j["crossings"] = s.crossings;
    j["max_rel_err_et"] = s.max_rel_err_et;
    j["min_rel_err_et"] = s.min_rel_err_et;
    j["max_rel_err_improved"] = s.max_rel_err_improved;
    j["min_rel_err_improved"] = s.min_rel_err_improved;
    return j.dump(2) + "\n";
}

}  // namespace etk
