#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etk/character.hpp"
#include "etk/model.hpp"
#include "etk/oracle.hpp"

namespace etk {

/// One grid point: oracle reference, classical and improved envelope energies.
struct SweepRow {
    double param = 0.0;
    double E_oracle = 0.0;
    bool oracle_converged = false;
    double E_et = 0.0;
    double E_improved = 0.0;
    double phi = 0.0;
    double rho0_et = 0.0;
    VariationalCharacter character = VariationalCharacter::Undefined;
    double rel_err_et = 0.0;
    double rel_err_improved = 0.0;

    // Not serialised; kept for residual and monotonicity checks.
    SystemSpec system;
    EnvelopeSolution et;
    EnvelopeSolution improved;
    std::vector<double> oracle_history;
};

struct SweepTable {
    std::string figure;
    std::vector<SweepRow> rows;
};

/// Paper figures, addressable as `sweep --figure <id>`.
enum class Figure { NegativePower, TruncCoulomb, Exciton, CubicLinear, CubicLog, CubicGauss };

std::span<const std::string_view> figure_ids();
Figure parse_figure(std::string_view id);
std::string_view to_string(Figure figure);

/// Default parameter grid of a figure.
std::vector<double> default_grid(Figure figure);

/// The three-boson system at one grid point of a figure.
SystemSpec figure_system(Figure figure, double param);

struct SweepOptions {
    GaussianBasisConfig oracle;
    bool run_oracle = true;
    int threads = 0;  // 0: ETK_THREADS or hardware concurrency
};

/// Worker count: explicit value, else ETK_THREADS, else hardware concurrency.
int resolve_threads(int requested);

SweepTable run_sweep(Figure figure, std::span<const double> grid, const SweepOptions& options = {});

SweepTable sweep_npp(std::span<const double> beta_grid, const SweepOptions& options = {});
SweepTable sweep_trunc_coulomb(std::span<const double> d_grid, const SweepOptions& options = {});
SweepTable sweep_exciton(std::span<const double> d_grid, const SweepOptions& options = {});
/// family: cubic-linear, cubic-log or cubic-gauss.
SweepTable sweep_mix(std::string_view family, std::span<const double> C_grid, const SweepOptions& options = {});

/// Linearly interpolated parameter values where E_et - E_oracle changes sign.
std::vector<double> crossing_points(const SweepTable& table);

struct SweepSummary {
    std::string figure;
    std::size_t rows = 0;
    std::size_t oracle_converged = 0;
    std::vector<double> crossings;
    double max_rel_err_et = 0.0;
    double min_rel_err_et = 0.0;
    double max_rel_err_improved = 0.0;
    double min_rel_err_improved = 0.0;
};

SweepSummary summarize(const SweepTable& table);

/// JSON rendering of a summary (two-space indent, trailing newline).
std::string summary_json(const SweepSummary& summary);

}  // namespace etk
