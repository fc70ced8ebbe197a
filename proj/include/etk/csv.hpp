#pragma once

#include <string>

#include "etk/experiments.hpp"

namespace etk {

/// Column order of every sweep CSV.
inline constexpr const char* kCsvHeader =
    "param,E_oracle,oracle_converged,E_et,E_improved,phi,rho0_et,character,rel_err_et,rel_err_improved";

/// Header plus one line per row; reals at 12 significant digits, "\n" endings.
std::string format_csv(const SweepTable& table);

/// Writes format_csv(table). An empty table is rejected before the file is opened.
void write_csv(const SweepTable& table, const std::string& path);

/// Parses a file produced by write_csv. Only the serialised columns are filled.
SweepTable read_csv(const std::string& path);

}  // namespace etk
