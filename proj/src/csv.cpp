#include "etk/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "etk/error.hpp"

namespace etk {

namespace {

std::string real(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double parse_real(const std::string& field) {
    if (field == "nan") return std::nan("");
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != field.size() || field.empty()) throw Error(ErrorKind::Io, "malformed number '" + field + "' in CSV");
    return value;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string format_csv(const SweepTable& table) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : table.rows) {
        out += real(r.param) + ',' + real(r.E_oracle) + ',' + (r.oracle_converged ? "true" : "false") + ',' +
               real(r.E_et) + ',' + real(r.E_improved) + ',' + real(r.phi) + ',' + real(r.rho0_et) + ',' +
               std::string(to_string(r.character)) + ',' + real(r.rel_err_et) + ',' + real(r.rel_err_improved) + '\n';
    }
    return out;
}

void write_csv(const SweepTable& table, const std::string& path) {
    if (table.rows.empty()) throw Error(ErrorKind::Usage, "refusing to write an empty table");
    const std::string text = format_csv(table);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    file << text;
    file.flush();
    if (!file) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

SweepTable read_csv(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(file, line) || line != kCsvHeader) throw Error(ErrorKind::Io, "unexpected CSV header in '" + path + "'");
    SweepTable table;
    while (std::getline(file, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 10) throw Error(ErrorKind::Io, "CSV row has " + std::to_string(f.size()) + " fields");
        SweepRow r;
        r.param = parse_real(f[0]);
        r.E_oracle = parse_real(f[1]);
        if (f[2] != "true" && f[2] != "false") throw Error(ErrorKind::Io, "malformed flag '" + f[2] + "'");
        r.oracle_converged = f[2] == "true";
        r.E_et = parse_real(f[3]);
        r.E_improved = parse_real(f[4]);
        r.phi = parse_real(f[5]);
        r.rho0_et = parse_real(f[6]);
        const auto character = parse_character(f[7]);
        if (!character) throw Error(ErrorKind::Io, "unknown character '" + f[7] + "'");
        r.character = *character;
        r.rel_err_et = parse_real(f[8]);
        r.rel_err_improved = parse_real(f[9]);
        table.rows.push_back(std::move(r));
    }
    return table;
}

}  // namespace etk
