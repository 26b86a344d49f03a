#include "cli/csv.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace kqm::cli {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_format(const CsvCell& c) {
    if (const auto* d = std::get_if<double>(&c)) return fmt::format("{:.17g}", *d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return csv_escape(std::get<std::string>(c));
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), ncol_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    std::vector<CsvCell> h(header.begin(), header.end());
    row(h);
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
    if (cells.size() != ncol_) throw std::logic_error("csv row width mismatch in " + path_);
    std::string line;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += csv_format(cells[i]);
    }
    line += "\r\n";
    out_ << line;
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) throw std::runtime_error("write failed for " + path_);
}

void write_field_csv(const std::string& path, const PhaseDensity& rho, const std::string& value_label) {
    const PhaseGrid& g = *rho.grid;
    CsvWriter w(path, {"x' [-]", "p' [-]", value_label});
    for (int i = 0; i < g.nx(); ++i)
        for (int k = 0; k < g.n_pnodes(); ++k) w.row({g.x(i), g.p(k), rho.values(k, i)});
    w.close();
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else if (c != '\r' && c != '\n') {
            out.back() += c;
        }
    }
    return out;
}

}  // namespace kqm::cli
