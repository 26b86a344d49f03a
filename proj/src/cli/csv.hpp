#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "core/field.hpp"

namespace kqm::cli {

// Doubles are written with 17 significant digits; text cells are quoted
// when they hold a comma, quote or line break.
using CsvCell = std::variant<double, long long, std::string>;

std::string csv_escape(const std::string& s);
std::string csv_format(const CsvCell& c);

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<CsvCell>& cells);
    void close();
    size_t columns() const { return ncol_; }

  private:
    std::ofstream out_;
    std::string path_;
    size_t ncol_;
};

// x', p', value triplets in grid order (x outer, p inner).
void write_field_csv(const std::string& path, const PhaseDensity& rho, const std::string& value_label);

// Splits one CSV record (no embedded line breaks) into its fields.
std::vector<std::string> csv_split(const std::string& line);

}  // namespace kqm::cli
