#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace kqm::cli {

struct LineSeries {
    std::string name;
    std::vector<double> x, y;
};

struct LinePlot {
    std::string title, xlabel, ylabel;
    bool log_y = false;
    std::vector<LineSeries> series;
    std::vector<std::string> notes;  // printed under the legend
};

struct HeatMap {
    std::string title, xlabel, ylabel;
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    Eigen::MatrixXd values;  // rows follow y, columns follow x
    std::vector<std::string> notes;
};

std::string line_plot_svg(const LinePlot& plot);
// Panels side by side; a diverging scale is used when a panel has negative values.
std::string heat_maps_svg(const std::vector<HeatMap>& maps);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace kqm::cli
