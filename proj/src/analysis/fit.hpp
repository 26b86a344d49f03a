#pragma once

#include <vector>

namespace kqm {

struct LineFit {
    double slope = 0.0, intercept = 0.0;
    double r_squared = 0.0;
    double slope_stderr = 0.0;
    int n = 0;
};

// Ordinary least squares y = intercept + slope x. Needs >= 3 points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// y ~ amplitude e^{rate t}, fitted on log y over the samples with
// t in [t_start, t_end] and y above `floor`.
struct DecayFit {
    double rate = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
    double rate_stderr = 0.0;
    double t_start = 0.0, t_end = 0.0;  // span of the samples used
    int n = 0;
};

DecayFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y, double t_start, double t_end,
                         double floor = 1e-10);

}  // namespace kqm
