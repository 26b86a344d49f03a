#include "analysis/fit.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace kqm {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionError("fit_line: size mismatch");
    const size_t n = x.size();
    if (n < 3) throw InsufficientSignal("fit_line: fewer than 3 points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InsufficientSignal("fit_line: abscissae are all equal");
    LineFit f;
    f.n = int(n);
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        sse += r * r;
    }
    f.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    f.slope_stderr = std::sqrt(sse / double(n - 2) / sxx);
    return f;
}

DecayFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y, double t_start, double t_end,
                         double floor) {
    if (t.size() != y.size()) throw DimensionError("fit_exponential: size mismatch");
    std::vector<double> tx, ly;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_start || t[i] > t_end) continue;
        if (!(y[i] > floor) || !std::isfinite(y[i])) continue;
        tx.push_back(t[i]);
        ly.push_back(std::log(y[i]));
    }
    if (tx.size() < 3) throw InsufficientSignal("fit_exponential: series below the noise floor in the window");
    LineFit lf = fit_line(tx, ly);
    DecayFit d;
    d.rate = lf.slope;
    d.amplitude = std::exp(lf.intercept);
    d.r_squared = lf.r_squared;
    d.rate_stderr = lf.slope_stderr;
    d.t_start = tx.front();
    d.t_end = tx.back();
    d.n = lf.n;
    return d;
}

}  // namespace kqm
