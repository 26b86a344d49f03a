#include "cli/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace kqm::cli {

namespace {

constexpr double kW = 640, kH = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string tick(double v) { return fmt::format("{:.3g}", v); }

struct Rgb {
    double r, g, b;
};

Rgb mix(Rgb a, Rgb b, double t) { return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t}; }

std::string hex(Rgb c) {
    auto q = [](double v) { return int(std::lround(std::clamp(v, 0.0, 1.0) * 255)); };
    return fmt::format("#{:02x}{:02x}{:02x}", q(c.r), q(c.g), q(c.b));
}

// t in [0,1]
Rgb sequential(double t) {
    static const Rgb stops[] = {{0.27, 0.00, 0.33}, {0.23, 0.32, 0.55}, {0.13, 0.57, 0.55}, {0.37, 0.79, 0.38},
                                {0.99, 0.91, 0.14}};
    t = std::clamp(t, 0.0, 1.0) * 4;
    const int i = std::min(3, int(t));
    return mix(stops[i], stops[i + 1], t - i);
}

// t in [-1,1]
Rgb diverging(double t) {
    t = std::clamp(t, -1.0, 1.0);
    const Rgb white{1, 1, 1}, blue{0.13, 0.40, 0.67}, red{0.70, 0.09, 0.17};
    return t < 0 ? mix(white, blue, -t) : mix(white, red, t);
}

}  // namespace

std::string line_plot_svg(const LinePlot& plot) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
    for (const auto& s : plot.series)
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && !(s.y[i] > 0))) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!(x1 >= x0)) x0 = 0, x1 = 1;
    if (!(y1 >= y0)) y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return kTop + (1 - (y - y0) / (y1 - y0)) * ph; };

    std::string o = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kW, kH);
    o += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2,
                     esc(plot.title));
    o += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                     kTop, pw, ph);
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        o += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", sx(xv), kTop + ph + 16,
                         tick(xv));
        o += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, sy(yv) + 4,
                         plot.log_y ? "1e" + tick(yv) : tick(yv));
    }
    o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2, kH - 10,
                     esc(plot.xlabel));
    o += fmt::format("<text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
                     kTop + ph / 2, kTop + ph / 2, esc(plot.ylabel + (plot.log_y ? " (log10)" : "")));
    for (size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* col = kColors[k % 8];
        std::string pts;
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && !(s.y[i] > 0))) continue;
            pts += fmt::format("{:.2f},{:.2f} ", sx(s.x[i]), sy(ty(s.y[i])));
        }
        o += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", col, pts);
        const double ly = kTop + 10 + 16 * double(k);
        o += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                         kW - kRight + 10, ly, kW - kRight + 30, ly, col);
        o += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kW - kRight + 34, ly + 4, esc(s.name));
    }
    double ny = kTop + 20 + 16 * double(plot.series.size());
    for (const auto& n : plot.notes) {
        o += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kW - kRight + 10, ny, esc(n));
        ny += 14;
    }
    return o + "</svg>\n";
}

std::string heat_maps_svg(const std::vector<HeatMap>& maps) {
    constexpr double pw = 300, ph = 300, gap = 90, top = 40, left = 60;
    const double width = left + maps.size() * (pw + gap);
    const double height = top + ph + 110;
    std::string o = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        width, height);
    for (size_t m = 0; m < maps.size(); ++m) {
        const HeatMap& h = maps[m];
        const double ox = left + m * (pw + gap);
        const Eigen::Index ny = h.values.rows(), nx = h.values.cols();
        // at most 150 cells per axis
        const Eigen::Index stx = std::max<Eigen::Index>(1, (nx + 149) / 150);
        const Eigen::Index sty = std::max<Eigen::Index>(1, (ny + 149) / 150);
        const double vmin = ny && nx ? h.values.minCoeff() : 0.0, vmax = ny && nx ? h.values.maxCoeff() : 1.0;
        const bool signed_scale = vmin < 0;
        const double amp = std::max(std::abs(vmin), std::abs(vmax));
        o += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n", ox + pw / 2,
                         esc(h.title));
        const double cw = pw / double((nx + stx - 1) / stx), ch = ph / double((ny + sty - 1) / sty);
        for (Eigen::Index j = 0; j < ny; j += sty)
            for (Eigen::Index i = 0; i < nx; i += stx) {
                const double v = h.values(j, i);
                const Rgb c = signed_scale ? diverging(amp > 0 ? v / amp : 0.0)
                                           : sequential(vmax > vmin ? (v - vmin) / (vmax - vmin) : 0.0);
                o += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                                 ox + double(i / stx) * cw, top + ph - double(j / sty + 1) * ch, cw + 0.05, ch + 0.05,
                                 hex(c));
            }
        o += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", ox,
                         top, pw, ph);
        o += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", ox, top + ph + 14, tick(h.x_lo));
        o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", ox + pw, top + ph + 14,
                         tick(h.x_hi));
        o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", ox + pw / 2, top + ph + 14,
                         esc(h.xlabel));
        o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", ox - 4, top + ph, tick(h.y_lo));
        o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", ox - 4, top + 10, tick(h.y_hi));
        o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", ox - 4, top + ph / 2,
                         esc(h.ylabel));
        // colour bar
        for (int k = 0; k < 50; ++k) {
            const double t = k / 49.0;
            const Rgb c = signed_scale ? diverging(2 * t - 1) : sequential(t);
            o += fmt::format("<rect x=\"{:.2f}\" y=\"{}\" width=\"{:.2f}\" height=\"10\" fill=\"{}\"/>\n",
                             ox + t * (pw - 6), top + ph + 24, pw / 49.0, hex(c));
        }
        o += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", ox, top + ph + 48,
                         tick(signed_scale ? -amp : vmin));
        o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", ox + pw, top + ph + 48,
                         tick(signed_scale ? amp : vmax));
        double ly = top + ph + 66;
        for (const auto& n : h.notes) {
            o += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", ox, ly, esc(n));
            ly += 14;
        }
    }
    return o + "</svg>\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    out.close();
    if (out.fail()) throw std::runtime_error("write failed for " + path);
}

}  // namespace kqm::cli
