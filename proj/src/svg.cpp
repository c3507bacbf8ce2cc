#include "comove/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace comove {

namespace {

// Cold-to-warm map: blue -> cyan -> yellow -> red over [0, 1].
std::string heat_color(double v) {
    v = std::clamp(v, 0.0, 1.0);
    double r;
    double g;
    double b;
    if (v < 1.0 / 3.0) {
        const double t = v * 3.0;
        r = 0.1;
        g = 0.2 + 0.8 * t;
        b = 0.9;
    } else if (v < 2.0 / 3.0) {
        const double t = (v - 1.0 / 3.0) * 3.0;
        r = 0.1 + 0.9 * t;
        g = 1.0;
        b = 0.9 * (1.0 - t);
    } else {
        const double t = (v - 2.0 / 3.0) * 3.0;
        r = 1.0;
        g = 1.0 - 0.8 * t;
        b = 0.0;
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r * 255.0 + 0.5),
                  static_cast<int>(g * 255.0 + 0.5), static_cast<int>(b * 255.0 + 0.5));
    return std::string(buf);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
}

} // namespace

void write_coherence_svg(const CoherenceField& field, const std::string& path) {
    const std::size_t rows = field.r2.rows();
    const std::size_t cols = field.r2.cols();
    const std::size_t col_bins = std::min<std::size_t>(cols, 220);
    const std::size_t row_bins = std::min<std::size_t>(rows, 120);

    const double margin = 40.0;
    const double plot_w = 880.0;
    const double plot_h = 440.0;
    const double width = plot_w + 2 * margin;
    const double height = plot_h + 2 * margin;
    const double cell_w = plot_w / static_cast<double>(col_bins);
    const double cell_h = plot_h / static_cast<double>(row_bins);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Heat cells, averaged per bin. Small scales (short periods) on top.
    for (std::size_t rb = 0; rb < row_bins; ++rb) {
        const std::size_t r0 = rb * rows / row_bins;
        const std::size_t r1 = std::max(r0 + 1, (rb + 1) * rows / row_bins);
        for (std::size_t cb = 0; cb < col_bins; ++cb) {
            const std::size_t c0 = cb * cols / col_bins;
            const std::size_t c1 = std::max(c0 + 1, (cb + 1) * cols / col_bins);
            double acc = 0.0;
            for (std::size_t r = r0; r < r1; ++r) {
                for (std::size_t c = c0; c < c1; ++c) acc += field.r2(r, c);
            }
            acc /= static_cast<double>((r1 - r0) * (c1 - c0));
            svg << "<rect x=\"" << fmt(margin + cell_w * static_cast<double>(cb)) << "\" y=\""
                << fmt(margin + cell_h * static_cast<double>(rb)) << "\" width=\""
                << fmt(cell_w + 0.1) << "\" height=\"" << fmt(cell_h + 0.1) << "\" fill=\""
                << heat_color(acc) << "\"/>\n";
        }
    }

    // Cone of influence: shade the untrustworthy region below the curve.
    const double log_top = std::log2(field.grid.fourier_period(0));
    const double log_bot = std::log2(field.grid.fourier_period(rows - 1));
    auto period_to_y = [&](double period) {
        const double frac = (std::log2(period) - log_top) / (log_bot - log_top);
        return margin + std::clamp(frac, 0.0, 1.0) * plot_h;
    };
    svg << "<path d=\"M" << fmt(margin) << " " << fmt(margin + plot_h);
    for (std::size_t cb = 0; cb <= col_bins; ++cb) {
        const std::size_t c = std::min(cols - 1, cb * cols / col_bins);
        svg << " L" << fmt(margin + cell_w * static_cast<double>(cb)) << " "
            << fmt(period_to_y(field.coi[c]));
    }
    svg << " L" << fmt(margin + plot_w) << " " << fmt(margin + plot_h)
        << " Z\" fill=\"white\" opacity=\"0.6\"/>\n";

    // Phase arrows where the mask is on.
    const std::size_t arrow_step_c = std::max<std::size_t>(1, col_bins / 24) * (cols / col_bins);
    const std::size_t arrow_step_r = std::max<std::size_t>(1, rows / 16);
    for (std::size_t r = arrow_step_r / 2; r < rows; r += arrow_step_r) {
        for (std::size_t c = arrow_step_c / 2; c < cols; c += arrow_step_c) {
            if (field.significant(r, c) == 0 || !field.trusted(r, c)) continue;
            const double cx =
                margin + plot_w * (static_cast<double>(c) + 0.5) / static_cast<double>(cols);
            const double cy =
                margin + plot_h * (static_cast<double>(r) + 0.5) / static_cast<double>(rows);
            const double deg = -field.phase(r, c) * 180.0 / M_PI; // svg y points down
            svg << "<g transform=\"translate(" << fmt(cx) << "," << fmt(cy) << ") rotate("
                << fmt(deg) << ")\"><line x1=\"-5\" y1=\"0\" x2=\"4\" y2=\"0\" stroke=\"black\" "
                   "stroke-width=\"1\"/><path d=\"M4 0 L1 -2 L1 2 Z\" fill=\"black\"/></g>\n";
        }
    }

    svg << "<rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\""
        << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "</svg>\n";
    write_text_file(path, svg.str());
}

} // namespace comove
