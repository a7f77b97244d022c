#include "fop/svg.hpp"

#include "fop/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fop {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 60.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

bool plottable(double x, double y) { return std::isfinite(x) && std::isfinite(y) && x > 0 && y > 0; }

}  // namespace

std::string loglog_svg(const Table& t, const std::string& x_column,
                       const std::vector<std::string>& y_columns, const std::string& title) {
    const Vector xs = t.column(x_column);
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto& name : y_columns) {
        const Vector ys = t.column(name);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!plottable(xs[i], ys[i])) continue;
            x_lo = std::min(x_lo, std::log10(xs[i]));
            x_hi = std::max(x_hi, std::log10(xs[i]));
            y_lo = std::min(y_lo, std::log10(ys[i]));
            y_hi = std::max(y_hi, std::log10(ys[i]));
        }
    }
    if (!(x_lo <= x_hi)) x_lo = 0, x_hi = 1;
    if (!(y_lo <= y_hi)) y_lo = 0, y_hi = 1;
    x_lo = std::floor(x_lo), x_hi = std::max(std::ceil(x_hi), x_lo + 1);
    y_lo = std::floor(y_lo), y_hi = std::max(std::ceil(y_hi), y_lo + 1);

    auto px = [&](double lx) { return kMargin + (lx - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin); };
    auto py = [&](double ly) { return kHeight - kMargin - (ly - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin); };

    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    s << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
      << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double e = x_lo; e <= x_hi; e += 1)
        s << "<text x=\"" << px(e) << "\" y=\"" << kHeight - kMargin + 15
          << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
    for (double e = y_lo; e <= y_hi; e += 1)
        s << "<text x=\"" << kMargin - 5 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e
          << "</text>\n";
    s << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
      << x_column << "</text>\n";

    for (std::size_t c = 0; c < y_columns.size(); ++c) {
        const Vector ys = t.column(y_columns[c]);
        const char* color = kColors[c % std::size(kColors)];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (plottable(xs[i], ys[i]))
                s << px(std::log10(xs[i])) << ',' << py(std::log10(ys[i])) << ' ';
        s << "\"/>\n";
        s << "<text x=\"" << kWidth - kMargin + 5 << "\" y=\"" << kMargin + 14.0 * static_cast<double>(c) + 10
          << "\" fill=\"" << color << "\" font-size=\"9\">" << y_columns[c] << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void write_svg(const std::string& svg, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << svg;
    if (!f) throw IoError("write failed for " + path);
}

}  // namespace fop
