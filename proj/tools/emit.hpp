#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ovib::cli {

// Full-precision decimal for CSV numeric fields: 17 significant digits.
inline std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Comma-delimited, LF endings, UTF-8 (plain ASCII in practice).
class CsvFile {
public:
    explicit CsvFile(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    }

    void header(const std::string& line) { out_ << line << "\n"; }

    CsvFile& field(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }
    CsvFile& field(double v) { return field(num17(v)); }
    CsvFile& field(long long v) { return field(std::to_string(v)); }
    CsvFile& field(std::size_t v) { return field(std::to_string(v)); }
    CsvFile& field(int v) { return field(std::to_string(v)); }

    void end_row() {
        out_ << "\n";
        first_ = true;
    }

private:
    std::ofstream out_;
    bool first_ = true;
};

// Minimal static SVG: polylines, filled rectangles, circles, axis labels.
// World coordinates are mapped to a fixed-size viewport with margins.
class SvgPlot {
public:
    SvgPlot(double x_lo, double x_hi, double y_lo, double y_hi, int width = 760, int height = 520)
        : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), w_(width), h_(height) {
        body_ << "<rect x='0' y='0' width='" << w_ << "' height='" << h_
              << "' fill='white' stroke='none'/>\n";
    }

    double sx(double x) const { return margin_ + (x - x_lo_) / (x_hi_ - x_lo_) * (w_ - 2 * margin_); }
    double sy(double y) const { return h_ - margin_ - (y - y_lo_) / (y_hi_ - y_lo_) * (h_ - 2 * margin_); }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                  double width = 1.0) {
        if (pts.empty()) return;
        body_ << "<polyline fill='none' stroke='" << stroke << "' stroke-width='" << width
              << "' points='";
        for (const auto& [x, y] : pts) body_ << sx(x) << ',' << sy(y) << ' ';
        body_ << "'/>\n";
    }

    void circle(double x, double y, double r, const std::string& fill) {
        body_ << "<circle cx='" << sx(x) << "' cy='" << sy(y) << "' r='" << r << "' fill='" << fill
              << "'/>\n";
    }

    // world-coordinate cell filled with a grayscale level in [0, 1]
    void cell(double x0, double x1, double y0, double y1, double level) {
        const int g = static_cast<int>(255.0 * std::min(1.0, std::max(0.0, level)));
        body_ << "<rect x='" << sx(x0) << "' y='" << sy(y1) << "' width='" << (sx(x1) - sx(x0))
              << "' height='" << (sy(y0) - sy(y1)) << "' fill='rgb(" << g << ',' << g << ',' << g
              << ")' stroke='none'/>\n";
    }

    void axes(const std::string& x_label, const std::string& y_label) {
        body_ << "<rect x='" << margin_ << "' y='" << margin_ << "' width='" << w_ - 2 * margin_
              << "' height='" << h_ - 2 * margin_ << "' fill='none' stroke='black'/>\n";
        body_ << "<text x='" << w_ / 2 << "' y='" << h_ - 8 << "' font-size='13' text-anchor='middle'>"
              << x_label << "</text>\n";
        body_ << "<text x='14' y='" << h_ / 2 << "' font-size='13' text-anchor='middle' "
              << "transform='rotate(-90 14 " << h_ / 2 << ")'>" << y_label << "</text>\n";
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w_ << "' height='" << h_
            << "'>\n"
            << body_.str() << "</svg>\n";
    }

private:
    double x_lo_, x_hi_, y_lo_, y_hi_;
    int w_, h_;
    int margin_ = 48;
    std::ostringstream body_;
};

} // namespace ovib::cli
