#pragma once

// Deterministic CSV and SVG emission. Every file starts from the same
// config, uses 17-significant-digit reals, and contains no timestamps or
// environment state, so re-running a subcommand reproduces each output
// byte for byte.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/util.hpp"

namespace schottky {

class CsvWriter {
public:
    // hash comment first, then the header row
    CsvWriter(std::uint64_t config_hash, const std::vector<std::string>& columns) {
        os_ << "# config_hash=" << format_hex16(config_hash) << "\n";
        append_row(columns);
    }

    void row(const std::vector<std::string>& cells) { append_row(cells); }

    static std::string cell(double x) { return format_real(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(long x) { return std::to_string(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }

    std::string str() const { return os_.str(); }

private:
    void append_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ",";
            os_ << escape(cells[i]);
        }
        os_ << "\n";
    }

    static std::string escape(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += "\"\"";
            else out += c;
        }
        out += "\"";
        return out;
    }

    std::ostringstream os_;
};

inline void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + path);
}

// ---------------------------------------------------------------------------
// SVG scatter plot

struct SvgPoint {
    double x = 0.0;
    double y = 0.0;
    double color_key = 0.0;  // mapped onto the color ramp (e.g. ||a/N||_1)
};

struct SvgScatterSpec {
    std::string title;
    std::string x_label = "Re s";
    std::string y_label = "Im s";
    std::string color_label;
    std::vector<SvgPoint> points;
    double delta_marker = 0.0;  // vertical line + diamond at (delta, 0)
    bool draw_delta = true;
    std::uint64_t config_hash = 0;
};

namespace detail {

inline std::string svg_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

// two-stop ramp, blue (key 0) to red (max key)
inline std::string ramp_color(double t) {
    const int r0 = 31, g0 = 119, b0 = 180;
    const int r1 = 214, g1 = 39, b1 = 40;
    const int r = static_cast<int>(r0 + t * (r1 - r0));
    const int g = static_cast<int>(g0 + t * (g1 - g0));
    const int b = static_cast<int>(b0 + t * (b1 - b0));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

// round a span to a tick step of 1, 2, or 5 times a power of ten
inline double nice_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step;
    if (frac < 1.5) step = 1.0;
    else if (frac < 3.5) step = 2.0;
    else if (frac < 7.5) step = 5.0;
    else step = 10.0;
    return step * mag;
}

}  // namespace detail

// Static 2-D scatter with axes, ticks, a delta marker and a color legend;
// one circle of class "zero" per input point.
inline std::string render_svg_scatter(const SvgScatterSpec& spec) {
    const int width = 880, height = 620;
    const int ml = 80, mr = 150, mt = 50, mb = 60;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double x_lo = spec.draw_delta ? spec.delta_marker : 0.0, x_hi = x_lo;
    double y_lo = 0.0, y_hi = 0.0;
    bool first = !spec.draw_delta;
    for (const auto& p : spec.points) {
        if (first) {
            x_lo = x_hi = p.x;
            y_lo = y_hi = p.y;
            first = false;
        }
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
        y_lo = std::min(y_lo, p.y);
        y_hi = std::max(y_hi, p.y);
    }
    const double x_pad = std::max(0.05 * (x_hi - x_lo), 0.02);
    const double y_pad = std::max(0.05 * (y_hi - y_lo), 0.02);
    x_lo -= x_pad;
    x_hi += x_pad;
    y_lo -= y_pad;
    y_hi += y_pad;

    double key_max = 0.0;
    for (const auto& p : spec.points) key_max = std::max(key_max, p.color_key);

    auto sx = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y) { return mt + (y_hi - y) / (y_hi - y_lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<!-- config_hash=" << format_hex16(spec.config_hash) << " -->\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << ml << "\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\">"
       << spec.title << "</text>\n";

    // frame
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << detail::svg_num(pw)
       << "\" height=\"" << detail::svg_num(ph) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

    // ticks
    const double xs = detail::nice_step(x_hi - x_lo);
    for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-12; t += xs) {
        os << "<line x1=\"" << detail::svg_num(sx(t)) << "\" y1=\"" << detail::svg_num(mt + ph)
           << "\" x2=\"" << detail::svg_num(sx(t)) << "\" y2=\"" << detail::svg_num(mt + ph + 5)
           << "\" stroke=\"#333333\"/>\n";
        os << "<text x=\"" << detail::svg_num(sx(t)) << "\" y=\"" << detail::svg_num(mt + ph + 20)
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
           << detail::svg_num(t) << "</text>\n";
    }
    const double ys = detail::nice_step(y_hi - y_lo);
    for (double t = std::ceil(y_lo / ys) * ys; t <= y_hi + 1e-12; t += ys) {
        os << "<line x1=\"" << detail::svg_num(ml - 5) << "\" y1=\"" << detail::svg_num(sy(t))
           << "\" x2=\"" << detail::svg_num(ml) << "\" y2=\"" << detail::svg_num(sy(t))
           << "\" stroke=\"#333333\"/>\n";
        os << "<text x=\"" << detail::svg_num(ml - 9) << "\" y=\"" << detail::svg_num(sy(t) + 4)
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
           << detail::svg_num(t) << "</text>\n";
    }
    os << "<text x=\"" << detail::svg_num(ml + pw / 2) << "\" y=\"" << height - 14
       << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << spec.x_label
       << "</text>\n";
    os << "<text x=\"20\" y=\"" << detail::svg_num(mt + ph / 2)
       << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << detail::svg_num(mt + ph / 2) << ")\">" << spec.y_label << "</text>\n";

    if (spec.draw_delta) {
        const double dx = sx(spec.delta_marker);
        os << "<line x1=\"" << detail::svg_num(dx) << "\" y1=\"" << mt << "\" x2=\""
           << detail::svg_num(dx) << "\" y2=\"" << detail::svg_num(mt + ph)
           << "\" stroke=\"#d4a017\" stroke-dasharray=\"4 3\"/>\n";
        const double dy = sy(0.0);
        os << "<path d=\"M " << detail::svg_num(dx) << " " << detail::svg_num(dy - 7) << " L "
           << detail::svg_num(dx + 7) << " " << detail::svg_num(dy) << " L " << detail::svg_num(dx)
           << " " << detail::svg_num(dy + 7) << " L " << detail::svg_num(dx - 7) << " "
           << detail::svg_num(dy) << " Z\" fill=\"#d4a017\" stroke=\"#7a5c00\"/>\n";
    }

    for (const auto& p : spec.points) {
        const double t = key_max > 0.0 ? p.color_key / key_max : 0.0;
        os << "<circle class=\"zero\" cx=\"" << detail::svg_num(sx(p.x)) << "\" cy=\""
           << detail::svg_num(sy(p.y)) << "\" r=\"3.5\" fill=\"" << detail::ramp_color(t)
           << "\" fill-opacity=\"0.85\" stroke=\"#222222\" stroke-width=\"0.4\"/>\n";
    }

    // legend
    const double lx = ml + pw + 18;
    os << "<text x=\"" << detail::svg_num(lx) << "\" y=\"" << mt + 12
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << spec.color_label << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double t = i / 4.0;
        os << "<circle cx=\"" << detail::svg_num(lx + 8) << "\" cy=\"" << mt + 30 + 18 * i
           << "\" r=\"5\" fill=\"" << detail::ramp_color(t) << "\"/>\n";
        os << "<text x=\"" << detail::svg_num(lx + 20) << "\" y=\"" << mt + 34 + 18 * i
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << detail::svg_num(t * key_max)
           << "</text>\n";
    }
    if (spec.draw_delta) {
        os << "<path d=\"M " << detail::svg_num(lx + 8) << " " << mt + 30 + 18 * 5 - 6 << " L "
           << detail::svg_num(lx + 14) << " " << mt + 30 + 18 * 5 << " L " << detail::svg_num(lx + 8)
           << " " << mt + 30 + 18 * 5 + 6 << " L " << detail::svg_num(lx + 2) << " "
           << mt + 30 + 18 * 5 << " Z\" fill=\"#d4a017\"/>\n";
        os << "<text x=\"" << detail::svg_num(lx + 20) << "\" y=\"" << mt + 34 + 18 * 5
           << "\" font-family=\"sans-serif\" font-size=\"11\">delta</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace schottky
