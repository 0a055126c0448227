#include "tfr/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tfr {

namespace {

struct Rgb {
    double r, g, b;
};

// viridis control points
const Rgb kRamp[] = {
    {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
    {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
    {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.478, 0.821, 0.318},
    {0.741, 0.873, 0.150}, {0.993, 0.906, 0.144},
};

Rgb colormap(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int segments = static_cast<int>(std::size(kRamp)) - 1;
    const double pos = t * segments;
    const int i = std::min(segments - 1, static_cast<int>(pos));
    const double f = pos - i;
    return Rgb{kRamp[i].r + f * (kRamp[i + 1].r - kRamp[i].r),
               kRamp[i].g + f * (kRamp[i + 1].g - kRamp[i].g),
               kRamp[i].b + f * (kRamp[i + 1].b - kRamp[i].b)};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void write_field_png(const std::string& path, const Grid& field, double vmin, double vmax,
                     int scale) {
    if (field.n <= 0) throw ImageError("write_field_png: empty field");
    if (scale < 1) scale = 1;
    const int w = field.n * scale;
    const double span = vmax > vmin ? vmax - vmin : 1.0;

    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw ImageError("cannot open for writing: " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(fp);
        throw ImageError("libpng failure while writing " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, w, w, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<std::size_t>(w) * 3);
    for (int py = 0; py < w; ++py) {
        const int j = field.n - 1 - py / scale;  // image top = max y
        for (int px = 0; px < w; ++px) {
            const int k = px / scale;
            const Rgb c = colormap((field.at(j, k) - vmin) / span);
            row[3 * px + 0] = static_cast<png_byte>(std::lround(255 * c.r));
            row[3 * px + 1] = static_cast<png_byte>(std::lround(255 * c.g));
            row[3 * px + 2] = static_cast<png_byte>(std::lround(255 * c.b));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

namespace {

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b", "#17becf"};

struct Frame {
    double x0, x1, y0, y1;           // data range
    double px0, px1, py0, py1;       // pixel box (py0 = top)
    double sx(double x) const { return px0 + (x - x0) / (x1 - x0) * (px1 - px0); }
    double sy(double y) const { return py1 - (y - y0) / (y1 - y0) * (py1 - py0); }
};

void axes(std::ostringstream& svg, const Frame& f, const std::string& x_label,
          const std::string& y_label, const std::string& title) {
    svg << "<rect x='" << f.px0 << "' y='" << f.py0 << "' width='" << f.px1 - f.px0
        << "' height='" << f.py1 - f.py0 << "' fill='none' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + i * (f.x1 - f.x0) / 4;
        const double yv = f.y0 + i * (f.y1 - f.y0) / 4;
        svg << "<text x='" << f.sx(xv) << "' y='" << f.py1 + 16
            << "' font-size='11' text-anchor='middle'>" << fmt(xv) << "</text>\n";
        svg << "<text x='" << f.px0 - 6 << "' y='" << f.sy(yv) + 4
            << "' font-size='11' text-anchor='end'>" << fmt(yv) << "</text>\n";
        svg << "<line x1='" << f.sx(xv) << "' y1='" << f.py1 << "' x2='" << f.sx(xv) << "' y2='"
            << f.py1 - 4 << "' stroke='black'/>\n";
        svg << "<line x1='" << f.px0 << "' y1='" << f.sy(yv) << "' x2='" << f.px0 + 4 << "' y2='"
            << f.sy(yv) << "' stroke='black'/>\n";
    }
    svg << "<text x='" << (f.px0 + f.px1) / 2 << "' y='" << f.py1 + 34
        << "' font-size='12' text-anchor='middle'>" << x_label << "</text>\n";
    svg << "<text x='14' y='" << (f.py0 + f.py1) / 2 << "' font-size='12' text-anchor='middle' "
        << "transform='rotate(-90 14 " << (f.py0 + f.py1) / 2 << ")'>" << y_label << "</text>\n";
    svg << "<text x='" << (f.px0 + f.px1) / 2 << "' y='16' font-size='13' text-anchor='middle'>"
        << title << "</text>\n";
}

void save_svg(const std::string& path, const std::ostringstream& svg, int w, int h) {
    std::ofstream out(path);
    if (!out) throw ImageError("cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << svg.str() << "</svg>\n";
    if (!out.flush()) throw ImageError("failed writing " + path);
}

}  // namespace

void write_line_svg(const std::string& path, const std::vector<Series>& series,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& title) {
    if (series.empty()) throw ImageError("write_line_svg: no series");
    Frame f{};
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                f.x0 = f.x1 = s.x[i];
                f.y0 = f.y1 = s.y[i];
                first = false;
            }
            f.x0 = std::min(f.x0, s.x[i]);
            f.x1 = std::max(f.x1, s.x[i]);
            f.y0 = std::min(f.y0, s.y[i]);
            f.y1 = std::max(f.y1, s.y[i]);
        }
    }
    if (f.x1 == f.x0) f.x1 = f.x0 + 1;
    if (f.y1 == f.y0) f.y1 = f.y0 + 1;
    const double pad = 0.05 * (f.y1 - f.y0);
    f.y0 -= pad;
    f.y1 += pad;
    const int w = 640, h = 420;
    f.px0 = 64;
    f.px1 = w - 20;
    f.py0 = 28;
    f.py1 = h - 48;

    std::ostringstream svg;
    axes(svg, f, x_label, y_label, title);
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kSeriesColors[si % std::size(kSeriesColors)];
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            svg << f.sx(s.x[i]) << "," << f.sy(s.y[i]) << " ";
        svg << "'/>\n";
        svg << "<text x='" << f.px1 - 8 << "' y='" << f.py0 + 16 + 16 * si
            << "' font-size='11' text-anchor='end' fill='" << color << "'>" << s.name
            << "</text>\n";
    }
    save_svg(path, svg, w, h);
}

void write_bars_svg(const std::string& path, const std::vector<std::string>& group_labels,
                    const std::vector<std::string>& series_names,
                    const std::vector<std::vector<double>>& values, const std::string& y_label,
                    const std::string& title) {
    if (values.size() != series_names.size())
        throw ImageError("write_bars_svg: series/value count mismatch");
    double vmax = 0.0;
    for (const auto& row : values) {
        if (row.size() != group_labels.size())
            throw ImageError("write_bars_svg: group/value count mismatch");
        for (double v : row) vmax = std::max(vmax, v);
    }
    if (vmax <= 0) vmax = 1.0;
    const int w = 640, h = 420;
    Frame f{0, 1, 0, vmax * 1.1, 64, w - 20, 28, h - 48};

    std::ostringstream svg;
    axes(svg, f, "", y_label, title);
    const std::size_t groups = group_labels.size(), bars = series_names.size();
    const double group_w = (f.px1 - f.px0) / groups;
    const double bar_w = 0.8 * group_w / bars;
    for (std::size_t g = 0; g < groups; ++g) {
        for (std::size_t s = 0; s < bars; ++s) {
            const double x = f.px0 + g * group_w + 0.1 * group_w + s * bar_w;
            const double top = f.sy(values[s][g]);
            svg << "<rect x='" << x << "' y='" << top << "' width='" << bar_w * 0.92
                << "' height='" << f.py1 - top << "' fill='"
                << kSeriesColors[s % std::size(kSeriesColors)] << "'/>\n";
        }
        svg << "<text x='" << f.px0 + (g + 0.5) * group_w << "' y='" << f.py1 + 16
            << "' font-size='11' text-anchor='middle'>" << group_labels[g] << "</text>\n";
    }
    for (std::size_t s = 0; s < bars; ++s)
        svg << "<text x='" << f.px1 - 8 << "' y='" << f.py0 + 16 + 16 * s
            << "' font-size='11' text-anchor='end' fill='"
            << kSeriesColors[s % std::size(kSeriesColors)] << "'>" << series_names[s]
            << "</text>\n";
    save_svg(path, svg, w, h);
}

}  // namespace tfr
