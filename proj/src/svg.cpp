#include "swarmdoppler/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string_view>

namespace swarmdoppler::svg {

namespace {

constexpr int kLeft = 80, kRight = 30, kTop = 40, kBottom = 60;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!(lo <= hi)) lo = 0.0, hi = 1.0;
        if (lo == hi) {
            const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
            lo -= pad;
            hi += pad;
        }
    }
};

std::vector<double> ticks(const Range& r, int target = 6) {
    const double span = r.hi - r.lo;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    std::vector<double> out;
    for (double t = std::ceil(r.lo / step) * step; t <= r.hi + 1e-9 * span; t += step)
        out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    return out;
}

std::string header(int w, int h, const std::string& title) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
                    std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
                    "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + std::to_string(w / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(title) + "</text>\n";
    return s;
}

std::string axes(int w, int h, const Range& xr, const Range& yr, const std::string& xl, const std::string& yl,
                 bool log_y) {
    const double pw = w - kLeft - kRight, ph = h - kTop - kBottom;
    std::string s = "<rect x=\"" + std::to_string(kLeft) + "\" y=\"" + std::to_string(kTop) + "\" width=\"" +
                    px(pw) + "\" height=\"" + px(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(xr)) {
        const double X = kLeft + (t - xr.lo) / (xr.hi - xr.lo) * pw;
        s += "<line x1=\"" + px(X) + "\" y1=\"" + px(kTop + ph) + "\" x2=\"" + px(X) + "\" y2=\"" + px(kTop + ph + 5) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + px(X) + "\" y=\"" + px(kTop + ph + 18) + "\" text-anchor=\"middle\">" + num(t) + "</text>\n";
    }
    for (double t : ticks(yr)) {
        const double Y = kTop + ph - (t - yr.lo) / (yr.hi - yr.lo) * ph;
        const std::string label = log_y ? "1e" + num(t) : num(t);
        s += "<line x1=\"" + px(kLeft - 5) + "\" y1=\"" + px(Y) + "\" x2=\"" + std::to_string(kLeft) + "\" y2=\"" +
             px(Y) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(Y + 4) + "\" text-anchor=\"end\">" + label + "</text>\n";
    }
    s += "<text x=\"" + px(kLeft + pw / 2) + "\" y=\"" + std::to_string(h - 15) + "\" text-anchor=\"middle\">" +
         escape(xl) + "</text>\n";
    s += "<text transform=\"translate(18," + px(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         escape(yl) + "</text>\n";
    return s;
}

}  // namespace

std::string render(const LinePlot& plot) {
    const int w = plot.width, h = plot.height;
    const double pw = w - kLeft - kRight, ph = h - kTop - kBottom;
    auto ty = [&](double v) { return plot.log_y ? (v > 0.0 ? std::log10(v) : std::nan("")) : v; };

    Range xr, yr;
    for (const auto& s : plot.series) {
        for (double v : s.x) xr.add(v);
        for (double v : s.y) yr.add(ty(v));
    }
    for (const auto& m : plot.vertical_lines) xr.add(m.x);
    xr.finish();
    yr.finish();
    auto X = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto Y = [&](double v) { return kTop + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::string out = header(w, h, plot.title);
    out += axes(w, h, xr, yr, plot.x_label, plot.y_label, plot.log_y);
    for (const auto& m : plot.vertical_lines) {
        out += "<line x1=\"" + px(X(m.x)) + "\" y1=\"" + std::to_string(kTop) + "\" x2=\"" + px(X(m.x)) + "\" y2=\"" +
               px(kTop + ph) + "\" stroke=\"" + m.color + "\" stroke-dasharray=\"4 3\"/>\n";
        if (!m.label.empty())
            out += "<text x=\"" + px(X(m.x) + 3) + "\" y=\"" + std::to_string(kTop + 14) + "\" fill=\"" + m.color +
                   "\">" + escape(m.label) + "</text>\n";
    }
    int legend_row = 0;
    for (const auto& s : plot.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.markers) {
            for (std::size_t i = 0; i < n; ++i) {
                const double yv = ty(s.y[i]);
                if (!std::isfinite(yv)) continue;
                out += "<circle cx=\"" + px(X(s.x[i])) + "\" cy=\"" + px(Y(yv)) + "\" r=\"1.6\" fill=\"" + s.color +
                       "\"/>\n";
            }
        } else {
            out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.2\"";
            if (s.dashed) out += " stroke-dasharray=\"6 4\"";
            out += " points=\"";
            for (std::size_t i = 0; i < n; ++i) {
                const double yv = ty(s.y[i]);
                if (!std::isfinite(yv)) continue;
                out += px(X(s.x[i])) + "," + px(Y(yv)) + " ";
            }
            out += "\"/>\n";
        }
        if (!s.label.empty()) {
            const double ly = kTop + 16 + 16 * legend_row++;
            out += "<line x1=\"" + px(kLeft + pw - 150) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(kLeft + pw - 125) +
                   "\" y2=\"" + px(ly - 4) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
            out += "<text x=\"" + px(kLeft + pw - 120) + "\" y=\"" + px(ly) + "\">" + escape(s.label) + "</text>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

std::string render(const Heatmap& map) {
    const int w = map.width, h = map.height;
    const double pw = w - kLeft - kRight, ph = h - kTop - kBottom;
    Range xr, yr;
    for (double v : map.x) xr.add(v);
    for (double v : map.y) yr.add(v);
    xr.finish();
    yr.finish();
    const std::size_t nx = map.x.size(), ny = map.y.size();
    const double cw = nx > 0 ? pw / static_cast<double>(nx) : pw;
    const double ch = ny > 0 ? ph / static_cast<double>(ny) : ph;

    double peak = 0.0;
    for (double v : map.values) peak = std::max(peak, v);

    std::string out = header(w, h, map.title);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double v = map.values[ix * ny + iy];
            double db = peak > 0.0 && v > 0.0 ? 10.0 * std::log10(v / peak) : -map.dynamic_range_db;
            db = std::clamp(db, -map.dynamic_range_db, 0.0);
            const double level = 1.0 + db / map.dynamic_range_db;  // 0 .. 1
            const int shade = static_cast<int>(std::lround(255.0 * (1.0 - level)));
            char color[8];
            std::snprintf(color, sizeof color, "#%02x%02x%02x", shade, shade, 255);
            out += "<rect x=\"" + px(kLeft + cw * ix) + "\" y=\"" + px(kTop + ph - ch * (iy + 1)) + "\" width=\"" +
                   px(cw + 0.3) + "\" height=\"" + px(ch + 0.3) + "\" fill=\"" + color + "\"/>\n";
        }
    }
    for (double yl : map.horizontal_lines) {
        if (yl < yr.lo || yl > yr.hi) continue;
        const double Y = kTop + ph - (yl - yr.lo) / (yr.hi - yr.lo) * ph;
        out += "<line x1=\"" + std::to_string(kLeft) + "\" y1=\"" + px(Y) + "\" x2=\"" + px(kLeft + pw) + "\" y2=\"" +
               px(Y) + "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
    }
    out += axes(w, h, xr, yr, map.x_label, map.y_label, false);
    out += "</svg>\n";
    return out;
}

}  // namespace swarmdoppler::svg
