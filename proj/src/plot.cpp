#include "spdmean/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "spdmean/set_io.hpp"

namespace spdmean::plot {

namespace {

constexpr double kPanelW = 360.0;
constexpr double kPanelH = 280.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 10.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 45.0;

constexpr std::array<const char*, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double map(double v) const {
        const double t = log ? std::log10(v) : v;
        return (t - lo) / (hi - lo);
    }
};

Axis make_axis(const std::vector<double>& values, bool log) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (!std::isfinite(v) || (log && !(v > 0.0))) continue;
        const double t = log ? std::log10(v) : v;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (log) {
        lo = std::floor(lo);
        hi = std::ceil(hi);
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    return {lo, hi, log};
}

std::vector<double> ticks(const Axis& a) {
    std::vector<double> out;
    if (a.log) {
        const int step = std::max(1, static_cast<int>(std::ceil((a.hi - a.lo) / 6.0)));
        for (double e = a.lo; e <= a.hi + 1e-9; e += step) out.push_back(std::pow(10.0, e));
        return out;
    }
    const double span = a.hi - a.lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * span; v += step) {
        out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    }
    return out;
}

void draw_panel(std::ostream& os, const Panel& p, double ox) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& s : p.series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    const Axis ax = make_axis(xs, p.log_x);
    const Axis ay = make_axis(ys, p.log_y);
    const double pw = kPanelW - kLeft - kRight;
    const double ph = kPanelH - kTop - kBottom;
    auto px = [&](double v) { return ox + kLeft + ax.map(v) * pw; };
    auto py = [&](double v) { return kTop + (1.0 - ay.map(v)) * ph; };

    os << "<rect x=\"" << num(ox + kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
       << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#000\"/>\n";
    os << "<text x=\"" << num(ox + kLeft + pw / 2) << "\" y=\"18\" text-anchor=\"middle\">"
       << escape(p.title) << "</text>\n";
    os << "<text x=\"" << num(ox + kLeft + pw / 2) << "\" y=\"" << num(kPanelH - 8)
       << "\" text-anchor=\"middle\">" << escape(p.x_label) << "</text>\n";
    os << "<text transform=\"translate(" << num(ox + 14) << ',' << num(kTop + ph / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">" << escape(p.y_label) << "</text>\n";

    for (double t : ticks(ax)) {
        const double x = px(t);
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(x)
           << "\" y2=\"" << num(kTop + ph + 4) << "\" stroke=\"#000\"/>"
           << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 16)
           << "\" text-anchor=\"middle\" font-size=\"10\">" << tick_label(t) << "</text>\n";
    }
    for (double t : ticks(ay)) {
        const double y = py(t);
        os << "<line x1=\"" << num(ox + kLeft - 4) << "\" y1=\"" << num(y) << "\" x2=\""
           << num(ox + kLeft) << "\" y2=\"" << num(y) << "\" stroke=\"#000\"/>"
           << "<text x=\"" << num(ox + kLeft - 6) << "\" y=\"" << num(y + 3)
           << "\" text-anchor=\"end\" font-size=\"10\">" << tick_label(t) << "</text>\n";
    }

    for (std::size_t si = 0; si < p.series.size(); ++si) {
        const Series& s = p.series[si];
        const char* color = kColors[si % kColors.size()];
        std::string points;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if ((p.log_x && !(s.x[i] > 0)) || (p.log_y && !(s.y[i] > 0))) continue;
            points += num(px(s.x[i])) + ',' + num(py(s.y[i])) + ' ';
        }
        if (s.lines && !points.empty()) {
            points.pop_back();
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << points
               << "\"/>\n";
        }
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if ((p.log_x && !(s.x[i] > 0)) || (p.log_y && !(s.y[i] > 0))) continue;
                os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                   << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            }
        }
        const double ly = kTop + 12 + 14 * static_cast<double>(si);
        const double lx = ox + kLeft + pw - 90;
        os << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 8) << "\" width=\"10\" height=\"8\" "
           << "fill=\"" << color << "\"/><text x=\"" << num(lx + 14) << "\" y=\"" << num(ly)
           << "\" font-size=\"10\">" << escape(s.label) << "</text>\n";
    }
}

}  // namespace

void write_svg(std::ostream& os, const std::vector<Panel>& panels) {
    const double width = kPanelW * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
       << num(kPanelH) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        draw_panel(os, panels[i], kPanelW * static_cast<double>(i));
    }
    os << "</svg>\n";
}

void save_svg(const std::filesystem::path& path, const std::vector<Panel>& panels) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path.string());
    write_svg(os, panels);
    if (!os) throw IoError("cannot write " + path.string());
}

}  // namespace spdmean::plot
