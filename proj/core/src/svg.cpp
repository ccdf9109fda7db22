#include "soav/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace soav::io {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 420;
constexpr int kLeft = 64;
constexpr int kRight = 24;
constexpr int kTop = 40;
constexpr int kBottom = 48;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    double px0 = 0.0;
    double px1 = 1.0;

    double map(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (raw <= mult * mag) {
            return mult * mag;
        }
    }
    return 10.0 * mag;
}

void pad_range(double& lo, double& hi) {
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
}

void open_svg(std::ostream& out, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void draw_axes(std::ostream& out, const Axis& xaxis, const Axis& yaxis,
               const std::string& xlabel, const std::string& ylabel) {
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
        << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xstep = nice_step(xaxis.hi - xaxis.lo, 6);
    for (double v = std::ceil(xaxis.lo / xstep) * xstep; v <= xaxis.hi + 1e-12; v += xstep) {
        const double x = xaxis.map(v);
        out << "<line x1=\"" << px(x) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px(x)
            << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << px(x) << "\" y=\"" << kHeight - kBottom + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
            << "</text>\n";
    }
    const double ystep = nice_step(yaxis.hi - yaxis.lo, 6);
    for (double v = std::ceil(yaxis.lo / ystep) * ystep; v <= yaxis.hi + 1e-12; v += ystep) {
        const double y = yaxis.map(v);
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << px(y) << "\" x2=\"" << kLeft
            << "\" y2=\"" << px(y) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << kLeft - 8 << "\" y=\"" << px(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
            << "</text>\n";
    }
    out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
        << "</text>\n"
        << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << (kTop + kHeight - kBottom) / 2 << ")\">" << ylabel
        << "</text>\n";
}

}  // namespace

void write_control_svg(std::ostream& out, const std::string& title,
                       const std::vector<double>& time, const Vector& u,
                       const std::vector<double>& guides) {
    Axis xaxis{time.front(), time.back(), static_cast<double>(kLeft),
               static_cast<double>(kWidth - kRight)};
    double lo = -1.0;
    double hi = 1.0;
    for (Index l = 0; l < u.size(); ++l) {
        lo = std::min(lo, u(l));
        hi = std::max(hi, u(l));
    }
    pad_range(lo, hi);
    Axis yaxis{lo, hi, static_cast<double>(kHeight - kBottom), static_cast<double>(kTop)};

    open_svg(out, title);
    draw_axes(out, xaxis, yaxis, "t", "u(t)");

    for (double level : guides) {
        const double y = yaxis.map(level);
        out << "<line x1=\"" << kLeft << "\" y1=\"" << px(y) << "\" x2=\"" << kWidth - kRight
            << "\" y2=\"" << px(y)
            << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\" stroke-width=\"1\"/>\n";
    }

    if (u.size() > 0) {
        out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        for (Index l = 0; l < u.size(); ++l) {
            const double y = yaxis.map(u(l));
            out << px(xaxis.map(time[static_cast<std::size_t>(l)])) << ',' << px(y) << ' '
                << px(xaxis.map(time[static_cast<std::size_t>(l + 1)])) << ',' << px(y) << ' ';
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

void write_state_svg(std::ostream& out, const std::string& title,
                     const std::vector<double>& time, const Matrix& x) {
    Axis xaxis{time.front(), time.back(), static_cast<double>(kLeft),
               static_cast<double>(kWidth - kRight)};
    double lo = x.minCoeff();
    double hi = x.maxCoeff();
    pad_range(lo, hi);
    Axis yaxis{lo, hi, static_cast<double>(kHeight - kBottom), static_cast<double>(kTop)};

    open_svg(out, title);
    draw_axes(out, xaxis, yaxis, "t", "x(t)");

    const int palette_size = static_cast<int>(sizeof(kPalette) / sizeof(kPalette[0]));
    for (Index i = 0; i < x.rows(); ++i) {
        const char* color = kPalette[static_cast<int>(i) % palette_size];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t l = 0; l < time.size(); ++l) {
            out << px(xaxis.map(time[l])) << ',' << px(yaxis.map(x(i, static_cast<Index>(l))))
                << ' ';
        }
        out << "\"/>\n";
        // legend swatch
        const double ly = kTop + 16 + 16 * static_cast<double>(i);
        out << "<line x1=\"" << kWidth - kRight - 70 << "\" y1=\"" << px(ly) << "\" x2=\""
            << kWidth - kRight - 46 << "\" y2=\"" << px(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kWidth - kRight - 40 << "\" y=\"" << px(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">x" << (i + 1) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace soav::io
