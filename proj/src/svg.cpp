#include "rcmoves/svg.hpp"

#include "rcmoves/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rcmoves {

PlotSelection PlotSelection::all() {
    PlotSelection s;
    s.ball = true;
    s.left.fill(true);
    s.right.fill(true);
    return s;
}

PlotSelection PlotSelection::goalies_and_ball() {
    PlotSelection s;
    s.ball = true;
    s.left[0] = true;
    s.right[0] = true;
    return s;
}

int PlotSelection::count() const {
    int n = ball ? 1 : 0;
    for (bool b : left) {
        n += b ? 1 : 0;
    }
    for (bool b : right) {
        n += b ? 1 : 0;
    }
    return n;
}

namespace {

constexpr const char* kBallColor = "#d62728";
constexpr const char* kLeftColor = "#1f77b4";
constexpr const char* kRightColor = "#2ca02c";
constexpr const char* kLineColor = "#9aa59a";

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

class FieldCanvas {
public:
    FieldCanvas(const FieldSpec& spec, const PlotStyle& style)
        : spec_(spec), style_(style),
          width_((2.0 * spec.half_length + 2.0 * style.pad_metres) * style.px_per_metre),
          height_((2.0 * spec.half_width + 2.0 * style.pad_metres) * style.px_per_metre) {}

    double x(double metres) const {
        return (metres + spec_.half_length + style_.pad_metres) * style_.px_per_metre;
    }
    // SVG y grows downward.
    double y(double metres) const {
        return (spec_.half_width + style_.pad_metres - metres) * style_.px_per_metre;
    }
    double width() const { return width_; }
    double height() const { return height_; }

private:
    FieldSpec spec_;
    PlotStyle style_;
    double width_;
    double height_;
};

void draw_field(std::ostringstream& out, const FieldCanvas& c, const FieldSpec& spec) {
    const double hl = spec.half_length;
    const double hw = spec.half_width;
    out << "<rect x=\"0\" y=\"0\" width=\"" << px(c.width()) << "\" height=\"" << px(c.height())
        << "\" fill=\"#f7fbf7\"/>\n";
    out << "<rect x=\"" << px(c.x(-hl)) << "\" y=\"" << px(c.y(hw)) << "\" width=\""
        << px(c.x(hl) - c.x(-hl)) << "\" height=\"" << px(c.y(-hw) - c.y(hw))
        << "\" fill=\"none\" stroke=\"" << kLineColor << "\"/>\n";
    out << "<line x1=\"" << px(c.x(0)) << "\" y1=\"" << px(c.y(hw)) << "\" x2=\"" << px(c.x(0))
        << "\" y2=\"" << px(c.y(-hw)) << "\" stroke=\"" << kLineColor << "\"/>\n";
    out << "<circle cx=\"" << px(c.x(0)) << "\" cy=\"" << px(c.y(0)) << "\" r=\""
        << px(9.15 * (c.x(1) - c.x(0))) << "\" fill=\"none\" stroke=\"" << kLineColor << "\"/>\n";
    // Penalty areas (16.5 m deep, 40.32 m wide) when they fit the spec'd pitch.
    if (hl > 17.0 && hw > 20.2) {
        for (int side = -1; side <= 1; side += 2) {
            const double inner = side * (hl - 16.5);
            const double x0 = std::min(c.x(side * hl), c.x(inner));
            out << "<rect x=\"" << px(x0) << "\" y=\"" << px(c.y(20.16)) << "\" width=\""
                << px(std::abs(c.x(inner) - c.x(side * hl))) << "\" height=\""
                << px(c.y(-20.16) - c.y(20.16)) << "\" fill=\"none\" stroke=\"" << kLineColor
                << "\"/>\n";
        }
    }
}

void draw_object(std::ostringstream& out, const FieldCanvas& c, const Matrix& positions,
                 int channel_x, const char* color, double stroke_width) {
    if (positions.rows() == 1) {
        out << "<circle cx=\"" << px(c.x(positions(0, channel_x))) << "\" cy=\""
            << px(c.y(positions(0, channel_x + 1))) << "\" r=\"2.5\" fill=\"" << color
            << "\"/>\n";
        return;
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << px(stroke_width) << "\" points=\"";
    for (Eigen::Index i = 0; i < positions.rows(); ++i) {
        if (i > 0) {
            out << ' ';
        }
        out << px(c.x(positions(i, channel_x))) << ',' << px(c.y(positions(i, channel_x + 1)));
    }
    out << "\"/>\n";
}

}  // namespace

std::string plot_trajectories(const Matrix& positions, const PlotSelection& selection,
                              const FieldSpec& spec, const PlotStyle& style) {
    spec.validate();
    if (positions.rows() < 1) {
        throw ValidationError("plot_trajectories: no data rows");
    }
    if (positions.cols() != kChannels) {
        throw ValidationError("plot_trajectories: expected " + std::to_string(kChannels) +
                              " columns, got " + std::to_string(positions.cols()));
    }
    if (selection.count() == 0) {
        throw ValidationError("plot_trajectories: empty object selection");
    }

    const FieldCanvas canvas(spec, style);
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" baseProfile=\"full\" "
        << "width=\"" << px(canvas.width()) << "\" height=\"" << px(canvas.height())
        << "\" viewBox=\"0 0 " << px(canvas.width()) << ' ' << px(canvas.height()) << "\">\n";
    if (!style.title.empty()) {
        out << "<title>" << style.title << "</title>\n";
    }
    draw_field(out, canvas, spec);

    for (int i = 0; i < 11; ++i) {
        if (selection.left[static_cast<std::size_t>(i)]) {
            draw_object(out, canvas, positions, 2 + 2 * i, kLeftColor, style.stroke_width);
        }
    }
    for (int i = 0; i < 11; ++i) {
        if (selection.right[static_cast<std::size_t>(i)]) {
            draw_object(out, canvas, positions, 24 + 2 * i, kRightColor, style.stroke_width);
        }
    }
    if (selection.ball) {
        draw_object(out, canvas, positions, 0, kBallColor, style.stroke_width);
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace rcmoves
