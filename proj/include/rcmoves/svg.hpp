#pragma once

#include "rcmoves/ingest.hpp"
#include "rcmoves/linalg.hpp"

#include <array>
#include <string>

namespace rcmoves {

// Which of the 23 objects a plot draws.
struct PlotSelection {
    bool ball = false;
    std::array<bool, 11> left{};
    std::array<bool, 11> right{};

    static PlotSelection all();
    static PlotSelection goalies_and_ball();
    int count() const;
};

struct PlotStyle {
    double px_per_metre = 8.0;
    double pad_metres = 3.0;   // viewport margin around the field rectangle
    double stroke_width = 1.2;
    std::string title;
};

// Renders trajectories over a field drawing as a standalone SVG 1.1 document
// with explicit width/height. `positions` holds field-metre coordinates, one
// 46-column row per cycle. Ball is red, left team blue, right team green;
// a single-row input degenerates to point markers. Aspect ratio is 1:1 in
// metres by construction.
std::string plot_trajectories(const Matrix& positions, const PlotSelection& selection,
                              const FieldSpec& spec, const PlotStyle& style = {});

}  // namespace rcmoves
