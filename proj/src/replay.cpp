#include "rcmoves/replay.hpp"

#include "rcmoves/error.hpp"

#include <cmath>

namespace rcmoves {

StateSeries autonomous_run(const Matrix& w_loaded, const Vector& b, const Conceptor& c,
                           const Vector& x_init, int steps) {
    const Eigen::Index n = w_loaded.rows();
    if (w_loaded.cols() != n) {
        throw ValidationError("autonomous_run: W_loaded must be square");
    }
    if (b.size() != n || x_init.size() != n || c.dim() != n) {
        throw ValidationError("autonomous_run: dimension mismatch");
    }
    if (steps < 1) {
        throw ValidationError("autonomous_run: steps must be >= 1");
    }
    require_finite(x_init, "autonomous_run: x_init");

    StateSeries series;
    series.states.resize(steps, n);
    Vector x = x_init;
    Vector pre(n);
    for (int i = 0; i < steps; ++i) {
        pre.noalias() = w_loaded * x;
        pre += b;
        pre = pre.array().tanh();
        x.noalias() = c.c * pre;
        if (!x.allFinite()) {
            throw NumericalError("autonomous_run: non-finite state at step " + std::to_string(i));
        }
        series.states.row(i) = x.transpose();
    }
    return series;
}

Matrix readout_trajectory(const StateSeries& states, const Matrix& w_out) {
    if (w_out.cols() != states.dim()) {
        throw ValidationError("readout_trajectory: W_out columns " + std::to_string(w_out.cols()) +
                              " != state dimension " + std::to_string(states.dim()));
    }
    return states.states * w_out.transpose();
}

ReplayRun predict_continuation(const StateSeries& series, std::int64_t at_cycle,
                               const Conceptor& c, const Matrix& w_loaded, const Vector& b,
                               const Matrix& w_out, int horizon) {
    if (horizon < 1) {
        throw ValidationError("predict_continuation: horizon must be >= 1");
    }
    const std::int64_t row = at_cycle - series.first_cycle;
    if (row < 0 || row >= series.length()) {
        throw ValidationError("predict_continuation: cycle " + std::to_string(at_cycle) +
                              " outside series [" + std::to_string(series.first_cycle) + ", " +
                              std::to_string(series.cycle_of_row(series.length() - 1)) + "]");
    }

    ReplayRun run;
    run.x_init = series.states.row(row).transpose();
    run.conceptor_source = c.source;
    run.states = autonomous_run(w_loaded, b, c, run.x_init, horizon);
    run.states.first_cycle = at_cycle + 1;
    run.outputs = readout_trajectory(run.states, w_out);
    return run;
}

}  // namespace rcmoves
