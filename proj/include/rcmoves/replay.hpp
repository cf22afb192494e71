#pragma once

#include "rcmoves/conceptor.hpp"
#include "rcmoves/esn.hpp"

#include <cstdint>
#include <string>

namespace rcmoves {

// One autonomous run of the loaded reservoir plus its readout trajectory
// (normalized coordinates; denormalize before plotting in field metres).
struct ReplayRun {
    StateSeries states;
    Matrix outputs;  // steps x N_out
    std::string conceptor_source;
    Vector x_init;
};

// Input-free run x(n+1) = C tanh(W_loaded x(n) + b) for `steps` steps from
// x_init. Throws NumericalError naming the step index if a state goes
// non-finite.
StateSeries autonomous_run(const Matrix& w_loaded, const Vector& b, const Conceptor& c,
                           const Vector& x_init, int steps);

// Row-wise readout y(n) = W_out x(n); no clipping.
Matrix readout_trajectory(const StateSeries& states, const Matrix& w_out);

// Short-horizon prediction: starts an autonomous run from the harvested state
// at `at_cycle` under the given conceptor (in the pipeline: the conceptor of
// the move active at that cycle) and reads out the predicted world states.
ReplayRun predict_continuation(const StateSeries& series, std::int64_t at_cycle,
                               const Conceptor& c, const Matrix& w_loaded, const Vector& b,
                               const Matrix& w_out, int horizon);

}  // namespace rcmoves
