#pragma once

#include "rcmoves/ingest.hpp"
#include "rcmoves/linalg.hpp"

#include <cstdint>

namespace rcmoves {

struct ReservoirConfig {
    int n_inputs = kChannels;
    int n_reservoir = 600;
    int n_outputs = kChannels;
    double spectral_radius_target = 0.95;
    double input_scale = 0.4;  // leaves tanh headroom so conceptor replay stays in (-1, 1)
    double bias_scale = 0.4;
    double connectivity = 0.0;  // fraction in (0,1]; <= 0 selects the 10/N default
    std::uint64_t seed = 1;

    double resolved_connectivity() const;
    void validate() const;
};

// Fixed random weights; immutable after construction.
struct Reservoir {
    Matrix w_in;   // N x N_in
    Matrix w_res;  // N x N, scaled to the target spectral radius
    Vector bias;   // N
    ReservoirConfig config;
};

// Harvested reservoir states: row n holds x(n+1), the state produced by input
// row n (= p(n+1)). first_cycle is the cycle of input row 0; washout counts
// rows already removed from the front.
struct StateSeries {
    Matrix states;
    std::int64_t first_cycle = 0;
    int washout = 0;

    Eigen::Index length() const { return states.rows(); }
    Eigen::Index dim() const { return states.cols(); }
    std::int64_t cycle_of_row(Eigen::Index row) const { return first_cycle + row; }
};

// Draws W_in, W_res and b from the seeded generator and rescales W_res to the
// target spectral radius. Identical configs (including seed) give
// bit-identical reservoirs.
Reservoir init_reservoir(const ReservoirConfig& config);

// Runs x(n+1) = tanh(W_res x(n) + W_in p(n+1) + b) over the input rows
// starting from x0. Inputs must already be normalized into (-1, 1).
StateSeries drive(const Reservoir& reservoir, const Matrix& inputs, const Vector& x0,
                  std::int64_t first_cycle = 0);
StateSeries drive(const Reservoir& reservoir, const GameTrace& normalized_trace, const Vector& x0);

// Drops the first `washout` rows, advancing first_cycle and recording the cut.
StateSeries trim_washout(const StateSeries& series, int washout);

struct ReadoutResult {
    Matrix w_out;       // N_out x N
    double train_nrmse;
};

// Ridge readout mapping each state row to its aligned target row
// (in the pipeline: the next world state).
ReadoutResult train_readout(const StateSeries& series, const Matrix& targets, double lambda);

struct LoadingResult {
    Matrix w_loaded;  // N x N
    double nrmse;     // pre-activation reconstruction quality
};

// Absorbs the input drive into the recurrent weights: finds W~ with
// W~ x(n) ~= W_res x(n) + W_in p(n+1), so tanh(W~ x(n) + b) regenerates
// x(n+1) without external input. drive_terms row n pairs with states row n.
LoadingResult load_reservoir(const StateSeries& series, const Matrix& drive_terms, double lambda_w);

// Builds the aligned (old state, pre-activation drive) pairs for loading from
// a driven series and its input rows: pair i is (states row i,
// W_res states(i) + W_in inputs(i+1)), covering rows 0..L-2.
struct LoadingData {
    StateSeries states;  // L-1 rows
    Matrix drive_terms;  // L-1 x N
};
LoadingData make_loading_data(const Reservoir& reservoir, const StateSeries& series,
                              const Matrix& inputs);

}  // namespace rcmoves
