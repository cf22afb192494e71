#include "rcmoves/esn.hpp"

#include "rcmoves/error.hpp"
#include "rcmoves/rng.hpp"

#include <algorithm>
#include <cmath>

namespace rcmoves {

double ReservoirConfig::resolved_connectivity() const {
    if (connectivity > 0.0) {
        return connectivity;
    }
    return std::min(1.0, 10.0 / static_cast<double>(n_reservoir));
}

void ReservoirConfig::validate() const {
    if (n_inputs < 1 || n_reservoir < 1 || n_outputs < 1) {
        throw ValidationError("ReservoirConfig: all dimensions must be >= 1");
    }
    if (!(spectral_radius_target > 0.0) || spectral_radius_target > 1.25) {
        throw ValidationError("ReservoirConfig: spectral_radius_target must be in (0, 1.25]");
    }
    if (!(input_scale > 0.0) || !(bias_scale >= 0.0)) {
        throw ValidationError("ReservoirConfig: scales must be positive");
    }
    const double c = resolved_connectivity();
    if (!(c > 0.0) || c > 1.0) {
        throw ValidationError("ReservoirConfig: connectivity must be in (0, 1]");
    }
}

Reservoir init_reservoir(const ReservoirConfig& config) {
    config.validate();
    const int n = config.n_reservoir;
    const double conn = config.resolved_connectivity();
    Rng rng(config.seed);

    Reservoir r;
    r.config = config;
    r.w_in.resize(n, config.n_inputs);
    for (Eigen::Index i = 0; i < r.w_in.rows(); ++i) {
        for (Eigen::Index j = 0; j < r.w_in.cols(); ++j) {
            r.w_in(i, j) = rng.uniform(-config.input_scale, config.input_scale);
        }
    }

    r.w_res = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (rng.next_double() < conn) {
                r.w_res(i, j) = rng.uniform(-1.0, 1.0);
            }
        }
    }

    r.bias.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r.bias(i) = config.bias_scale > 0.0 ? rng.uniform(-config.bias_scale, config.bias_scale)
                                            : 0.0;
    }

    const double rho = spectral_radius(r.w_res);
    if (!(rho > 0.0)) {
        throw NumericalError("init_reservoir: degenerate draw, raw spectral radius is 0");
    }
    r.w_res *= config.spectral_radius_target / rho;
    return r;
}

namespace {

// tanh stays strictly inside (-1, 1) mathematically, but std::tanh rounds to
// +-1.0 for |arg| > ~19; pull those back to the nearest representable so the
// open-interval invariant (and atanh downstream) holds.
double squash(double v) {
    double out = std::tanh(v);
    if (out >= 1.0) {
        out = std::nextafter(1.0, 0.0);
    } else if (out <= -1.0) {
        out = std::nextafter(-1.0, 0.0);
    }
    return out;
}

}  // namespace

StateSeries drive(const Reservoir& reservoir, const Matrix& inputs, const Vector& x0,
                  std::int64_t first_cycle) {
    const Eigen::Index n = reservoir.w_res.rows();
    if (inputs.cols() != reservoir.w_in.cols()) {
        throw ValidationError("drive: input dimension " + std::to_string(inputs.cols()) +
                              " != N_in " + std::to_string(reservoir.w_in.cols()));
    }
    if (inputs.rows() < 1) {
        throw ValidationError("drive: empty input");
    }
    if (x0.size() != n) {
        throw ValidationError("drive: x0 dimension mismatch");
    }
    require_finite(inputs, "drive: inputs");
    require_finite(x0, "drive: x0");
    if (inputs.cwiseAbs().maxCoeff() > 1.0) {
        throw ValidationError("drive: inputs must be normalized into (-1, 1)");
    }

    StateSeries series;
    series.first_cycle = first_cycle;
    series.washout = 0;
    series.states.resize(inputs.rows(), n);

    Vector x = x0;
    Vector pre(n);
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        pre.noalias() = reservoir.w_res * x;
        pre.noalias() += reservoir.w_in * inputs.row(i).transpose();
        pre += reservoir.bias;
        for (Eigen::Index j = 0; j < n; ++j) {
            x(j) = squash(pre(j));
        }
        series.states.row(i) = x.transpose();
    }
    return series;
}

StateSeries drive(const Reservoir& reservoir, const GameTrace& normalized_trace, const Vector& x0) {
    if (normalized_trace.empty()) {
        throw ValidationError("drive: empty trace");
    }
    // State rows are addressed as first_cycle + row downstream, so the trace
    // must not skip cycles.
    const std::int64_t first = normalized_trace.first_cycle();
    for (std::size_t i = 0; i < normalized_trace.size(); ++i) {
        if (normalized_trace.states[i].cycle != first + static_cast<std::int64_t>(i)) {
            throw ValidationError("drive: trace cycles must be contiguous (gap before cycle " +
                                  std::to_string(normalized_trace.states[i].cycle) + ")");
        }
    }
    return drive(reservoir, normalized_trace.positions_matrix(), x0, first);
}

StateSeries trim_washout(const StateSeries& series, int washout) {
    if (washout < 0) {
        throw ValidationError("trim_washout: washout must be >= 0");
    }
    if (washout >= series.length()) {
        throw ValidationError("trim_washout: washout " + std::to_string(washout) +
                              " >= series length " + std::to_string(series.length()));
    }
    StateSeries out;
    out.states = series.states.bottomRows(series.length() - washout);
    out.first_cycle = series.first_cycle + washout;
    out.washout = series.washout + washout;
    return out;
}

ReadoutResult train_readout(const StateSeries& series, const Matrix& targets, double lambda) {
    if (series.length() != targets.rows()) {
        throw ValidationError("train_readout: states and targets are not row-aligned");
    }
    ReadoutResult result;
    result.w_out = ridge_solve(series.states, targets, lambda);
    const Matrix predicted = series.states * result.w_out.transpose();
    result.train_nrmse = nrmse(predicted, targets);
    return result;
}

LoadingResult load_reservoir(const StateSeries& series, const Matrix& drive_terms,
                             double lambda_w) {
    if (series.length() != drive_terms.rows()) {
        throw ValidationError("load_reservoir: states and drive terms are not row-aligned");
    }
    if (series.dim() != drive_terms.cols()) {
        throw ValidationError("load_reservoir: drive terms must be N-dimensional");
    }
    LoadingResult result;
    result.w_loaded = ridge_solve(series.states, drive_terms, lambda_w);
    const Matrix reconstructed = series.states * result.w_loaded.transpose();
    result.nrmse = nrmse(reconstructed, drive_terms);
    return result;
}

LoadingData make_loading_data(const Reservoir& reservoir, const StateSeries& series,
                              const Matrix& inputs) {
    if (series.length() != inputs.rows()) {
        throw ValidationError("make_loading_data: series and inputs are not row-aligned");
    }
    if (series.length() < 2) {
        throw ValidationError("make_loading_data: need at least 2 states");
    }
    const Eigen::Index l = series.length() - 1;
    LoadingData data;
    data.states.states = series.states.topRows(l);
    data.states.first_cycle = series.first_cycle;
    data.states.washout = series.washout;
    data.drive_terms.resize(l, series.dim());
    data.drive_terms.noalias() = series.states.topRows(l) * reservoir.w_res.transpose();
    data.drive_terms.noalias() += inputs.bottomRows(l) * reservoir.w_in.transpose();
    return data;
}

}  // namespace rcmoves
