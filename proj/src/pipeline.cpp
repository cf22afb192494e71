#include "rcmoves/pipeline.hpp"

#include "rcmoves/artifacts.hpp"
#include "rcmoves/clustering.hpp"
#include "rcmoves/conceptor.hpp"
#include "rcmoves/error.hpp"
#include "rcmoves/jsonio.hpp"
#include "rcmoves/moves.hpp"
#include "rcmoves/replay.hpp"
#include "rcmoves/svg.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace rcmoves {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

double parse_double_value(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ValidationError("config: bad numeric value for " + key + ": '" + value + "'");
    }
    return out;
}

std::int64_t parse_int_value(const std::string& key, const std::string& value) {
    std::int64_t out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ValidationError("config: bad integer value for " + key + ": '" + value + "'");
    }
    return out;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") {
        return true;
    }
    if (value == "off" || value == "false" || value == "0") {
        return false;
    }
    throw ValidationError("config: bad boolean value for " + key + ": '" + value + "'");
}

std::string trim_copy(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    const auto end = s.find_last_not_of(" \t");
    if (begin == std::string::npos) {
        return "";
    }
    return s.substr(begin, end - begin + 1);
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
    if (key == "input") {
        input = value;
    } else if (key == "out") {
        out_dir = value;
    } else if (key == "half_length") {
        field.half_length = parse_double_value(key, value);
    } else if (key == "half_width") {
        field.half_width = parse_double_value(key, value);
    } else if (key == "margin") {
        field.margin = parse_double_value(key, value);
    } else if (key == "n_reservoir") {
        reservoir.n_reservoir = static_cast<int>(parse_int_value(key, value));
    } else if (key == "spectral_radius") {
        reservoir.spectral_radius_target = parse_double_value(key, value);
    } else if (key == "input_scale") {
        reservoir.input_scale = parse_double_value(key, value);
    } else if (key == "bias_scale") {
        reservoir.bias_scale = parse_double_value(key, value);
    } else if (key == "connectivity") {
        reservoir.connectivity = parse_double_value(key, value);
    } else if (key == "washout") {
        washout = static_cast<int>(parse_int_value(key, value));
    } else if (key == "lambda_readout") {
        lambda_readout = parse_double_value(key, value);
    } else if (key == "lambda_loading") {
        lambda_loading = parse_double_value(key, value);
    } else if (key == "aperture") {
        aperture = parse_double_value(key, value);
    } else if (key == "k_max") {
        k_max = static_cast<int>(parse_int_value(key, value));
    } else if (key == "max_improve_iters") {
        max_improve_iters = static_cast<int>(parse_int_value(key, value));
    } else if (key == "min_len") {
        min_len = static_cast<int>(parse_int_value(key, value));
    } else if (key == "leadin") {
        leadin = static_cast<int>(parse_int_value(key, value));
    } else if (key == "min_conceptor_states") {
        min_conceptor_states = static_cast<int>(parse_int_value(key, value));
    } else if (key == "replay_steps") {
        replay_steps = static_cast<int>(parse_int_value(key, value));
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(parse_int_value(key, value));
    } else if (key == "cache") {
        use_cache = parse_bool_value(key, value);
    } else {
        throw ValidationError("config: unknown key '" + key + "'");
    }
}

PipelineConfig PipelineConfig::parse(std::istream& in) {
    PipelineConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim_copy(line.substr(0, line.find('#')));
        if (stripped.empty()) {
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config: expected key = value", line_no);
        }
        cfg.set(trim_copy(stripped.substr(0, eq)), trim_copy(stripped.substr(eq + 1)));
    }
    return cfg;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open config file: " + path.string());
    }
    return parse(in);
}

json PipelineConfig::to_json(bool include_paths) const {
    json j{{"half_length", field.half_length},
           {"half_width", field.half_width},
           {"margin", field.margin},
           {"n_reservoir", reservoir.n_reservoir},
           {"spectral_radius", reservoir.spectral_radius_target},
           {"input_scale", reservoir.input_scale},
           {"bias_scale", reservoir.bias_scale},
           {"connectivity", reservoir.connectivity},
           {"washout", washout},
           {"lambda_readout", lambda_readout},
           {"lambda_loading", lambda_loading},
           {"aperture", aperture},
           {"k_max", k_max},
           {"max_improve_iters", max_improve_iters},
           {"min_len", min_len},
           {"leadin", leadin},
           {"min_conceptor_states", min_conceptor_states},
           {"replay_steps", replay_steps},
           {"seed", seed}};
    if (include_paths) {
        j["input"] = input;
        j["out"] = out_dir;
        j["cache"] = use_cache;
    }
    return j;
}

void PipelineConfig::validate() const {
    field.validate();
    ReservoirConfig rc = reservoir;
    rc.seed = seed;
    rc.validate();
    if (washout < 0) {
        throw ValidationError("config: washout must be >= 0");
    }
    if (lambda_readout < 0.0 || lambda_loading < 0.0) {
        throw ValidationError("config: lambdas must be >= 0");
    }
    if (!(aperture > 0.0)) {
        throw ValidationError("config: aperture must be positive");
    }
    if (k_max < 2) {
        throw ValidationError("config: k_max must be >= 2");
    }
    if (max_improve_iters < 0) {
        throw ValidationError("config: max_improve_iters must be >= 0");
    }
    if (min_len < 1 || leadin < 0 || min_conceptor_states < 1 || replay_steps < 0) {
        throw ValidationError("config: segmentation/replay parameters out of range");
    }
}

namespace {

// Removes this run's outputs if a stage throws, so failures leave no
// half-written artifact set behind.
class ArtifactTracker {
public:
    explicit ArtifactTracker(fs::path root) : root_(std::move(root)) {}

    void write(const fs::path& relative, std::string_view content) {
        const fs::path full = root_ / relative;
        std::ofstream out(full, std::ios::binary);
        if (!out) {
            throw InputError("cannot write " + full.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.good()) {
            throw InputError("write failed for " + full.string());
        }
        written_.push_back(relative);
    }

    const std::vector<fs::path>& written() const { return written_; }

    void remove_all() noexcept {
        for (const fs::path& rel : written_) {
            std::error_code ec;
            fs::remove(root_ / rel, ec);
        }
    }

private:
    fs::path root_;
    std::vector<fs::path> written_;
};

int count_sign_changes(const Vector& v) {
    int changes = 0;
    double prev = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double s = v(i);
        if (s == 0.0) {
            continue;
        }
        if (prev != 0.0 && ((s > 0.0) != (prev > 0.0))) {
            ++changes;
        }
        prev = s;
    }
    return changes;
}

std::string cache_key(std::uint64_t input_hash, const PipelineConfig& cfg) {
    json basis{{"input", hex64(input_hash)},
               {"half_length", cfg.field.half_length},
               {"half_width", cfg.field.half_width},
               {"margin", cfg.field.margin},
               {"n_reservoir", cfg.reservoir.n_reservoir},
               {"n_inputs", cfg.reservoir.n_inputs},
               {"spectral_radius", cfg.reservoir.spectral_radius_target},
               {"input_scale", cfg.reservoir.input_scale},
               {"bias_scale", cfg.reservoir.bias_scale},
               {"connectivity", cfg.reservoir.connectivity},
               {"seed", cfg.seed}};
    return hex64(fnv1a64(basis.dump()));
}

struct DrivenData {
    Reservoir reservoir;
    StateSeries full;
    bool cache_hit = false;
};

DrivenData obtain_driven_states(const PipelineConfig& cfg, const GameTrace& normalized,
                                std::uint64_t input_hash) {
    DrivenData data;
    const fs::path cache_dir = fs::path(cfg.out_dir) / "cache" / cache_key(input_hash, cfg);
    const fs::path res_path = cache_dir / "reservoir.json";
    const fs::path states_path = cache_dir / "states.json";

    if (cfg.use_cache && fs::exists(res_path) && fs::exists(states_path)) {
        try {
            std::ifstream rin(res_path);
            std::ifstream sin(states_path);
            data.reservoir = read_reservoir_json(rin);
            data.full = read_series_json(sin);
            if (data.full.length() == static_cast<Eigen::Index>(normalized.size()) &&
                data.full.dim() == data.reservoir.config.n_reservoir &&
                data.reservoir.config.seed == cfg.seed) {
                data.cache_hit = true;
                return data;
            }
        } catch (const Error&) {
            // Stale or damaged cache entry: fall through and recompute.
        }
    }

    ReservoirConfig rc = cfg.reservoir;
    rc.seed = cfg.seed;
    data.reservoir = init_reservoir(rc);
    data.full = drive(data.reservoir, normalized, Vector::Zero(rc.n_reservoir));

    if (cfg.use_cache) {
        fs::create_directories(cache_dir);
        std::ostringstream res_text;
        write_reservoir_json(data.reservoir, res_text);
        std::ostringstream states_text;
        write_series_json(data.full, states_text);
        std::ofstream rout(res_path, std::ios::binary);
        rout << res_text.str();
        std::ofstream sout(states_path, std::ios::binary);
        sout << states_text.str();
    }
    return data;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineConfig cfg = config;
    cfg.reservoir.seed = cfg.seed;
    cfg.reservoir.n_inputs = kChannels;
    cfg.reservoir.n_outputs = kChannels;
    cfg.validate();
    if (cfg.input.empty()) {
        throw InputError("pipeline: no input file given");
    }

    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir / "plots");
    ArtifactTracker tracker(out_dir);

    try {
        PipelineResult result;
        result.out_dir = out_dir;

        // Ingest and normalize.
        const GameTrace raw = parse_csv_file(cfg.input);
        const GameTrace normalized = normalize(raw, cfg.field);
        const Matrix inputs = normalized.positions_matrix();
        const std::uint64_t input_hash = fnv1a64_file(cfg.input);

        // Drive (cached when enabled).
        DrivenData driven = obtain_driven_states(cfg, normalized, input_hash);
        result.cache_hit = driven.cache_hit;
        result.n_states = driven.full.length();
        if (cfg.washout >= driven.full.length()) {
            throw ValidationError("pipeline: washout " + std::to_string(cfg.washout) +
                                  " >= trace length " + std::to_string(driven.full.length()));
        }
        const StateSeries trimmed = trim_washout(driven.full, cfg.washout);
        const Eigen::Index labeled = trimmed.length();
        result.n_labeled = labeled;
        if (labeled < 8) {
            throw ValidationError("pipeline: too few post-washout states (" +
                                  std::to_string(labeled) + ")");
        }

        // Readout: state row i predicts the next world state.
        StateSeries readout_states;
        readout_states.states = trimmed.states.topRows(labeled - 1);
        readout_states.first_cycle = trimmed.first_cycle;
        readout_states.washout = trimmed.washout;
        const Matrix targets = inputs.middleRows(cfg.washout + 1, labeled - 1);
        const ReadoutResult readout = train_readout(readout_states, targets, cfg.lambda_readout);
        result.readout_nrmse = readout.train_nrmse;
        result.baseline_nrmse = nrmse(inputs.middleRows(cfg.washout, labeled - 1), targets);

        // Loading: absorb the drive so the reservoir can run input-free.
        const LoadingData loading_data =
            make_loading_data(driven.reservoir, trimmed, inputs.middleRows(cfg.washout, labeled));
        const LoadingResult loading =
            load_reservoir(loading_data.states, loading_data.drive_terms, cfg.lambda_loading);
        result.loading_nrmse = loading.nrmse;

        // Cluster reservoir states.
        const ClusterModel model = xmeans(trimmed.states, cfg.k_max, cfg.max_improve_iters,
                                          cfg.seed);
        result.k = model.k;
        {
            std::ostringstream text;
            write_labels_csv(trimmed.first_cycle, model.labels, text);
            tracker.write("labels.csv", text.str());
        }
        {
            std::ostringstream text;
            write_cluster_model_json(model, text);
            tracker.write("cluster_model.json", text.str());
        }

        // Moves.
        const std::vector<Move> moves =
            attach_leadin(segment(model.labels, cfg.min_len, trimmed.first_cycle), cfg.leadin,
                          raw.first_cycle());
        result.n_moves = static_cast<int>(moves.size());
        {
            std::ostringstream text;
            write_moves_jsonl(moves, text);
            tracker.write("moves.jsonl", text.str());
        }
        const MoveReport report = move_report(moves, model.labels, raw);

        // Conceptors: whole game plus one per sufficiently populated cluster.
        const Conceptor whole = compute_conceptor(correlation(trimmed), cfg.aperture,
                                                  "whole-game", labeled);
        const ClusterConceptors per_cluster =
            cluster_conceptors(trimmed, model.labels, cfg.aperture, cfg.min_conceptor_states);
        result.n_conceptors = static_cast<int>(per_cluster.by_cluster.size());
        result.skipped_clusters = per_cluster.skipped;
        {
            std::vector<const Conceptor*> all;
            all.push_back(&whole);
            for (const auto& [id, c] : per_cluster.by_cluster) {
                all.push_back(&c);
            }
            std::ostringstream text;
            write_conceptors_json(all, text);
            tracker.write("conceptors.json", text.str());
        }

        // Whole-game replay from the first post-washout state.
        const int steps = cfg.replay_steps > 0 ? cfg.replay_steps : static_cast<int>(labeled);
        result.replay_steps = steps;
        const StateSeries replay_states =
            autonomous_run(loading.w_loaded, driven.reservoir.bias, whole,
                           trimmed.states.row(0).transpose(), steps);
        const Matrix replay_outputs = readout_trajectory(replay_states, readout.w_out);
        const Matrix replay_field = denormalize(replay_outputs, cfg.field);
        {
            std::ostringstream text;
            write_positions_csv(replay_field, 0, text);
            tracker.write("replay.csv", text.str());
        }
        result.replay_ball_sign_changes = count_sign_changes(replay_field.col(0));
        result.replay_ball_x_min = replay_field.col(0).minCoeff();
        result.replay_ball_x_max = replay_field.col(0).maxCoeff();
        result.replay_state_absmax = replay_states.states.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < replay_field.rows(); ++i) {
            for (Eigen::Index c = 0; c < replay_field.cols(); ++c) {
                const double bound = (c % 2 == 0) ? cfg.field.x_bound() : cfg.field.y_bound();
                if (std::abs(replay_field(i, c)) > bound) {
                    ++result.out_of_field_outputs;
                }
            }
        }

        // Plots: full trace, replay, and every move of the busiest cluster.
        const Matrix raw_positions = raw.positions_matrix();
        {
            PlotStyle style;
            style.title = "goalies and ball, input trace";
            tracker.write(fs::path("plots") / "trace.svg",
                          plot_trajectories(raw_positions, PlotSelection::goalies_and_ball(),
                                            cfg.field, style));
        }
        {
            PlotStyle style;
            style.title = "goalies and ball, whole-game conceptor replay";
            tracker.write(fs::path("plots") / "replay.svg",
                          plot_trajectories(replay_field, PlotSelection::goalies_and_ball(),
                                            cfg.field, style));
        }
        int plot_cluster = -1;
        int plot_cluster_moves = 0;
        for (const ClusterMoveStats& s : report.clusters) {
            if (s.n_moves > plot_cluster_moves) {
                plot_cluster = s.cluster;
                plot_cluster_moves = s.n_moves;
            }
        }
        if (plot_cluster >= 0) {
            int index = 0;
            for (const Move& m : moves) {
                if (m.cluster != plot_cluster) {
                    continue;
                }
                const Eigen::Index begin = m.start_cycle - m.leadin_cycles - raw.first_cycle();
                const Eigen::Index count = m.length() + m.leadin_cycles;
                PlotStyle style;
                style.title = "cluster " + std::to_string(plot_cluster) + " move " +
                              std::to_string(index);
                tracker.write(fs::path("plots") / ("move_c" + std::to_string(plot_cluster) +
                                                   "_" + std::to_string(index) + ".svg"),
                              plot_trajectories(raw_positions.middleRows(begin, count),
                                                PlotSelection::all(), cfg.field, style));
                ++index;
            }
        }

        // Reports.
        json report_json = report_to_json(report);
        report_json["k"] = model.k;
        report_json["inertia"] = model.inertia;
        report_json["bic"] = model.bic;
        report_json["n_states"] = result.n_states;
        report_json["n_labeled"] = result.n_labeled;
        report_json["readout_nrmse"] = result.readout_nrmse;
        report_json["baseline_nrmse"] = result.baseline_nrmse;
        report_json["loading_nrmse"] = result.loading_nrmse;
        report_json["skipped_clusters"] = per_cluster.skipped;
        report_json["replay_steps"] = steps;
        report_json["replay_ball_sign_changes"] = result.replay_ball_sign_changes;
        report_json["out_of_field_outputs"] = result.out_of_field_outputs;
        tracker.write("report.json", report_json.dump(2) + "\n");
        {
            std::ostringstream text;
            text << "pipeline report for " << fs::path(cfg.input).filename().string() << "\n";
            text << "states: " << result.n_states << " driven, " << result.n_labeled
                 << " after washout " << cfg.washout << "\n";
            text << "readout nrmse: " << result.readout_nrmse
                 << " (previous-value baseline: " << result.baseline_nrmse << ")\n";
            text << "loading nrmse: " << result.loading_nrmse << "\n";
            text << "clusters: k = " << model.k << " (k_max " << cfg.k_max << ", "
                 << cfg.max_improve_iters << " improve-structure rounds)\n";
            text << "conceptors: whole-game + " << result.n_conceptors << " clusters";
            if (!per_cluster.skipped.empty()) {
                text << " (skipped, fewer than " << cfg.min_conceptor_states << " states:";
                for (int id : per_cluster.skipped) {
                    text << ' ' << id;
                }
                text << ")";
            }
            text << "\n";
            text << "replay: " << steps << " steps, ball x sign changes: "
                 << result.replay_ball_sign_changes << ", out-of-field outputs: "
                 << result.out_of_field_outputs << "\n\n";
            text << report_to_text(report);
            tracker.write("report.txt", text.str());
        }

        // Manifest with content hashes; hash covers content only, not paths.
        json artifacts = json::object();
        for (const fs::path& rel : tracker.written()) {
            const fs::path full = out_dir / rel;
            artifacts[rel.generic_string()] = json{
                {"bytes", fs::file_size(full)}, {"fnv1a64", hex64(fnv1a64_file(full))}};
        }
        json manifest{{"input", json{{"path", cfg.input},
                                     {"bytes", fs::file_size(cfg.input)},
                                     {"fnv1a64", hex64(input_hash)}}},
                      {"config", cfg.to_json(/*include_paths=*/false)},
                      {"artifacts", artifacts}};
        std::string hash_basis = cfg.to_json(false).dump() + hex64(input_hash);
        for (const auto& [name, entry] : artifacts.items()) {
            hash_basis += name + entry.at("fnv1a64").get<std::string>();
        }
        result.manifest_hash = hex64(fnv1a64(hash_basis));
        manifest["hash"] = result.manifest_hash;
        {
            std::ofstream mout(out_dir / "manifest.json", std::ios::binary);
            mout << manifest.dump(2) << "\n";
            if (!mout.good()) {
                throw InputError("write failed for manifest.json");
            }
        }
        return result;
    } catch (...) {
        tracker.remove_all();
        throw;
    }
}

}  // namespace rcmoves
