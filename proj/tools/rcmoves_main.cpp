// Command-line front end: each subcommand is one stage of the
// ingest -> drive -> cluster -> moves -> conceptors -> replay pipeline,
// plus `pipeline` for the whole chain, `plot` for SVG rendering and
// `synth` for the bundled deterministic corpus.
//
// Exit codes: 0 ok, 2 input error, 3 validation error, 4 numerical error.

#include "rcmoves/artifacts.hpp"
#include "rcmoves/clustering.hpp"
#include "rcmoves/conceptor.hpp"
#include "rcmoves/error.hpp"
#include "rcmoves/esn.hpp"
#include "rcmoves/ingest.hpp"
#include "rcmoves/moves.hpp"
#include "rcmoves/pipeline.hpp"
#include "rcmoves/replay.hpp"
#include "rcmoves/svg.hpp"
#include "rcmoves/synthetic.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace rcmoves;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string input;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;

    PipelineConfig build() const {
        PipelineConfig cfg =
            config_path.empty() ? PipelineConfig{} : PipelineConfig::load(config_path);
        for (const std::string& kv : sets) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos) {
                throw ValidationError("--set expects key=value, got '" + kv + "'");
            }
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!input.empty()) {
            cfg.input = input;
        }
        if (!out.empty()) {
            cfg.out_dir = out;
        }
        if (seed) {
            cfg.seed = *seed;
        }
        cfg.reservoir.seed = cfg.seed;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key = value configuration file");
    cmd->add_option("-i,--input", opts.input, "input trace CSV");
    cmd->add_option("-o,--out", opts.out, "output directory");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--set", opts.sets, "override one config key (key=value), repeatable");
}

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

std::string slurp(const fs::path& path, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + what + ": " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) {
        throw InputError("write failed for " + path.string());
    }
}

StateSeries read_states_artifact(const fs::path& out_dir) {
    std::ifstream in(out_dir / "states.json");
    if (!in) {
        throw InputError("missing states.json under " + out_dir.string() +
                         " (run the drive stage first)");
    }
    return read_series_json(in);
}

PlotSelection parse_selection(const std::string& spec) {
    if (spec.empty() || spec == "goalies") {
        return PlotSelection::goalies_and_ball();
    }
    if (spec == "all") {
        return PlotSelection::all();
    }
    PlotSelection sel;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token == "ball") {
            sel.ball = true;
        } else if ((token.size() >= 2) && (token[0] == 'l' || token[0] == 'r')) {
            const int num = std::atoi(token.c_str() + 1);
            if (num < 1 || num > 11) {
                throw ValidationError("plot: bad object '" + token + "'");
            }
            (token[0] == 'l' ? sel.left : sel.right)[static_cast<std::size_t>(num - 1)] = true;
        } else {
            throw ValidationError("plot: bad object '" + token +
                                  "' (expected ball, l1..l11, r1..r11, goalies, all)");
        }
    }
    return sel;
}

// Re-derives readout and loading for the standalone replay stage from the
// saved reservoir/states plus the original input trace.
struct ReplayInputs {
    Reservoir reservoir;
    StateSeries trimmed;
    Matrix w_out;
    Matrix w_loaded;
};

ReplayInputs prepare_replay(const PipelineConfig& cfg) {
    ReplayInputs r;
    {
        std::ifstream in(fs::path(cfg.out_dir) / "reservoir.json");
        if (!in) {
            throw InputError("missing reservoir.json under " + cfg.out_dir);
        }
        r.reservoir = read_reservoir_json(in);
    }
    r.trimmed = read_states_artifact(cfg.out_dir);

    const GameTrace raw = parse_csv_file(cfg.input);
    const GameTrace norm = normalize(raw, cfg.field);
    const Matrix inputs = norm.positions_matrix();
    const int washout = r.trimmed.washout;
    const Eigen::Index labeled = r.trimmed.length();
    if (washout + labeled != inputs.rows()) {
        throw ValidationError("replay: states.json does not match the input trace");
    }

    StateSeries readout_states;
    readout_states.states = r.trimmed.states.topRows(labeled - 1);
    readout_states.first_cycle = r.trimmed.first_cycle;
    r.w_out = train_readout(readout_states, inputs.middleRows(washout + 1, labeled - 1),
                            cfg.lambda_readout)
                  .w_out;
    const LoadingData ld =
        make_loading_data(r.reservoir, r.trimmed, inputs.middleRows(washout, labeled));
    r.w_loaded = load_reservoir(ld.states, ld.drive_terms, cfg.lambda_loading).w_loaded;
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"segment multivariate game traces into moves by clustering echo-state "
                 "reservoir states, and replay dynamics with conceptors"};
    app.require_subcommand(1);

    // synth -------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "write the deterministic synthetic trace CSV");
    int synth_steps = 200;
    std::string synth_out = "synthetic.csv";
    synth->add_option("--steps", synth_steps, "trace length in cycles")->capture_default_str();
    synth->add_option("-o,--out", synth_out, "output CSV path")->capture_default_str();
    synth->callback([&]() {
        std::exit(run_guarded([&]() {
            write_trace_csv_file(synthetic_trace(synth_steps), synth_out);
            std::cout << "wrote " << synth_out << " (" << synth_steps << " cycles)\n";
        }));
    });

    // ingest ------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "parse, validate and normalize a trace CSV");
    auto ingest_opts = std::make_shared<CommonOpts>();
    add_common(ingest, *ingest_opts);
    ingest->callback([ingest_opts]() {
        std::exit(run_guarded([&]() {
            const PipelineConfig cfg = ingest_opts->build();
            const GameTrace raw = parse_csv_file(cfg.input);
            const GameTrace norm = normalize(raw, cfg.field);
            fs::create_directories(cfg.out_dir);
            write_trace_csv_file(norm, fs::path(cfg.out_dir) / "normalized.csv");
            std::cout << "parsed " << raw.size() << " world states from " << cfg.input;
            if (!raw.team_left.empty()) {
                std::cout << " (" << raw.team_left << " vs " << raw.team_right << ")";
            }
            std::cout << "\nwrote " << (fs::path(cfg.out_dir) / "normalized.csv").string()
                      << "\n";
        }));
    });

    // drive ---------------------------------------------------------------
    auto* drive_cmd = app.add_subcommand(
        "drive", "build the reservoir, harvest states, write reservoir.json + states.json");
    auto drive_opts = std::make_shared<CommonOpts>();
    add_common(drive_cmd, *drive_opts);
    drive_cmd->callback([drive_opts]() {
        std::exit(run_guarded([&]() {
            PipelineConfig cfg = drive_opts->build();
            cfg.validate();
            const GameTrace raw = parse_csv_file(cfg.input);
            const GameTrace norm = normalize(raw, cfg.field);
            ReservoirConfig rc = cfg.reservoir;
            rc.seed = cfg.seed;
            const Reservoir reservoir = init_reservoir(rc);
            const StateSeries full =
                drive(reservoir, norm, Vector::Zero(rc.n_reservoir));
            if (cfg.washout >= full.length()) {
                throw ValidationError("washout >= trace length");
            }
            const StateSeries trimmed = trim_washout(full, cfg.washout);
            fs::create_directories(cfg.out_dir);
            std::ostringstream rtext;
            write_reservoir_json(reservoir, rtext);
            write_file(fs::path(cfg.out_dir) / "reservoir.json", rtext.str());
            std::ostringstream stext;
            write_series_json(trimmed, stext);
            write_file(fs::path(cfg.out_dir) / "states.json", stext.str());
            std::cout << "harvested " << trimmed.length() << " states (dim "
                      << trimmed.dim() << ", washout " << cfg.washout << ")\n";
        }));
    });

    // cluster -------------------------------------------------------------
    auto* cluster_cmd =
        app.add_subcommand("cluster", "X-means over harvested states, write labels.csv");
    auto cluster_opts = std::make_shared<CommonOpts>();
    add_common(cluster_cmd, *cluster_opts);
    cluster_cmd->callback([cluster_opts]() {
        std::exit(run_guarded([&]() {
            const PipelineConfig cfg = cluster_opts->build();
            const StateSeries states = read_states_artifact(cfg.out_dir);
            const ClusterModel model =
                xmeans(states.states, cfg.k_max, cfg.max_improve_iters, cfg.seed);
            std::ostringstream labels_text;
            write_labels_csv(states.first_cycle, model.labels, labels_text);
            write_file(fs::path(cfg.out_dir) / "labels.csv", labels_text.str());
            std::ostringstream model_text;
            write_cluster_model_json(model, model_text);
            write_file(fs::path(cfg.out_dir) / "cluster_model.json", model_text.str());
            std::cout << "k = " << model.k << ", inertia = " << model.inertia << ", bic = "
                      << model.bic << "\n";
        }));
    });

    // moves ---------------------------------------------------------------
    auto* moves_cmd =
        app.add_subcommand("moves", "segment labels into moves, write moves.jsonl + report");
    auto moves_opts = std::make_shared<CommonOpts>();
    add_common(moves_cmd, *moves_opts);
    moves_cmd->callback([moves_opts]() {
        std::exit(run_guarded([&]() {
            const PipelineConfig cfg = moves_opts->build();
            std::ifstream in(fs::path(cfg.out_dir) / "labels.csv");
            if (!in) {
                throw InputError("missing labels.csv under " + cfg.out_dir +
                                 " (run the cluster stage first)");
            }
            const auto [first_cycle, labels] = read_labels_csv(in);
            GameTrace trace;
            std::int64_t trace_start = first_cycle;
            if (!cfg.input.empty()) {
                trace = parse_csv_file(cfg.input);
                trace_start = trace.first_cycle();
            } else {
                trace.source = "labels.csv";
            }
            const std::vector<Move> moves = attach_leadin(
                segment(labels, cfg.min_len, first_cycle), cfg.leadin, trace_start);
            std::ostringstream jtext;
            write_moves_jsonl(moves, jtext);
            write_file(fs::path(cfg.out_dir) / "moves.jsonl", jtext.str());
            const MoveReport report = move_report(moves, labels, trace);
            write_file(fs::path(cfg.out_dir) / "report.txt", report_to_text(report));
            write_file(fs::path(cfg.out_dir) / "report.json",
                       report_to_json(report).dump(2) + "\n");
            std::cout << moves.size() << " moves across " << report.n_clusters
                      << " clusters\n";
        }));
    });

    // conceptors ----------------------------------------------------------
    auto* conceptors_cmd = app.add_subcommand(
        "conceptors", "whole-game and per-cluster conceptors, write conceptors.json");
    auto conceptor_opts = std::make_shared<CommonOpts>();
    add_common(conceptors_cmd, *conceptor_opts);
    conceptors_cmd->callback([conceptor_opts]() {
        std::exit(run_guarded([&]() {
            const PipelineConfig cfg = conceptor_opts->build();
            const StateSeries states = read_states_artifact(cfg.out_dir);
            std::ifstream in(fs::path(cfg.out_dir) / "labels.csv");
            if (!in) {
                throw InputError("missing labels.csv under " + cfg.out_dir);
            }
            const auto [first_cycle, labels] = read_labels_csv(in);
            if (first_cycle != states.first_cycle ||
                static_cast<Eigen::Index>(labels.size()) != states.length()) {
                throw ValidationError("conceptors: labels.csv does not match states.json");
            }
            const Conceptor whole =
                compute_conceptor(correlation(states), cfg.aperture, "whole-game",
                                  states.length());
            const ClusterConceptors per_cluster =
                cluster_conceptors(states, labels, cfg.aperture, cfg.min_conceptor_states);
            std::vector<const Conceptor*> all;
            all.push_back(&whole);
            for (const auto& [id, c] : per_cluster.by_cluster) {
                all.push_back(&c);
            }
            std::ostringstream text;
            write_conceptors_json(all, text);
            write_file(fs::path(cfg.out_dir) / "conceptors.json", text.str());
            std::cout << "wrote whole-game + " << per_cluster.by_cluster.size()
                      << " cluster conceptors";
            if (!per_cluster.skipped.empty()) {
                std::cout << " (skipped " << per_cluster.skipped.size() << " small clusters)";
            }
            std::cout << "\n";
        }));
    });

    // replay ----------------------------------------------------------------
    auto* replay_cmd = app.add_subcommand(
        "replay", "conceptor-constrained autonomous run, write replay.csv + SVG");
    auto replay_opts = std::make_shared<CommonOpts>();
    add_common(replay_cmd, *replay_opts);
    auto replay_source = std::make_shared<std::string>("whole-game");
    auto replay_steps = std::make_shared<int>(0);
    replay_cmd->add_option("--conceptor", *replay_source,
                           "conceptor source to run under (whole-game or a cluster id)");
    replay_cmd->add_option("--steps", *replay_steps, "steps to generate (0 = labeled span)");
    replay_cmd->callback([replay_opts, replay_source, replay_steps]() {
        std::exit(run_guarded([&]() {
            const PipelineConfig cfg = replay_opts->build();
            const ReplayInputs rin = prepare_replay(cfg);
            std::ifstream cin_(fs::path(cfg.out_dir) / "conceptors.json");
            if (!cin_) {
                throw InputError("missing conceptors.json under " + cfg.out_dir);
            }
            const std::vector<Conceptor> conceptors = read_conceptors_json(cin_);
            const Conceptor* chosen = nullptr;
            for (const Conceptor& c : conceptors) {
                if (c.source == *replay_source) {
                    chosen = &c;
                }
            }
            if (chosen == nullptr) {
                throw ValidationError("replay: no conceptor with source '" + *replay_source +
                                      "' in conceptors.json");
            }
            const int steps =
                *replay_steps > 0 ? *replay_steps : static_cast<int>(rin.trimmed.length());
            const StateSeries run =
                autonomous_run(rin.w_loaded, rin.reservoir.bias, *chosen,
                               rin.trimmed.states.row(0).transpose(), steps);
            const Matrix outputs = readout_trajectory(run, rin.w_out);
            const Matrix field = denormalize(outputs, cfg.field);
            std::ostringstream text;
            write_positions_csv(field, 0, text);
            write_file(fs::path(cfg.out_dir) / "replay.csv", text.str());
            PlotStyle style;
            style.title = "conceptor replay (" + *replay_source + ")";
            write_file(fs::path(cfg.out_dir) / "plots" / "replay.svg",
                       plot_trajectories(field, PlotSelection::goalies_and_ball(), cfg.field,
                                         style));
            std::cout << "replayed " << steps << " steps under '" << *replay_source << "'\n";
        }));
    });

    // plot ------------------------------------------------------------------
    auto* plot_cmd = app.add_subcommand("plot", "render a trace CSV as an SVG field plot");
    auto plot_opts = std::make_shared<CommonOpts>();
    add_common(plot_cmd, *plot_opts);
    auto plot_objects = std::make_shared<std::string>("goalies");
    auto plot_out = std::make_shared<std::string>("plot.svg");
    plot_cmd->add_option("--objects", *plot_objects,
                         "comma list of ball,l1..l11,r1..r11, or goalies/all");
    plot_cmd->add_option("--svg", *plot_out, "output SVG path")->capture_default_str();
    plot_cmd->callback([plot_opts, plot_objects, plot_out]() {
        std::exit(run_guarded([&]() {
            const PipelineConfig cfg = plot_opts->build();
            const GameTrace trace = parse_csv_file(cfg.input);
            PlotStyle style;
            style.title = fs::path(cfg.input).filename().string();
            write_file(*plot_out,
                       plot_trajectories(trace.positions_matrix(),
                                         parse_selection(*plot_objects), cfg.field, style));
            std::cout << "wrote " << *plot_out << "\n";
        }));
    });

    // pipeline ----------------------------------------------------------------
    auto* pipeline_cmd = app.add_subcommand("pipeline", "run the full chain and write all artifacts");
    auto pipeline_opts = std::make_shared<CommonOpts>();
    add_common(pipeline_cmd, *pipeline_opts);
    pipeline_cmd->callback([pipeline_opts]() {
        std::exit(run_guarded([&]() {
            const PipelineConfig cfg = pipeline_opts->build();
            const PipelineResult result = run_pipeline(cfg);
            std::cout << "states: " << result.n_states << " (" << result.n_labeled
                      << " labeled)\n"
                      << "k = " << result.k << ", moves = " << result.n_moves
                      << ", conceptors = " << result.n_conceptors << " + whole-game\n"
                      << "readout nrmse = " << result.readout_nrmse << " (baseline "
                      << result.baseline_nrmse << "), loading nrmse = "
                      << result.loading_nrmse << "\n"
                      << "replay: " << result.replay_steps << " steps, ball x sign changes = "
                      << result.replay_ball_sign_changes << "\n"
                      << "manifest hash: " << result.manifest_hash
                      << (result.cache_hit ? " (cache hit)" : "") << "\n";
        }));
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}
