#pragma once

#include "rcmoves/esn.hpp"
#include "rcmoves/ingest.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace rcmoves {

// Complete parameter set for one end-to-end run. Loadable from a key=value
// text file; CLI flags override file values.
struct PipelineConfig {
    std::string input;
    std::string out_dir = "out";
    FieldSpec field;
    ReservoirConfig reservoir;
    int washout = 100;
    double lambda_readout = 1e-4;
    double lambda_loading = 1e-4;
    double aperture = 100.0;  // whole-game replay collapses below ~50 on the bundled corpus
    int k_max = 100;
    int max_improve_iters = 5;
    int min_len = 3;
    int leadin = 10;
    int min_conceptor_states = 5;
    int replay_steps = 0;  // 0 selects the labeled span length
    std::uint64_t seed = 1;
    bool use_cache = true;

    // Applies one key=value assignment; throws ValidationError on unknown
    // keys or unparseable values.
    void set(const std::string& key, const std::string& value);

    static PipelineConfig parse(std::istream& in);
    static PipelineConfig load(const std::filesystem::path& path);

    // include_paths = false omits input/out_dir (used for the manifest hash,
    // which should depend on content, not on where it lives).
    nlohmann::json to_json(bool include_paths = true) const;
    void validate() const;
};

struct PipelineResult {
    int k = 0;
    Eigen::Index n_states = 0;   // driven rows (full trace)
    Eigen::Index n_labeled = 0;  // post-washout rows
    double readout_nrmse = 0.0;
    double baseline_nrmse = 0.0;  // predict-the-previous-value reference
    double loading_nrmse = 0.0;
    int n_moves = 0;
    int n_conceptors = 0;  // per-cluster conceptors (whole-game excluded)
    std::vector<int> skipped_clusters;
    int replay_steps = 0;
    int replay_ball_sign_changes = 0;
    double replay_ball_x_min = 0.0;   // field metres
    double replay_ball_x_max = 0.0;
    double replay_state_absmax = 0.0;  // largest |component| over replay states
    Eigen::Index out_of_field_outputs = 0;
    bool cache_hit = false;
    std::string manifest_hash;
    std::filesystem::path out_dir;
};

// Runs ingest -> drive -> cluster -> segment -> conceptors -> replay and
// writes labels.csv, moves.jsonl, report.txt/.json, conceptors.json,
// replay.csv, plots/*.svg and manifest.json under config.out_dir. On error,
// files written by the failed run are removed before the exception leaves.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace rcmoves
