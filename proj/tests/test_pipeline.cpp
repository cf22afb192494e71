#include "rcmoves/artifacts.hpp"
#include "rcmoves/error.hpp"
#include "rcmoves/pipeline.hpp"
#include "rcmoves/synthetic.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rcmoves;
namespace fs = std::filesystem;

namespace {

// Desk-scale pipeline configuration against the bundled synthetic trace.
PipelineConfig desk_config(const fs::path& dir, const std::string& out_name) {
    PipelineConfig cfg;
    cfg.input = (dir / "trace.csv").string();
    cfg.out_dir = (dir / out_name).string();
    cfg.reservoir.n_reservoir = 60;
    cfg.washout = 40;
    cfg.k_max = 12;
    cfg.seed = 5;
    return cfg;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("config file parsing with overrides") {
    std::istringstream in("# experiment\n"
                          "input = game.csv\n"
                          "n_reservoir = 300   # safe desk size\n"
                          "aperture=12.5\n"
                          "seed = 9\n"
                          "cache = off\n");
    PipelineConfig cfg = PipelineConfig::parse(in);
    CHECK(cfg.input == "game.csv");
    CHECK(cfg.reservoir.n_reservoir == 300);
    CHECK(cfg.aperture == 12.5);
    CHECK(cfg.seed == 9);
    CHECK_FALSE(cfg.use_cache);
    cfg.set("k_max", "30");
    CHECK(cfg.k_max == 30);
    CHECK_THROWS_AS(cfg.set("bogus", "1"), ValidationError);
    CHECK_THROWS_AS(cfg.set("k_max", "many"), ValidationError);
    std::istringstream bad("washout 100\n");
    CHECK_THROWS_AS(PipelineConfig::parse(bad), ParseError);
}

TEST_CASE("config validation catches bad ranges") {
    PipelineConfig cfg;
    cfg.k_max = 1;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = PipelineConfig{};
    cfg.washout = -2;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = PipelineConfig{};
    cfg.aperture = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("full pipeline on the bundled trace writes a consistent artifact set") {
    TempDir tmp("rcmoves_pipeline_test");
    write_trace_csv_file(synthetic_trace(200), tmp.path / "trace.csv");
    const PipelineConfig cfg = desk_config(tmp.path, "run1");
    const PipelineResult result = run_pipeline(cfg);

    const fs::path out = tmp.path / "run1";
    for (const char* name : {"labels.csv", "cluster_model.json", "moves.jsonl", "report.txt",
                             "report.json", "conceptors.json", "replay.csv", "manifest.json"}) {
        CHECK(fs::exists(out / name));
    }
    CHECK(fs::exists(out / "plots" / "trace.svg"));
    CHECK(fs::exists(out / "plots" / "replay.svg"));

    // Label count equals the post-washout state count.
    std::ifstream lin(out / "labels.csv");
    const auto [first_cycle, labels] = read_labels_csv(lin);
    CHECK(first_cycle == cfg.washout);
    CHECK(static_cast<Eigen::Index>(labels.size()) == result.n_labeled);
    CHECK(result.n_labeled == 160);
    CHECK(result.k >= 2);
    CHECK(result.k <= cfg.k_max);

    // Moves partition the labeled cycles.
    std::ifstream min(out / "moves.jsonl");
    const std::vector<Move> moves = read_moves_jsonl(min);
    REQUIRE_FALSE(moves.empty());
    std::int64_t expected_start = first_cycle;
    std::int64_t covered = 0;
    for (const Move& m : moves) {
        CHECK(m.start_cycle == expected_start);
        for (std::int64_t c = m.start_cycle; c <= m.end_cycle; ++c) {
            CHECK(labels[static_cast<std::size_t>(c - first_cycle)] == m.cluster);
        }
        covered += m.length();
        expected_start = m.end_cycle + 1;
    }
    CHECK(covered == static_cast<std::int64_t>(labels.size()));

    // Conceptors: whole-game plus every sufficiently populated cluster.
    std::ifstream cin_(out / "conceptors.json");
    const std::vector<Conceptor> conceptors = read_conceptors_json(cin_);
    REQUIRE_FALSE(conceptors.empty());
    CHECK(conceptors[0].source == "whole-game");
    CHECK(static_cast<int>(conceptors.size()) == 1 + result.n_conceptors);
    for (const Conceptor& c : conceptors) {
        CHECK(c.eigenvalues.maxCoeff() < 1.0);
        CHECK(c.eigenvalues.minCoeff() >= 0.0);
    }

    // Replay trajectory has the synthetic cycle column and plausible bounds.
    std::ifstream rin(out / "replay.csv");
    const GameTrace replay = parse_csv(rin, "replay.csv");
    CHECK(replay.size() == static_cast<std::size_t>(result.replay_steps));
    CHECK(replay.states[0].cycle == 0);
}

TEST_CASE("manifest hash is identical across runs and cache reuse") {
    TempDir tmp("rcmoves_determinism_test");
    write_trace_csv_file(synthetic_trace(150), tmp.path / "trace.csv");

    PipelineConfig cfg = desk_config(tmp.path, "a");
    cfg.washout = 30;
    const PipelineResult first = run_pipeline(cfg);

    PipelineConfig cfg_b = cfg;
    cfg_b.out_dir = (tmp.path / "b").string();  // cold cache, fresh directory
    const PipelineResult second = run_pipeline(cfg_b);
    CHECK_FALSE(second.cache_hit);
    CHECK(second.manifest_hash == first.manifest_hash);

    const PipelineResult third = run_pipeline(cfg);  // warm cache, same directory
    CHECK(third.cache_hit);
    CHECK(third.manifest_hash == first.manifest_hash);

    PipelineConfig other_seed = cfg;
    other_seed.out_dir = (tmp.path / "c").string();
    other_seed.seed = 6;
    CHECK(run_pipeline(other_seed).manifest_hash != first.manifest_hash);
}

TEST_CASE("report json carries the cross-checkable summary") {
    TempDir tmp("rcmoves_report_test");
    write_trace_csv_file(synthetic_trace(160), tmp.path / "trace.csv");
    PipelineConfig cfg = desk_config(tmp.path, "out");
    cfg.washout = 30;
    const PipelineResult result = run_pipeline(cfg);

    std::ifstream in(tmp.path / "out" / "report.json");
    nlohmann::json report;
    in >> report;
    CHECK(report.at("k").get<int>() == result.k);
    CHECK(report.at("n_labeled").get<Eigen::Index>() == result.n_labeled);
    CHECK(report.at("total_cycles").get<std::int64_t>() ==
          static_cast<std::int64_t>(result.n_labeled));
    CHECK(report.at("readout_nrmse").get<double>() == result.readout_nrmse);
    CHECK(report.at("replay_ball_sign_changes").get<int>() ==
          result.replay_ball_sign_changes);
}

TEST_CASE("missing input raises InputError, bad coordinates clean up artifacts") {
    TempDir tmp("rcmoves_errors_test");
    PipelineConfig cfg;
    cfg.input = (tmp.path / "nope.csv").string();
    cfg.out_dir = (tmp.path / "out").string();
    CHECK_THROWS_AS(run_pipeline(cfg), InputError);

    // A trace with an out-of-field coordinate fails validation and leaves no
    // artifacts behind.
    GameTrace trace = synthetic_trace(60);
    trace.states[30].positions[0] = 500.0;
    write_trace_csv_file(trace, tmp.path / "bad.csv");
    PipelineConfig bad = desk_config(tmp.path, "out2");
    bad.input = (tmp.path / "bad.csv").string();
    bad.washout = 20;
    CHECK_THROWS_AS(run_pipeline(bad), ValidationError);
    CHECK_FALSE(fs::exists(tmp.path / "out2" / "labels.csv"));
    CHECK_FALSE(fs::exists(tmp.path / "out2" / "manifest.json"));

    PipelineConfig short_trace = desk_config(tmp.path, "out3");
    write_trace_csv_file(synthetic_trace(30), tmp.path / "trace.csv");
    short_trace.washout = 40;
    CHECK_THROWS_AS(run_pipeline(short_trace), ValidationError);
}

}  // TEST_SUITE
