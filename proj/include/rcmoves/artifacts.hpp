#pragma once

#include "rcmoves/clustering.hpp"
#include "rcmoves/conceptor.hpp"
#include "rcmoves/esn.hpp"
#include "rcmoves/ingest.hpp"
#include "rcmoves/moves.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rcmoves {

// All on-disk formats in one place. Writers are byte-stable: identical
// in-memory values always produce identical bytes, and every floating-point
// value round-trips exactly (see jsonio.hpp).

// Canonical 47-column trace CSV (inverse of parse_csv).
void write_trace_csv(const GameTrace& trace, std::ostream& out);
void write_trace_csv_file(const GameTrace& trace, const std::filesystem::path& path);

// Same schema for a bare position matrix (used for replay trajectories);
// cycle column counts up from first_cycle.
void write_positions_csv(const Matrix& positions, std::int64_t first_cycle, std::ostream& out);

// labels.csv: header `cycle,cluster`, one row per labeled cycle.
void write_labels_csv(std::int64_t first_cycle, const std::vector<int>& labels,
                      std::ostream& out);
std::pair<std::int64_t, std::vector<int>> read_labels_csv(std::istream& in);

// moves.jsonl: one {cluster, start_cycle, end_cycle, leadin_cycles, short_run}
// object per line.
void write_moves_jsonl(const std::vector<Move>& moves, std::ostream& out);
std::vector<Move> read_moves_jsonl(std::istream& in);

// conceptors.json: {"aperture", "conceptors": [{source, aperture, n_states,
// n_dim, eigenvalues, eigenvectors}]}. Eigenpairs with eigenvalue < 1e-12
// are dropped; the reconstruction error that introduces is below the 1e-10
// fidelity bound checked on load.
void write_conceptors_json(const std::vector<const Conceptor*>& conceptors, std::ostream& out);
std::vector<Conceptor> read_conceptors_json(std::istream& in);

// Reservoir and state series in the documented dimensions + row-major form.
void write_reservoir_json(const Reservoir& reservoir, std::ostream& out);
Reservoir read_reservoir_json(std::istream& in);
void write_series_json(const StateSeries& series, std::ostream& out);
StateSeries read_series_json(std::istream& in);

// Cluster model: {k, centroids, inertia, bic}; labels travel in labels.csv.
void write_cluster_model_json(const ClusterModel& model, std::ostream& out);
ClusterModel read_cluster_model_json(std::istream& in);

nlohmann::json report_to_json(const MoveReport& report);

// FNV-1a content hashing for the pipeline manifest.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t value);

}  // namespace rcmoves
