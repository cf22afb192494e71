#pragma once

#include "rcmoves/conceptor.hpp"
#include "rcmoves/esn.hpp"
#include "rcmoves/ingest.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace rcmoves {

// A maximal run of consecutive cycles sharing one cluster label, plus a
// lead-in context window reaching back before the run starts.
struct Move {
    int cluster = 0;
    std::int64_t start_cycle = 0;
    std::int64_t end_cycle = 0;  // inclusive
    int leadin_cycles = 0;
    bool short_run = false;  // run length below min_len; kept, just flagged

    std::int64_t length() const { return end_cycle - start_cycle + 1; }
};

// Scans per-cycle labels into maximal constant-label runs. Runs shorter than
// min_len are emitted with short_run set; the runs jointly cover every
// labeled cycle. Labels index cycles starting at first_cycle.
std::vector<Move> segment(const std::vector<int>& labels, int min_len,
                          std::int64_t first_cycle = 0);

// Attaches leadin context, clamped at the trace start:
// leadin_cycles = min(leadin, start_cycle - trace_start).
std::vector<Move> attach_leadin(std::vector<Move> moves, int leadin, std::int64_t trace_start);

struct ClusterConceptors {
    std::map<int, Conceptor> by_cluster;
    std::vector<int> skipped;  // clusters with fewer than min_states states
};

// Per-cluster conceptor: correlation over exactly that cluster's member
// states, then the conceptor map at the given aperture. Clusters with fewer
// than min_states members are reported in `skipped` instead.
ClusterConceptors cluster_conceptors(const StateSeries& series, const std::vector<int>& labels,
                                     double aperture, int min_states = 5);

struct ClusterMoveStats {
    int cluster = 0;
    int n_moves = 0;
    int n_short = 0;
    std::int64_t total_cycles = 0;
    double mean_length = 0.0;
    std::int64_t max_length = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> spans;  // [start, end] per move
};

struct MoveReport {
    std::vector<ClusterMoveStats> clusters;  // ordered by cluster id
    int n_clusters = 0;
    int n_moves = 0;
    std::int64_t total_cycles = 0;
    std::string source;
};

// Per-cluster move counts, durations and involved cycles; totals are
// consistent with the label counts by construction.
MoveReport move_report(const std::vector<Move>& moves, const std::vector<int>& labels,
                       const GameTrace& trace);

std::string report_to_text(const MoveReport& report);

}  // namespace rcmoves
