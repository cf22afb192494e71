#include "rcmoves/moves.hpp"

#include "rcmoves/error.hpp"

#include <algorithm>
#include <sstream>

namespace rcmoves {

std::vector<Move> segment(const std::vector<int>& labels, int min_len, std::int64_t first_cycle) {
    if (labels.empty()) {
        throw ValidationError("segment: empty label sequence");
    }
    if (min_len < 1) {
        throw ValidationError("segment: min_len must be >= 1");
    }
    std::vector<Move> moves;
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= labels.size(); ++i) {
        if (i == labels.size() || labels[i] != labels[run_start]) {
            Move m;
            m.cluster = labels[run_start];
            m.start_cycle = first_cycle + static_cast<std::int64_t>(run_start);
            m.end_cycle = first_cycle + static_cast<std::int64_t>(i) - 1;
            m.short_run = m.length() < min_len;
            moves.push_back(m);
            run_start = i;
        }
    }
    return moves;
}

std::vector<Move> attach_leadin(std::vector<Move> moves, int leadin, std::int64_t trace_start) {
    if (leadin < 0) {
        throw ValidationError("attach_leadin: leadin must be >= 0");
    }
    for (Move& m : moves) {
        const std::int64_t room = m.start_cycle - trace_start;
        m.leadin_cycles = static_cast<int>(std::min<std::int64_t>(leadin, std::max<std::int64_t>(room, 0)));
    }
    return moves;
}

ClusterConceptors cluster_conceptors(const StateSeries& series, const std::vector<int>& labels,
                                     double aperture, int min_states) {
    if (labels.empty()) {
        throw ValidationError("cluster_conceptors: empty label set");
    }
    if (static_cast<Eigen::Index>(labels.size()) != series.length()) {
        throw ValidationError("cluster_conceptors: labels not aligned to series rows");
    }

    std::map<int, std::vector<Eigen::Index>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        members[labels[i]].push_back(static_cast<Eigen::Index>(i));
    }

    ClusterConceptors out;
    for (const auto& [cluster, rows] : members) {
        if (static_cast<int>(rows.size()) < min_states) {
            out.skipped.push_back(cluster);
            continue;
        }
        Matrix states(static_cast<Eigen::Index>(rows.size()), series.dim());
        for (std::size_t m = 0; m < rows.size(); ++m) {
            states.row(static_cast<Eigen::Index>(m)) = series.states.row(rows[m]);
        }
        out.by_cluster.emplace(cluster,
                               compute_conceptor(correlation(states), aperture,
                                                 std::to_string(cluster),
                                                 static_cast<std::int64_t>(rows.size())));
    }
    return out;
}

MoveReport move_report(const std::vector<Move>& moves, const std::vector<int>& labels,
                       const GameTrace& trace) {
    MoveReport report;
    report.source = trace.source;
    report.total_cycles = static_cast<std::int64_t>(labels.size());

    std::map<int, ClusterMoveStats> stats;
    for (const Move& m : moves) {
        ClusterMoveStats& s = stats[m.cluster];
        s.cluster = m.cluster;
        ++s.n_moves;
        if (m.short_run) {
            ++s.n_short;
        }
        s.total_cycles += m.length();
        s.max_length = std::max(s.max_length, m.length());
        s.spans.emplace_back(m.start_cycle, m.end_cycle);
    }
    for (auto& [cluster, s] : stats) {
        s.mean_length = static_cast<double>(s.total_cycles) / static_cast<double>(s.n_moves);
        report.clusters.push_back(s);
        report.n_moves += s.n_moves;
    }
    report.n_clusters = static_cast<int>(report.clusters.size());
    return report;
}

std::string report_to_text(const MoveReport& report) {
    std::ostringstream out;
    out << "move report";
    if (!report.source.empty()) {
        out << " for " << report.source;
    }
    out << "\n";
    out << "clusters with moves: " << report.n_clusters << ", moves: " << report.n_moves
        << ", labeled cycles: " << report.total_cycles << "\n\n";
    out << "cluster  moves  short  cycles  mean_len  max_len  spans\n";
    for (const ClusterMoveStats& s : report.clusters) {
        out << s.cluster << "\t" << s.n_moves << "\t" << s.n_short << "\t" << s.total_cycles
            << "\t" << s.mean_length << "\t" << s.max_length << "\t";
        for (std::size_t i = 0; i < s.spans.size(); ++i) {
            if (i > 0) {
                out << " ";
            }
            out << "[" << s.spans[i].first << "," << s.spans[i].second << "]";
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace rcmoves
