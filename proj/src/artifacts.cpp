#include "rcmoves/artifacts.hpp"

#include "rcmoves/error.hpp"
#include "rcmoves/jsonio.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace rcmoves {

using nlohmann::json;

namespace {

std::vector<double> as_doubles(const json& arr, const std::string& what) {
    if (!arr.is_array()) {
        throw ValidationError(what + ": expected a JSON array");
    }
    std::vector<double> out;
    out.reserve(arr.size());
    for (const json& v : arr) {
        if (!v.is_number()) {
            throw ValidationError(what + ": expected numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

Matrix matrix_from(const json& arr, Eigen::Index rows, Eigen::Index cols,
                   const std::string& what) {
    const std::vector<double> flat = as_doubles(arr, what);
    if (static_cast<Eigen::Index>(flat.size()) != rows * cols) {
        throw ValidationError(what + ": expected " + std::to_string(rows * cols) +
                              " entries, got " + std::to_string(flat.size()));
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = flat[static_cast<std::size_t>(i * cols + j)];
        }
    }
    return m;
}

void write_matrix_rowmajor(std::ostream& out, const Matrix& m) {
    out << '[';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i > 0 || j > 0) {
                out << ',';
            }
            out << format_double(m(i, j));
        }
    }
    out << ']';
}

json parse_stream(std::istream& in, const std::string& what) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(what + ": invalid JSON (" + e.what() + ")");
    }
    return doc;
}

}  // namespace

void write_trace_csv(const GameTrace& trace, std::ostream& out) {
    out << "cycle";
    for (int c = 0; c < kChannels; ++c) {
        out << ',' << channel_name(c);
    }
    out << '\n';
    for (const WorldState& s : trace.states) {
        out << s.cycle;
        for (int c = 0; c < kChannels; ++c) {
            out << ',' << format_plain(s.positions[static_cast<std::size_t>(c)]);
        }
        out << '\n';
    }
}

void write_trace_csv_file(const GameTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    write_trace_csv(trace, out);
    if (!out.good()) {
        throw InputError("write failed for " + path.string());
    }
}

void write_positions_csv(const Matrix& positions, std::int64_t first_cycle, std::ostream& out) {
    if (positions.cols() != kChannels) {
        throw ValidationError("write_positions_csv: expected " + std::to_string(kChannels) +
                              " columns");
    }
    out << "cycle";
    for (int c = 0; c < kChannels; ++c) {
        out << ',' << channel_name(c);
    }
    out << '\n';
    for (Eigen::Index i = 0; i < positions.rows(); ++i) {
        out << (first_cycle + i);
        for (int c = 0; c < kChannels; ++c) {
            out << ',' << format_plain(positions(i, c));
        }
        out << '\n';
    }
}

void write_labels_csv(std::int64_t first_cycle, const std::vector<int>& labels,
                      std::ostream& out) {
    out << "cycle,cluster\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << (first_cycle + static_cast<std::int64_t>(i)) << ',' << labels[i] << '\n';
    }
}

std::pair<std::int64_t, std::vector<int>> read_labels_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("cycle,cluster", 0) != 0) {
        throw ValidationError("labels.csv: missing header");
    }
    std::int64_t first_cycle = 0;
    std::vector<int> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::int64_t cycle = 0;
        int label = 0;
        const char* end = line.data() + line.size();
        auto r1 = std::from_chars(line.data(), end, cycle);
        if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ',') {
            throw ParseError("labels.csv: malformed row", line_no);
        }
        auto r2 = std::from_chars(r1.ptr + 1, end, label);
        if (r2.ec != std::errc() || r2.ptr != end) {
            throw ParseError("labels.csv: malformed row", line_no);
        }
        if (labels.empty()) {
            first_cycle = cycle;
        } else if (cycle != first_cycle + static_cast<std::int64_t>(labels.size())) {
            throw ValidationError("labels.csv: cycles not contiguous at line " +
                                  std::to_string(line_no));
        }
        labels.push_back(label);
    }
    if (labels.empty()) {
        throw ValidationError("labels.csv: no rows");
    }
    return {first_cycle, labels};
}

void write_moves_jsonl(const std::vector<Move>& moves, std::ostream& out) {
    for (const Move& m : moves) {
        json row{{"cluster", m.cluster},
                 {"start_cycle", m.start_cycle},
                 {"end_cycle", m.end_cycle},
                 {"leadin_cycles", m.leadin_cycles},
                 {"short_run", m.short_run}};
        out << row.dump() << '\n';
    }
}

std::vector<Move> read_moves_jsonl(std::istream& in) {
    std::vector<Move> moves;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("moves.jsonl: invalid JSON (") + e.what() + ")", line_no);
        }
        Move m;
        m.cluster = row.at("cluster").get<int>();
        m.start_cycle = row.at("start_cycle").get<std::int64_t>();
        m.end_cycle = row.at("end_cycle").get<std::int64_t>();
        m.leadin_cycles = row.at("leadin_cycles").get<int>();
        m.short_run = row.value("short_run", false);
        moves.push_back(m);
    }
    return moves;
}

void write_conceptors_json(const std::vector<const Conceptor*>& conceptors, std::ostream& out) {
    out << "{\"conceptors\":[";
    bool first_entry = true;
    for (const Conceptor* c : conceptors) {
        if (c == nullptr) {
            throw ValidationError("write_conceptors_json: null conceptor");
        }
        if (!first_entry) {
            out << ',';
        }
        first_entry = false;

        // Keep only eigenpairs that contribute above the fidelity bound.
        Eigen::Index kept = 0;
        while (kept < c->eigenvalues.size() && c->eigenvalues(kept) >= 1e-12) {
            ++kept;
        }
        out << "{\"source\":" << json(c->source).dump() << ",\"aperture\":"
            << format_double(c->aperture) << ",\"n_states\":" << c->n_states
            << ",\"n_dim\":" << c->dim() << ",\"eigenvalues\":";
        write_number_array(out, c->eigenvalues.data(), static_cast<std::size_t>(kept));
        out << ",\"eigenvectors\":[";
        for (Eigen::Index m = 0; m < kept; ++m) {
            for (Eigen::Index i = 0; i < c->dim(); ++i) {
                if (m > 0 || i > 0) {
                    out << ',';
                }
                out << format_double(c->eigenvectors(i, m));
            }
        }
        out << "]}";
    }
    out << "]}";
}

std::vector<Conceptor> read_conceptors_json(std::istream& in) {
    const json doc = parse_stream(in, "conceptors.json");
    if (!doc.contains("conceptors")) {
        throw ValidationError("conceptors.json: missing 'conceptors'");
    }
    std::vector<Conceptor> out;
    for (const json& entry : doc.at("conceptors")) {
        Conceptor c;
        c.source = entry.at("source").get<std::string>();
        c.aperture = entry.at("aperture").get<double>();
        c.n_states = entry.at("n_states").get<std::int64_t>();
        const Eigen::Index n = entry.at("n_dim").get<Eigen::Index>();
        const std::vector<double> values = as_doubles(entry.at("eigenvalues"), "eigenvalues");
        const Eigen::Index kept = static_cast<Eigen::Index>(values.size());
        const Matrix vectors_rowmajor =
            matrix_from(entry.at("eigenvectors"), kept, n, "eigenvectors");

        c.eigenvalues = Vector::Zero(n);
        c.eigenvectors = vectors_rowmajor.transpose();  // N x kept
        c.c = Matrix::Zero(n, n);
        for (Eigen::Index m = 0; m < kept; ++m) {
            const double sigma = values[static_cast<std::size_t>(m)];
            if (sigma < 0.0 || sigma >= 1.0) {
                throw ValidationError("conceptors.json: eigenvalue outside [0, 1)");
            }
            c.eigenvalues(m) = sigma;
            c.c.selfadjointView<Eigen::Lower>().rankUpdate(c.eigenvectors.col(m), sigma);
        }
        c.c = c.c.selfadjointView<Eigen::Lower>();
        // Orthonormality of the stored basis guards the reconstruction fidelity.
        if (kept > 0) {
            const Matrix gram = c.eigenvectors.transpose() * c.eigenvectors;
            if ((gram - Matrix::Identity(kept, kept)).cwiseAbs().maxCoeff() > 1e-8) {
                throw ValidationError("conceptors.json: eigenvector basis is not orthonormal");
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

void write_reservoir_json(const Reservoir& r, std::ostream& out) {
    out << "{\"n_inputs\":" << r.config.n_inputs << ",\"n_reservoir\":" << r.config.n_reservoir
        << ",\"n_outputs\":" << r.config.n_outputs << ",\"spectral_radius_target\":"
        << format_double(r.config.spectral_radius_target) << ",\"input_scale\":"
        << format_double(r.config.input_scale) << ",\"bias_scale\":"
        << format_double(r.config.bias_scale) << ",\"connectivity\":"
        << format_double(r.config.connectivity) << ",\"seed\":" << r.config.seed << ",\"w_in\":";
    write_matrix_rowmajor(out, r.w_in);
    out << ",\"w_res\":";
    write_matrix_rowmajor(out, r.w_res);
    out << ",\"bias\":";
    write_number_array(out, r.bias.data(), static_cast<std::size_t>(r.bias.size()));
    out << "}";
}

Reservoir read_reservoir_json(std::istream& in) {
    const json doc = parse_stream(in, "reservoir.json");
    Reservoir r;
    r.config.n_inputs = doc.at("n_inputs").get<int>();
    r.config.n_reservoir = doc.at("n_reservoir").get<int>();
    r.config.n_outputs = doc.at("n_outputs").get<int>();
    r.config.spectral_radius_target = doc.at("spectral_radius_target").get<double>();
    r.config.input_scale = doc.at("input_scale").get<double>();
    r.config.bias_scale = doc.at("bias_scale").get<double>();
    r.config.connectivity = doc.at("connectivity").get<double>();
    r.config.seed = doc.at("seed").get<std::uint64_t>();
    r.w_in = matrix_from(doc.at("w_in"), r.config.n_reservoir, r.config.n_inputs, "w_in");
    r.w_res = matrix_from(doc.at("w_res"), r.config.n_reservoir, r.config.n_reservoir, "w_res");
    const std::vector<double> bias = as_doubles(doc.at("bias"), "bias");
    if (static_cast<int>(bias.size()) != r.config.n_reservoir) {
        throw ValidationError("reservoir.json: bias length mismatch");
    }
    r.bias = Eigen::Map<const Vector>(bias.data(), static_cast<Eigen::Index>(bias.size()));
    return r;
}

void write_series_json(const StateSeries& series, std::ostream& out) {
    out << "{\"n_rows\":" << series.length() << ",\"n_cols\":" << series.dim()
        << ",\"first_cycle\":" << series.first_cycle << ",\"washout\":" << series.washout
        << ",\"data\":";
    write_matrix_rowmajor(out, series.states);
    out << "}";
}

StateSeries read_series_json(std::istream& in) {
    const json doc = parse_stream(in, "states.json");
    StateSeries series;
    const auto rows = doc.at("n_rows").get<Eigen::Index>();
    const auto cols = doc.at("n_cols").get<Eigen::Index>();
    series.first_cycle = doc.at("first_cycle").get<std::int64_t>();
    series.washout = doc.at("washout").get<int>();
    series.states = matrix_from(doc.at("data"), rows, cols, "states data");
    return series;
}

void write_cluster_model_json(const ClusterModel& model, std::ostream& out) {
    out << "{\"k\":" << model.k << ",\"n_dim\":" << model.centroids.cols() << ",\"inertia\":"
        << format_double(model.inertia) << ",\"bic\":" << format_double(model.bic)
        << ",\"centroids\":";
    write_matrix_rowmajor(out, model.centroids);
    out << "}";
}

ClusterModel read_cluster_model_json(std::istream& in) {
    const json doc = parse_stream(in, "cluster_model.json");
    ClusterModel model;
    model.k = doc.at("k").get<int>();
    const auto dim = doc.at("n_dim").get<Eigen::Index>();
    model.inertia = doc.at("inertia").get<double>();
    model.bic = doc.at("bic").get<double>();
    model.centroids = matrix_from(doc.at("centroids"), model.k, dim, "centroids");
    return model;
}

json report_to_json(const MoveReport& report) {
    json clusters = json::array();
    for (const ClusterMoveStats& s : report.clusters) {
        json spans = json::array();
        for (const auto& [start, end] : s.spans) {
            spans.push_back(json::array({start, end}));
        }
        clusters.push_back(json{{"cluster", s.cluster},
                                {"n_moves", s.n_moves},
                                {"n_short", s.n_short},
                                {"total_cycles", s.total_cycles},
                                {"mean_length", s.mean_length},
                                {"max_length", s.max_length},
                                {"spans", spans}});
    }
    return json{{"source", report.source},
                {"n_clusters", report.n_clusters},
                {"n_moves", report.n_moves},
                {"total_cycles", report.total_cycles},
                {"clusters", clusters}};
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open for hashing: " + path.string());
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace rcmoves
