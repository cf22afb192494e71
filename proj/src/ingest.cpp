#include "rcmoves/ingest.hpp"

#include "rcmoves/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace rcmoves {

namespace {

// Splits a CSV line in place; no quoting in this schema.
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_real(std::string_view field, std::size_t line_no, int column) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("non-numeric field in column " + std::to_string(column + 2) + " ('" +
                             std::string(field) + "')",
                         line_no);
    }
    return value;
}

std::int64_t parse_cycle(std::string_view field, std::size_t line_no) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("cycle is not an integer ('" + std::string(field) + "')", line_no);
    }
    return value;
}

void teams_from_source(GameTrace& trace) {
    // "<left>-vs-<right>" in the file stem, e.g. MarliK_1-vs-Gliders2012_3.
    std::string stem = std::filesystem::path(trace.source).stem().string();
    const std::size_t pos = stem.find("-vs-");
    if (pos != std::string::npos) {
        trace.team_left = stem.substr(0, pos);
        trace.team_right = stem.substr(pos + 4);
    }
}

}  // namespace

void FieldSpec::validate() const {
    if (!(half_length > 0.0) || !(half_width > 0.0)) {
        throw ValidationError("FieldSpec: half extents must be positive");
    }
    if (!(margin >= 1.0)) {
        throw ValidationError("FieldSpec: margin must be >= 1");
    }
}

Matrix GameTrace::positions_matrix() const {
    Matrix m(static_cast<Eigen::Index>(states.size()), kChannels);
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (int c = 0; c < kChannels; ++c) {
            m(static_cast<Eigen::Index>(i), c) = states[i].positions[static_cast<std::size_t>(c)];
        }
    }
    return m;
}

std::vector<std::int64_t> GameTrace::cycles() const {
    std::vector<std::int64_t> out;
    out.reserve(states.size());
    for (const WorldState& s : states) {
        out.push_back(s.cycle);
    }
    return out;
}

GameTrace parse_csv(std::istream& in, const std::string& source_name) {
    GameTrace trace;
    trace.source = source_name;
    teams_from_source(trace);

    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (!saw_header) {
            if (fields.empty() || fields[0] != "cycle") {
                throw ParseError("expected header row starting with 'cycle'", line_no);
            }
            if (fields.size() != kChannels + 1) {
                throw ParseError("header has " + std::to_string(fields.size()) +
                                     " columns, expected " + std::to_string(kChannels + 1),
                                 line_no);
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != kChannels + 1) {
            throw ParseError("row has " + std::to_string(fields.size()) + " columns, expected " +
                                 std::to_string(kChannels + 1),
                             line_no);
        }
        WorldState state;
        state.cycle = parse_cycle(fields[0], line_no);
        for (int c = 0; c < kChannels; ++c) {
            const double v = parse_real(fields[static_cast<std::size_t>(c) + 1], line_no, c);
            if (!std::isfinite(v)) {
                throw ParseError("non-finite value in column " + std::to_string(c + 2), line_no);
            }
            state.positions[static_cast<std::size_t>(c)] = v;
        }
        if (!trace.states.empty() && state.cycle <= trace.states.back().cycle) {
            throw ValidationError(trace.source + ": cycles not strictly increasing at line " +
                                  std::to_string(line_no) + " (" +
                                  std::to_string(trace.states.back().cycle) + " -> " +
                                  std::to_string(state.cycle) + ")");
        }
        trace.states.push_back(state);
    }
    if (!saw_header) {
        throw ValidationError(trace.source + ": empty file");
    }
    if (trace.states.empty()) {
        throw ValidationError(trace.source + ": no data rows");
    }
    return trace;
}

GameTrace parse_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open input file: " + path.string());
    }
    return parse_csv(in, path.string());
}

namespace {

double scale_into_open_unit(double value, double bound, std::int64_t cycle, int channel) {
    if (std::abs(value) > bound) {
        throw ValidationError("normalize: cycle " + std::to_string(cycle) + ", " +
                              channel_name(channel) + " = " + std::to_string(value) +
                              " outside bound " + std::to_string(bound));
    }
    double scaled = value / bound;
    if (scaled >= 1.0) {
        scaled = std::nextafter(1.0, 0.0);
    } else if (scaled <= -1.0) {
        scaled = std::nextafter(-1.0, 0.0);
    }
    return scaled;
}

}  // namespace

GameTrace normalize(const GameTrace& trace, const FieldSpec& spec) {
    spec.validate();
    GameTrace out = trace;
    for (WorldState& s : out.states) {
        for (int c = 0; c < kChannels; ++c) {
            const double bound = (c % 2 == 0) ? spec.x_bound() : spec.y_bound();
            s.positions[static_cast<std::size_t>(c)] =
                scale_into_open_unit(s.positions[static_cast<std::size_t>(c)], bound, s.cycle, c);
        }
    }
    return out;
}

std::array<double, kChannels> denormalize(const std::array<double, kChannels>& positions,
                                          const FieldSpec& spec) {
    spec.validate();
    std::array<double, kChannels> out{};
    for (int c = 0; c < kChannels; ++c) {
        const double bound = (c % 2 == 0) ? spec.x_bound() : spec.y_bound();
        out[static_cast<std::size_t>(c)] = positions[static_cast<std::size_t>(c)] * bound;
    }
    return out;
}

Matrix denormalize(const Matrix& positions, const FieldSpec& spec) {
    spec.validate();
    if (positions.cols() != kChannels) {
        throw ValidationError("denormalize: expected " + std::to_string(kChannels) +
                              " columns, got " + std::to_string(positions.cols()));
    }
    Matrix out = positions;
    for (int c = 0; c < kChannels; ++c) {
        const double bound = (c % 2 == 0) ? spec.x_bound() : spec.y_bound();
        out.col(c) *= bound;
    }
    return out;
}

std::string channel_name(int channel) {
    if (channel < 0 || channel >= kChannels) {
        throw ValidationError("channel index out of range: " + std::to_string(channel));
    }
    const int object = channel / 2;
    const char axis = (channel % 2 == 0) ? 'x' : 'y';
    if (object == 0) {
        return std::string("ball_") + axis;
    }
    if (object <= 11) {
        return "l" + std::to_string(object) + "_" + axis;
    }
    return "r" + std::to_string(object - 11) + "_" + axis;
}

}  // namespace rcmoves
