#pragma once

#include "rcmoves/linalg.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace rcmoves {

// One snapshot per 100 ms simulation cycle: ball (x,y), left players 1-11,
// right players 1-11 -> 23 objects, 46 position values.
inline constexpr int kObjects = 23;
inline constexpr int kChannels = 2 * kObjects;

// Pitch extents and the safety factor applied before division so normalized
// values stay strictly inside (-1, 1) even for slightly off-pitch objects.
struct FieldSpec {
    double half_length = 52.5;  // metres, x half-extent
    double half_width = 34.0;   // metres, y half-extent
    double margin = 1.05;       // scale factor >= 1

    double x_bound() const { return half_length * margin; }
    double y_bound() const { return half_width * margin; }
    void validate() const;
};

struct WorldState {
    std::int64_t cycle = 0;
    std::array<double, kChannels> positions{};  // x at even slots, y at odd
};

struct GameTrace {
    std::vector<WorldState> states;
    std::string team_left;
    std::string team_right;
    std::string source;

    std::size_t size() const { return states.size(); }
    bool empty() const { return states.empty(); }
    std::int64_t first_cycle() const { return states.front().cycle; }

    // L x 46 matrix of positions, row order = state order.
    Matrix positions_matrix() const;
    std::vector<std::int64_t> cycles() const;
};

// Canonical CSV schema (see README): header `cycle,ball_x,ball_y,l1_x,...,r11_y`
// then one row per cycle with the integer cycle and 46 decimal reals.
// Team names are recovered from a `<left>-vs-<right>` pattern in the source
// name when present.
GameTrace parse_csv(std::istream& in, const std::string& source_name);
GameTrace parse_csv_file(const std::filesystem::path& path);

// Per-axis scaling into the open interval (-1, 1): x slots divided by
// half_length*margin, y slots by half_width*margin. Coordinates outside the
// scaled bounds raise ValidationError naming cycle and component; values
// exactly at a bound map to the nearest representable inside the interval.
GameTrace normalize(const GameTrace& trace, const FieldSpec& spec);

// Exact inverse of normalize's per-component scaling.
std::array<double, kChannels> denormalize(const std::array<double, kChannels>& positions,
                                          const FieldSpec& spec);
Matrix denormalize(const Matrix& positions, const FieldSpec& spec);

// Column name for position column c (0-based, without the cycle column).
std::string channel_name(int channel);

}  // namespace rcmoves
