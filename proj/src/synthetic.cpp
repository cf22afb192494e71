#include "rcmoves/synthetic.hpp"

#include "rcmoves/error.hpp"

#include <cmath>

namespace rcmoves {

namespace {

constexpr double kTau = 6.283185307179586;

// One shared base period keeps the whole 46-channel signal on a closed loop,
// so situations genuinely recur and the loaded reservoir can lock onto the
// cycle during autonomous replay.
constexpr double kBasePeriod = 240.0;

// Reflects an unbounded coordinate into [lo, hi] (triangle wave).
double bounce(double p, double lo, double hi) {
    const double span = hi - lo;
    double t = std::fmod(p - lo, 2.0 * span);
    if (t < 0.0) {
        t += 2.0 * span;
    }
    return lo + (t <= span ? t : 2.0 * span - t);
}

struct Oscillator {
    double home_x, home_y;
    double amp_x, amp_y;
    double omega;    // harmonic of the base period, radians per step
    double phase;
    double period;   // steps between re-excitations; divides the base period
    double decay;    // per-step envelope decay rate
    double offset;   // envelope phase shift in steps

    void eval(double t, double& x, double& y) const {
        const double local = std::fmod(t + offset, period);
        const double env = std::exp(-decay * local);
        x = home_x + amp_x * env * std::cos(omega * t + phase);
        y = home_y + amp_y * env * std::sin(omega * t + 1.7 * phase);
    }
};

Oscillator make_player(int team, int index) {
    // index 0 is the goalie; 1..10 are field players laid out in rows.
    static constexpr double kRowX[11] = {-48.0, -30.0, -30.0, -30.0, -30.0, -15.0,
                                         -15.0, -15.0, -2.0,  -2.0,  -2.0};
    static constexpr double kRowY[11] = {0.0, -20.0, -7.0, 7.0, 20.0, -12.0,
                                         0.0, 12.0,  -15.0, 0.0, 15.0};
    const double side = (team == 0) ? 1.0 : -1.0;
    Oscillator o;
    o.home_x = side * kRowX[index];
    o.home_y = kRowY[index];
    const bool goalie = (index == 0);
    const int uid = team * 11 + index;
    o.amp_x = goalie ? 1.5 : 4.0 + 0.45 * index;
    o.amp_y = goalie ? 3.0 : 3.0 + 0.35 * ((index * 5) % 7);
    const int harmonic = 1 + (uid * 7) % 3;
    o.omega = kTau * harmonic / kBasePeriod;
    o.phase = 0.39 * uid;
    o.period = ((uid % 2) == 0) ? kBasePeriod : kBasePeriod / 2.0;
    o.decay = 2.0 / o.period;
    o.offset = static_cast<double>((13 * uid) % 120);
    return o;
}

}  // namespace

GameTrace synthetic_trace(int steps) {
    if (steps < 1) {
        throw ValidationError("synthetic_trace: steps must be >= 1");
    }
    GameTrace trace;
    trace.source = "synthetic";
    trace.team_left = "OscillatorsL";
    trace.team_right = "OscillatorsR";
    trace.states.reserve(static_cast<std::size_t>(steps));

    Oscillator players[2][11];
    for (int team = 0; team < 2; ++team) {
        for (int i = 0; i < 11; ++i) {
            players[team][i] = make_player(team, i);
        }
    }

    for (int n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n);
        WorldState s;
        s.cycle = n;
        // Ball sweeps goal to goal once per base period; the y bounce runs at
        // the second harmonic so the path is a closed Lissajous-like loop.
        s.positions[0] = bounce(-44.0 + 0.75 * t, -45.0, 45.0);
        s.positions[1] = bounce(3.0 + 0.8 * t, -24.0, 24.0);
        for (int team = 0; team < 2; ++team) {
            for (int i = 0; i < 11; ++i) {
                double x = 0.0;
                double y = 0.0;
                players[team][i].eval(t, x, y);
                const int base = 2 + 22 * team + 2 * i;
                s.positions[static_cast<std::size_t>(base)] = x;
                s.positions[static_cast<std::size_t>(base) + 1] = y;
            }
        }
        trace.states.push_back(s);
    }
    return trace;
}

}  // namespace rcmoves
