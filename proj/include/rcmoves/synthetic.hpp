#pragma once

#include "rcmoves/ingest.hpp"

namespace rcmoves {

// Deterministic desk-scale corpus: a ball bouncing between the goals at
// constant speed plus two teams of damped oscillators around home positions,
// re-excited periodically so long traces stay lively. Closed-form in the
// step index, so any two calls agree bit for bit. Coordinates are in field
// metres and stay inside the default FieldSpec bounds.
GameTrace synthetic_trace(int steps);

}  // namespace rcmoves
