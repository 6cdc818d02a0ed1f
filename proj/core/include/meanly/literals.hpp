#pragma once

#include <string>

#include "meanly/cesaro.hpp"
#include "meanly/semigroup.hpp"
#include "meanly/shiftops.hpp"
#include "meanly/sparsevec.hpp"

namespace meanly {

// Text forms used by the CLI and config files. Every parser throws
// DomainError naming the offending literal on malformed input.

// "backward:harmonic" | "backward:blocks" | "backward:const:<c>" |
// "backward:list:<w1>,<w2>,..." (1-based weights) | "forward:<weights>" |
// "bilateral:tbilcami:k=<k>" | "bilateral:tbilcami-flat:k=<k>" |
// "bilateral-back:..." | "dsum:<inner>" | "identity"; an optional "@p=<p>"
// suffix selects the space exponent.
ShiftOperator parse_operator_literal(const std::string& text);

// "e:<index>" | "sum:<index>=<value>,..." | "blockspecial:<n>" | "zero".
// Items in a sum may carry an "<index>@" echo prefix ("sum:2@2=0.5"); the
// echo must match the index it precedes.
SparseVec parse_vector_literal(const std::string& text);

// "geom:<n_min>:<n_max>[:<factor>]" (factor defaults to 2) |
// "explicit:<N>,<N>,..." | "dips:<k>,..." | "hills:<k>,..."
// The dip/hill forms resolve against the supplied profile.
Schedule parse_schedule_literal(const std::string& text,
                                const AnchorProfile* profile = nullptr);

// "const:<c>" | "profile:tbilcami:k=<k>" | "profile:tbilcami-flat:k=<k>" |
// "pexp:<x>=<logv>,<x>=<logv>,..."
WeightFunction parse_weight_literal(const std::string& text);

// "step:<i>=<value>@[<lo>,<hi>],..." with 1-based consecutive piece labels
// ("step:1=1@[1,2]" is the indicator of [1,2]); "zero" is the zero function.
// Pieces may leave gaps but must not overlap.
StepFunction parse_step_literal(const std::string& text);

}  // namespace meanly
