#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "diffsimo/constellation.hpp"

namespace diffsimo {

struct PolarSymbol {
    double amplitude = 0.0;
    double phase = 0.0;  // (-pi, pi]
};

// x_k = r_k exp(j sum_{l<=k} phi_l). The accumulator is kept wrapped so long
// blocks do not lose precision.
struct EncodedSequence {
    std::vector<cdouble> x;
    std::vector<double> cumulative_phase;  // wrapped to (-pi, pi]
};

EncodedSequence encode(std::span<const PolarSymbol> symbols);

// The differential chain needs a phase reference at k = 0: one known symbol of
// amplitude sqrt(E) and phase 0 precedes every block and is never scored.
struct ReferenceSymbol {
    double amplitude = 0.0;
    double phase = 0.0;
};

ReferenceSymbol first_symbol_policy(const Constellation& constellation);

// Reference symbol followed by the encoded data; returns n + 1 samples for n
// point indices. The accumulator starts at the reference phase.
EncodedSequence encode_block(const Constellation& constellation, std::span<const std::size_t> point_indices);

}  // namespace diffsimo
