#include "diffsimo/diff_codec.hpp"

#include <cmath>

#include "diffsimo/phase.hpp"

namespace diffsimo {

namespace {

void append(EncodedSequence& out, double amplitude, double phase) {
    out.x.push_back(std::polar(amplitude, phase));
    out.cumulative_phase.push_back(phase);
}

}  // namespace

EncodedSequence encode(std::span<const PolarSymbol> symbols) {
    EncodedSequence out;
    out.x.reserve(symbols.size());
    out.cumulative_phase.reserve(symbols.size());
    double acc = 0.0;
    for (const PolarSymbol& s : symbols) {
        acc = wrap_phase(acc + s.phase);
        append(out, s.amplitude, acc);
    }
    return out;
}

ReferenceSymbol first_symbol_policy(const Constellation& constellation) {
    return ReferenceSymbol{std::sqrt(constellation.avg_energy()), 0.0};
}

EncodedSequence encode_block(const Constellation& constellation, std::span<const std::size_t> point_indices) {
    const ReferenceSymbol ref = first_symbol_policy(constellation);
    EncodedSequence out;
    out.x.reserve(point_indices.size() + 1);
    out.cumulative_phase.reserve(point_indices.size() + 1);
    append(out, ref.amplitude, ref.phase);

    const auto& points = constellation.points();
    double acc = ref.phase;
    for (std::size_t idx : point_indices) {
        const cdouble s = points.at(idx);
        acc = wrap_phase(acc + std::arg(s));
        append(out, std::abs(s), acc);
    }
    return out;
}

}  // namespace diffsimo
