#include "diffsimo/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "diffsimo/errors.hpp"
#include "diffsimo/phase.hpp"

namespace diffsimo {

namespace {

bool same_amplitude(double a, double b) {
    return std::abs(a - b) <= kClassTolerance * std::max(std::abs(a), std::abs(b));
}

}  // namespace

Constellation::Constellation(std::vector<cdouble> points, double avg_energy)
    : points_(std::move(points)), avg_energy_(avg_energy), point_class_(points_.size()) {
    if (points_.empty()) throw ConfigError("constellation has no points");

    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(points_[a]) < std::abs(points_[b]); });

    const double n = static_cast<double>(points_.size());
    for (std::size_t idx : order) {
        const double r = std::abs(points_[idx]);
        if (classes_.empty() || !same_amplitude(classes_.back().amplitude, r)) {
            classes_.push_back(AmplitudeClass{r, 0.0, {}, {}});
        }
        classes_.back().point_indices.push_back(idx);
    }

    for (std::size_t c = 0; c < classes_.size(); ++c) {
        auto& cls = classes_[c];
        auto& idx = cls.point_indices;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return wrap_phase(std::arg(points_[a])) < wrap_phase(std::arg(points_[b]));
        });
        cls.phases.clear();
        for (std::size_t i : idx) {
            cls.phases.push_back(wrap_phase(std::arg(points_[i])));
            point_class_[i] = c;
        }
        for (std::size_t i = 1; i < cls.phases.size(); ++i) {
            if (!(cls.phases[i] > cls.phases[i - 1])) throw ConfigError("duplicate phase within an amplitude class");
        }
        cls.prior = static_cast<double>(idx.size()) / n;
    }
}

std::size_t Constellation::class_index(double amplitude) const {
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        if (same_amplitude(classes_[c].amplitude, amplitude)) return c;
    }
    throw LookupError("no amplitude class matches " + std::to_string(amplitude));
}

const AmplitudeClass& Constellation::class_of(double amplitude) const { return classes_[class_index(amplitude)]; }

std::size_t Constellation::symbol_from_polar(double amplitude, double phase) const {
    const AmplitudeClass& cls = class_of(amplitude);
    for (std::size_t i = 0; i < cls.phases.size(); ++i) {
        if (circular_distance(cls.phases[i], phase) <= kClassTolerance) return cls.point_indices[i];
    }
    throw LookupError("no constellation point at phase " + std::to_string(phase));
}

Constellation build_qam(int order, double avg_energy) {
    if (order != 4 && order != 16 && order != 64) {
        throw ConfigError("unsupported QAM order " + std::to_string(order) + " (expected 4, 16 or 64)");
    }
    if (!(avg_energy > 0.0) || !std::isfinite(avg_energy)) throw ConfigError("QAM average energy must be positive");

    const int side = order == 4 ? 2 : order == 16 ? 4 : 8;
    // Mean of I^2 + Q^2 over the odd-integer grid.
    const double grid_energy = 2.0 * (side * side - 1) / 3.0;
    const double scale = std::sqrt(avg_energy / grid_energy);

    std::vector<cdouble> points;
    points.reserve(static_cast<std::size_t>(order));
    for (int q = 0; q < side; ++q) {
        for (int i = 0; i < side; ++i) {
            points.emplace_back(scale * (2 * i - side + 1), scale * (2 * q - side + 1));
        }
    }
    return Constellation(std::move(points), avg_energy);
}

}  // namespace diffsimo
