#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace diffsimo {

using cdouble = std::complex<double>;

// Points of one magnitude. phases[i] belongs to constellation point point_indices[i].
struct AmplitudeClass {
    double amplitude = 0.0;
    double prior = 0.0;
    std::vector<double> phases;  // strictly increasing, in (-pi, pi]
    std::vector<std::size_t> point_indices;
};

// Square QAM in polar form. Immutable after construction.
class Constellation {
public:
    Constellation(std::vector<cdouble> points, double avg_energy);

    const std::vector<cdouble>& points() const { return points_; }
    const std::vector<AmplitudeClass>& classes() const { return classes_; }
    double avg_energy() const { return avg_energy_; }
    std::size_t size() const { return points_.size(); }

    // Index into classes() of the class holding point `index`.
    std::size_t class_index_of_point(std::size_t index) const { return point_class_[index]; }

    const AmplitudeClass& class_of(double amplitude) const;
    std::size_t class_index(double amplitude) const;
    std::size_t symbol_from_polar(double amplitude, double phase) const;

private:
    std::vector<cdouble> points_;
    double avg_energy_;
    std::vector<AmplitudeClass> classes_;  // ascending amplitude
    std::vector<std::size_t> point_class_;
};

// Standard square QAM (order 4, 16 or 64) scaled to average energy `avg_energy`
// under uniform priors. Point (i, q) has index q * side + i, levels -side+1..side-1.
Constellation build_qam(int order, double avg_energy);

inline constexpr double kClassTolerance = 1e-9;

}  // namespace diffsimo
