#pragma once

#include <string>

#include <Eigen/Dense>

#include "diffsimo/random.hpp"

namespace diffsimo {

enum class OscMode { kClo, kSlo };

const char* to_string(OscMode mode);
OscMode parse_osc_mode(const std::string& text);

// Innovation variances (rad^2) of the transmitter and receiver Wiener phase noise.
struct PhaseNoiseConfig {
    double var_tx = 0.0;
    double var_rx = 0.0;
    OscMode osc_mode = OscMode::kSlo;

    void validate() const;
};

// theta(m, k): composite phase of antenna m at time k, stored unwrapped.
struct PhaseTrajectory {
    Eigen::MatrixXd theta;

    Eigen::Index antennas() const { return theta.rows(); }
    Eigen::Index length() const { return theta.cols(); }
};

// One transmitter walk plus one receiver walk (CLO) or M independent receiver
// walks (SLO). Initial phases are uniform on (-pi, pi].
PhaseTrajectory sample_trajectory(const PhaseNoiseConfig& config, int m_antennas, int n_symbols, Rng& rng);

// M x M covariance of the per-step increment vector of theta.
Eigen::MatrixXd process_covariance(const PhaseNoiseConfig& config, int m_antennas);

}  // namespace diffsimo
