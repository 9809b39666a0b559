#include "diffsimo/phase_noise.hpp"

#include <cmath>
#include <string>

#include "diffsimo/errors.hpp"
#include "diffsimo/phase.hpp"

namespace diffsimo {

const char* to_string(OscMode mode) { return mode == OscMode::kClo ? "clo" : "slo"; }

OscMode parse_osc_mode(const std::string& text) {
    if (text == "clo" || text == "CLO") return OscMode::kClo;
    if (text == "slo" || text == "SLO") return OscMode::kSlo;
    throw ConfigError("unknown oscillator mode '" + text + "'");
}

void PhaseNoiseConfig::validate() const {
    if (!(var_tx >= 0.0) || !(var_rx >= 0.0) || !std::isfinite(var_tx) || !std::isfinite(var_rx)) {
        throw ConfigError("phase noise innovation variances must be finite and nonnegative");
    }
}

namespace {

double uniform_phase(Rng& rng) {
    // u in [0, 1) maps to (-pi, pi].
    return kPi - kTwoPi * boost::random::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

PhaseTrajectory sample_trajectory(const PhaseNoiseConfig& config, int m_antennas, int n_symbols, Rng& rng) {
    config.validate();
    if (m_antennas < 1 || n_symbols < 1) throw UsageError("trajectory needs at least one antenna and one symbol");

    const double sd_tx = std::sqrt(config.var_tx);
    const double sd_rx = std::sqrt(config.var_rx);
    const int rx_walks = config.osc_mode == OscMode::kClo ? 1 : m_antennas;
    NormalDist normal;

    double tx = uniform_phase(rng);
    Eigen::VectorXd rx(rx_walks);
    for (int m = 0; m < rx_walks; ++m) rx[m] = uniform_phase(rng);

    PhaseTrajectory traj{Eigen::MatrixXd(m_antennas, n_symbols)};
    for (int k = 0; k < n_symbols; ++k) {
        if (k > 0) {
            tx += sd_tx * normal(rng);
            for (int m = 0; m < rx_walks; ++m) rx[m] += sd_rx * normal(rng);
        }
        for (int m = 0; m < m_antennas; ++m) traj.theta(m, k) = tx + rx[rx_walks == 1 ? 0 : m];
    }
    return traj;
}

Eigen::MatrixXd process_covariance(const PhaseNoiseConfig& config, int m_antennas) {
    config.validate();
    if (m_antennas < 1) throw UsageError("process covariance needs at least one antenna");
    const double total = config.var_tx + config.var_rx;
    if (config.osc_mode == OscMode::kClo) return Eigen::MatrixXd::Constant(m_antennas, m_antennas, total);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(m_antennas, m_antennas, config.var_tx);
    sigma.diagonal().setConstant(total);
    return sigma;
}

}  // namespace diffsimo
