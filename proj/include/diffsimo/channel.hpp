#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "diffsimo/phase_noise.hpp"
#include "diffsimo/random.hpp"

namespace diffsimo {

using cdouble = std::complex<double>;

// Quasi-static gains, fixed for a trial and known to the receiver.
struct ChannelRealization {
    Eigen::VectorXcd h;
    double norm_sq = 0.0;
    int redraws = 0;  // draws rejected by the degenerate-gain guard

    Eigen::Index antennas() const { return h.size(); }
    double norm() const { return std::sqrt(norm_sq); }
};

// y(m, k) = exp(j theta(m, k)) h_m x_k + w(m, k).
struct ReceivedBlock {
    Eigen::MatrixXcd y;

    Eigen::Index antennas() const { return y.rows(); }
    Eigen::Index length() const { return y.cols(); }
};

enum class NoiseMode { kOn, kOff };

// h_m iid CN(0, 1); a draw with ||h||^2 < 1e-9 M is rejected and redrawn.
ChannelRealization draw_fading(int m_antennas, Rng& rng);

// Deterministic gains, used by tests and the fixed-gain harness option.
ChannelRealization fixed_channel(const Eigen::VectorXcd& h);
ChannelRealization unit_channel(int m_antennas);

// AWGN is CN(0, 2): unit variance per real component.
ReceivedBlock transmit(std::span<const cdouble> x, const PhaseTrajectory& traj, const ChannelRealization& chan,
                       Rng& rng, NoiseMode noise = NoiseMode::kOn);

// Average constellation energy for an SNR per symbol E/2 (noise variance 2).
// With hold_receive_snr the transmit energy is divided by M so that the mean
// received energy E[||h||^2] E / M stays fixed as antennas are added.
double symbol_energy_for_snr(double snr_db, int m_antennas, bool hold_receive_snr);

}  // namespace diffsimo
