#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "diffsimo/channel.hpp"
#include "diffsimo/constellation.hpp"
#include "diffsimo/phase_noise.hpp"

namespace diffsimo {

struct EkfState {
    Eigen::VectorXd theta_hat;  // rad
    Eigen::MatrixXd P;          // rad^2, symmetric PSD
};

struct PilotSchedule {
    int period = 50;
    int offset = 0;

    bool is_pilot(std::size_t k) const {
        const auto p = static_cast<std::size_t>(period);
        const auto o = static_cast<std::size_t>(offset);
        return k >= o && (k - o) % p == 0;
    }
    std::size_t pilot_count(std::size_t n) const;
    void validate() const;
};

struct EkfDiagnostics {
    std::size_t skipped_updates = 0;  // non-finite innovations
};

// Random-walk prediction: theta_hat unchanged, P += Sigma.
EkfState predict(const EkfState& state, const Eigen::MatrixXd& sigma);

// Measurement update with known (pilot) or decided symbol x. The measurement
// is (Re y, Im y) per antenna with unit-variance noise per real component and
// mean Re/Im of h_m x exp(j theta_m). Covariance uses the Joseph form.
EkfState update(const EkfState& state, const Eigen::Ref<const Eigen::VectorXcd>& y_k, cdouble x_known,
                const Eigen::Ref<const Eigen::VectorXcd>& h, EkfDiagnostics* diagnostics = nullptr);

// Nearest constellation point to z in Euclidean distance (first index on ties).
std::size_t nearest_point(const Constellation& constellation, cdouble z);

struct EkfBlockResult {
    std::vector<long> decisions;  // point index per slot, -1 at pilot slots
    std::size_t pilots = 0;
    EkfDiagnostics diagnostics;
    std::vector<double> final_theta;
};

struct EkfBlockInput {
    const ReceivedBlock& block;
    const ChannelRealization& chan;
    const Constellation& constellation;
    PilotSchedule schedule;
    std::span<const cdouble> pilots;  // transmitted value at every slot; read only at pilot slots
    PhaseNoiseConfig phase_noise;
    Eigen::VectorXd initial_theta;  // true phase at k = 0 (one entry per antenna)
};

// Pilot-aided tracking over one block: predict every slot (from k = 1), update
// on pilots, and at data slots de-rotate, combine, decide, then update with
// the decision. CLO runs a scalar filter on the coherently combined signal.
EkfBlockResult run_ekf_block(const EkfBlockInput& input);

}  // namespace diffsimo
