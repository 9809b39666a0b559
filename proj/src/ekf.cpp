#include "diffsimo/ekf.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "diffsimo/detector.hpp"
#include "diffsimo/errors.hpp"

namespace diffsimo {

std::size_t PilotSchedule::pilot_count(std::size_t n) const {
    const auto o = static_cast<std::size_t>(offset);
    if (n <= o) return 0;
    return (n - o + static_cast<std::size_t>(period) - 1) / static_cast<std::size_t>(period);
}

void PilotSchedule::validate() const {
    if (period < 1) throw ConfigError("pilot period must be >= 1");
    if (offset < 0) throw ConfigError("pilot offset must be >= 0");
}

EkfState predict(const EkfState& state, const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != state.P.rows() || sigma.cols() != state.P.cols()) {
        throw UsageError("predict: covariance dimensions differ");
    }
    return EkfState{state.theta_hat, state.P + sigma};
}

EkfState update(const EkfState& state, const Eigen::Ref<const Eigen::VectorXcd>& y_k, cdouble x_known,
                const Eigen::Ref<const Eigen::VectorXcd>& h, EkfDiagnostics* diagnostics) {
    const Eigen::Index m_ant = state.theta_hat.size();
    if (y_k.size() != m_ant || h.size() != m_ant) throw UsageError("update: dimension mismatch");

    // Per antenna: predicted mean a_m = h_m x e^{j theta_m}; Jacobian column
    // g_m = (-Im a_m, Re a_m) on that antenna's two rows only. Then
    //   H^T H = D = diag(|a_m|^2),   H^T (z - m) = Im(conj(a_m) (y_m - a_m)).
    Eigen::VectorXd d(m_ant);
    Eigen::VectorXd score(m_ant);
    for (Eigen::Index m = 0; m < m_ant; ++m) {
        const cdouble a = h[m] * x_known * std::polar(1.0, state.theta_hat[m]);
        d[m] = std::norm(a);
        score[m] = std::imag(std::conj(a) * (y_k[m] - a));
    }
    if (!score.allFinite() || !d.allFinite()) {
        if (diagnostics) ++diagnostics->skipped_updates;
        return state;
    }

    // Gain-free form of K = P H^T (H P H^T + I)^{-1}: with G = D^{1/2},
    //   L = P - P G (I + G P G)^{-1} G P,   K = L H^T.
    const Eigen::VectorXd g = d.cwiseSqrt();
    const Eigen::MatrixXd pg = state.P * g.asDiagonal();
    Eigen::MatrixXd inner = g.asDiagonal() * pg;
    inner.diagonal().array() += 1.0;
    const Eigen::MatrixXd L = state.P - pg * inner.llt().solve(pg.transpose());

    EkfState out;
    out.theta_hat = state.theta_hat + L * score;

    // Joseph form (I - K H) P (I - K H)^T + K K^T with K H = L D, K K^T = L D L^T.
    Eigen::MatrixXd ikh = -L * d.asDiagonal();
    ikh.diagonal().array() += 1.0;
    Eigen::MatrixXd p = ikh * state.P * ikh.transpose() + L * d.asDiagonal() * L.transpose();
    out.P = 0.5 * (p + p.transpose());

    if (!out.theta_hat.allFinite() || !out.P.allFinite()) {
        if (diagnostics) ++diagnostics->skipped_updates;
        return state;
    }
    return out;
}

std::size_t nearest_point(const Constellation& constellation, cdouble z) {
    const auto& pts = constellation.points();
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dist = std::norm(z - pts[i]);
        if (dist < best_d) {
            best = i;
            best_d = dist;
        }
    }
    return best;
}

EkfBlockResult run_ekf_block(const EkfBlockInput& input) {
    input.schedule.validate();
    const ReceivedBlock& block = input.block;
    const Eigen::Index n = block.length();
    if (block.antennas() != input.chan.antennas()) throw UsageError("run_ekf_block: block and channel sizes differ");
    if (static_cast<Eigen::Index>(input.pilots.size()) != n) throw UsageError("run_ekf_block: pilot sequence length");
    if (input.initial_theta.size() != block.antennas()) throw UsageError("run_ekf_block: initial phase length");

    // CLO reduces to a scalar filter on <h, y> / ||h|| with gain ||h||.
    const bool clo = input.phase_noise.osc_mode == OscMode::kClo;
    Eigen::MatrixXcd obs;
    Eigen::VectorXcd h;
    Eigen::VectorXd theta0;
    if (clo) {
        const CombinedBlock combined = clo_combine(block, input.chan);
        obs = combined.block.y;
        h = Eigen::VectorXcd::Constant(1, cdouble(combined.gain, 0.0));
        theta0 = Eigen::VectorXd::Constant(1, input.initial_theta[0]);
    } else {
        obs = block.y;
        h = input.chan.h;
        theta0 = input.initial_theta;
    }
    const auto dim = static_cast<int>(h.size());
    const Eigen::MatrixXd sigma = process_covariance(input.phase_noise, dim);
    const double h_norm_sq = h.squaredNorm();

    EkfBlockResult out;
    out.decisions.assign(static_cast<std::size_t>(n), -1);
    EkfState state{theta0, sigma};

    for (Eigen::Index k = 0; k < n; ++k) {
        if (k > 0) state = predict(state, sigma);
        const auto slot = static_cast<std::size_t>(k);
        if (input.schedule.is_pilot(slot)) {
            ++out.pilots;
            state = update(state, obs.col(k), input.pilots[slot], h, &out.diagnostics);
            continue;
        }
        cdouble z(0.0, 0.0);
        for (int m = 0; m < dim; ++m) z += std::conj(h[m]) * obs(m, k) * std::polar(1.0, -state.theta_hat[m]);
        z /= h_norm_sq;
        const std::size_t decided = nearest_point(input.constellation, z);
        out.decisions[slot] = static_cast<long>(decided);
        state = update(state, obs.col(k), input.constellation.points()[decided], h, &out.diagnostics);
    }
    out.final_theta.assign(state.theta_hat.data(), state.theta_hat.data() + state.theta_hat.size());
    return out;
}

}  // namespace diffsimo
