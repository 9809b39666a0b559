#include "diffsimo/channel.hpp"

#include <cmath>
#include <string>

#include "diffsimo/errors.hpp"

namespace diffsimo {

ChannelRealization draw_fading(int m_antennas, Rng& rng) {
    if (m_antennas < 1) throw UsageError("fading draw needs at least one antenna");
    NormalDist normal;
    const double sd = std::sqrt(0.5);
    ChannelRealization chan;
    chan.h.resize(m_antennas);
    for (;;) {
        for (int m = 0; m < m_antennas; ++m) {
            const double re = sd * normal(rng);
            chan.h[m] = cdouble(re, sd * normal(rng));
        }
        chan.norm_sq = chan.h.squaredNorm();
        bool degenerate = chan.norm_sq < 1e-9 * m_antennas;
        for (int m = 0; m < m_antennas && !degenerate; ++m) degenerate = chan.h[m] == cdouble(0.0, 0.0);
        if (!degenerate) break;
        ++chan.redraws;
    }
    return chan;
}

ChannelRealization fixed_channel(const Eigen::VectorXcd& h) {
    if (h.size() < 1) throw UsageError("channel needs at least one antenna");
    ChannelRealization chan;
    chan.h = h;
    chan.norm_sq = h.squaredNorm();
    if (!(chan.norm_sq > 0.0)) throw UsageError("channel gain vector is zero");
    return chan;
}

ChannelRealization unit_channel(int m_antennas) {
    return fixed_channel(Eigen::VectorXcd::Ones(m_antennas));
}

ReceivedBlock transmit(std::span<const cdouble> x, const PhaseTrajectory& traj, const ChannelRealization& chan,
                       Rng& rng, NoiseMode noise) {
    const auto n = static_cast<Eigen::Index>(x.size());
    const Eigen::Index m_ant = chan.antennas();
    if (traj.length() != n || traj.antennas() != m_ant) {
        throw UsageError("transmit: trajectory is " + std::to_string(traj.antennas()) + "x" +
                         std::to_string(traj.length()) + ", expected " + std::to_string(m_ant) + "x" +
                         std::to_string(n));
    }

    NormalDist normal;
    ReceivedBlock out{Eigen::MatrixXcd(m_ant, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index m = 0; m < m_ant; ++m) {
            // Plain real arithmetic: std::complex multiplication carries
            // inf/nan recovery that dominates this loop.
            const double th = traj.theta(m, k);
            const double c = std::cos(th);
            const double s = std::sin(th);
            const double hr = chan.h[m].real();
            const double hi = chan.h[m].imag();
            const double xr = x[k].real();
            const double xi = x[k].imag();
            const double gr = hr * xr - hi * xi;
            const double gi = hr * xi + hi * xr;
            double re = c * gr - s * gi;
            double im = s * gr + c * gi;
            if (noise == NoiseMode::kOn) {
                re += normal(rng);
                im += normal(rng);
            }
            out.y(m, k) = cdouble(re, im);
        }
    }
    return out;
}

double symbol_energy_for_snr(double snr_db, int m_antennas, bool hold_receive_snr) {
    if (m_antennas < 1) throw UsageError("antenna count must be >= 1");
    const double energy = 2.0 * std::pow(10.0, snr_db / 10.0);
    return hold_receive_snr ? energy / m_antennas : energy;
}

}  // namespace diffsimo
