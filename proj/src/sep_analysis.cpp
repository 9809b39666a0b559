#include "diffsimo/sep_analysis.hpp"

#include <cmath>
#include <functional>

#include "diffsimo/errors.hpp"
#include "diffsimo/phase.hpp"
#include "diffsimo/specfun.hpp"

namespace diffsimo {

const char* to_string(PastAmplitude mode) { return mode == PastAmplitude::kEnergy ? "energy" : "sqrt-energy"; }

PastAmplitude parse_past_amplitude(const std::string& text) {
    if (text == "energy") return PastAmplitude::kEnergy;
    if (text == "sqrt-energy") return PastAmplitude::kSqrtEnergy;
    throw ConfigError("unknown past-amplitude mode '" + text + "'");
}

double sigma_psi_sq(const PhaseNoiseConfig& pn, const ChannelRealization& chan, double r_k, double r_km1) {
    pn.validate();
    if (!(r_k > 0.0) || !(r_km1 > 0.0)) throw DomainError("sigma_psi_sq: amplitudes must be positive");
    const auto m = static_cast<double>(chan.antennas());
    if (m < 1) throw UsageError("sigma_psi_sq: empty channel");

    double harmonic = 0.0;
    for (Eigen::Index i = 0; i < chan.h.size(); ++i) harmonic += 1.0 / std::norm(chan.h[i]);
    const double awgn = harmonic / (m * m) * (1.0 / (r_k * r_k) + 1.0 / (r_km1 * r_km1));
    const double rx = pn.osc_mode == OscMode::kClo ? pn.var_rx : pn.var_rx / m;
    return pn.var_tx + rx + awgn;
}

double pairwise_phase_error(double phi_i, double phi_j, double sigma_psi) {
    const double gap = circular_distance(phi_i, phi_j);
    if (!(sigma_psi > 0.0)) return 0.0;
    return q_function(gap / (2.0 * sigma_psi));
}

namespace {

double sum_pairwise(const Constellation& constellation, const std::function<double(double)>& sigma_for_amplitude) {
    double total = 0.0;
    for (const AmplitudeClass& cls : constellation.classes()) {
        const double sigma = sigma_for_amplitude(cls.amplitude);
        for (std::size_t i = 0; i < cls.phases.size(); ++i) {
            for (std::size_t j = 0; j < cls.phases.size(); ++j) {
                if (i != j) total += pairwise_phase_error(cls.phases[i], cls.phases[j], sigma);
            }
        }
    }
    return total / static_cast<double>(constellation.size());
}

}  // namespace

double union_bound_sep(const Constellation& constellation, const PhaseNoiseConfig& pn,
                       const ChannelRealization& chan, PastAmplitude past) {
    const double energy = constellation.avg_energy();
    const double r_past = past == PastAmplitude::kEnergy ? energy : std::sqrt(energy);
    return sum_pairwise(constellation,
                        [&](double r) { return std::sqrt(sigma_psi_sq(pn, chan, r, r_past)); });
}

double error_floor(const Constellation& constellation, const PhaseNoiseConfig& pn) {
    pn.validate();
    const double var = pn.osc_mode == OscMode::kClo ? pn.var_tx + pn.var_rx : pn.var_tx;
    const double sigma = std::sqrt(var);
    return sum_pairwise(constellation, [&](double) { return sigma; });
}

}  // namespace diffsimo
