#pragma once

#include <string>

#include "diffsimo/channel.hpp"
#include "diffsimo/constellation.hpp"
#include "diffsimo/phase_noise.hpp"

namespace diffsimo {

// Amplitude assumed for the previous symbol when the bound drops the
// dependence on it. kEnergy substitutes r_{k-1} = E (the literal rule, so the
// AWGN term carries 1/E^2); kSqrtEnergy uses r_{k-1} = sqrt(E), which is
// dimensionally consistent (1/E).
enum class PastAmplitude { kEnergy, kSqrtEnergy };

const char* to_string(PastAmplitude mode);
PastAmplitude parse_past_amplitude(const std::string& text);

// Variance (rad^2) of the differential phase statistic:
//   CLO: var_tx + var_rx   + (1/M^2) sum_m 1/|h_m|^2 (1/r_k^2 + 1/r_{k-1}^2)
//   SLO: var_tx + var_rx/M + (same AWGN term)
double sigma_psi_sq(const PhaseNoiseConfig& pn, const ChannelRealization& chan, double r_k, double r_km1);

// Q(|wrap(phi_i - phi_j)| / (2 sigma_psi)); sigma_psi = 0 gives the limit 0.
double pairwise_phase_error(double phi_i, double phi_j, double sigma_psi);

// High-SNR union bound: (1/N) sum_i sum_{j != i, same class} P(phase error i -> j),
// with cross-class pairs contributing nothing. Not clamped; may exceed 1.
double union_bound_sep(const Constellation& constellation, const PhaseNoiseConfig& pn,
                       const ChannelRealization& chan, PastAmplitude past = PastAmplitude::kEnergy);

// The same bound with sigma_psi^2 replaced by its M -> infinity limit:
// var_tx + var_rx (CLO) or var_tx (SLO).
double error_floor(const Constellation& constellation, const PhaseNoiseConfig& pn);

inline double clamp_probability(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

}  // namespace diffsimo
