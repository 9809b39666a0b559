#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diffsimo/channel.hpp"
#include "diffsimo/constellation.hpp"
#include "diffsimo/phase_noise.hpp"

namespace diffsimo {

// How per-antenna phase differences are averaged into psi_k.
//
// kWrapThenAverage wraps each difference to (-pi, pi] and takes the plain
// arithmetic mean. For symbol phases near +-pi a single antenna whose
// difference crosses the cut moves the mean by 2 pi / M.
//
// kCentered wraps every difference relative to their circular mean before
// averaging, then wraps the result. It equals the arithmetic mean of the
// unwrapped differences whenever they lie within pi of the circular mean, so
// the cut at +-pi has no effect. This is the detector default.
enum class PhaseAveraging { kCentered, kWrapThenAverage };

const char* to_string(PhaseAveraging mode);
PhaseAveraging parse_phase_averaging(const std::string& text);

struct DetectorContext {
    Constellation constellation;
    ChannelRealization chan;
    OscMode osc_mode = OscMode::kSlo;
    PhaseAveraging averaging = PhaseAveraging::kCentered;
};

struct DetectedSymbol {
    double amplitude_hat = 0.0;
    double phase_hat = 0.0;
    std::size_t point_index = 0;
};

struct PhaseStatistic {
    double psi = 0.0;
    int excluded = 0;  // antennas skipped because a sample had zero magnitude
};

// Precomputed amplitude-detector terms for one (constellation, ||h||^2, M).
class AmplitudeDetector {
public:
    AmplitudeDetector(const Constellation& constellation, double norm_sq, int m_antennas);

    // MAP class index for t = ||y_k||^2. Ties go to the smaller amplitude.
    std::size_t detect_class(double t) const;

private:
    int m_antennas_;
    std::vector<double> log_prior_;
    std::vector<double> noncentrality_;
};

// MAP amplitude from ||y_k||^2 under the noncentral chi-squared likelihood.
double amplitude_map(const Eigen::Ref<const Eigen::VectorXcd>& y_k, const DetectorContext& ctx);

// psi_k: antenna average of the phase differences angle(y_k) - angle(y_{k-1}).
PhaseStatistic phase_statistic(const Eigen::Ref<const Eigen::VectorXcd>& y_k,
                               const Eigen::Ref<const Eigen::VectorXcd>& y_km1,
                               PhaseAveraging averaging = PhaseAveraging::kCentered);

// Same statistic from precomputed per-antenna phase differences.
double average_phase_differences(std::span<const double> differences, PhaseAveraging averaging);

// Position within the class of the phase nearest to psi in circular distance;
// ties go to the smaller phase.
std::size_t nearest_phase_position(double psi, const AmplitudeClass& cls);
double phase_ml(double psi, const AmplitudeClass& cls);

struct BlockDetection {
    std::vector<DetectedSymbol> symbols;  // one per k >= 1
    std::size_t excluded_samples = 0;
};

// Two-stage detection of a block whose column 0 is the reference symbol. The
// differential reference is always the previous received vector.
BlockDetection detect_block(const ReceivedBlock& block, const DetectorContext& ctx);

struct CombinedBlock {
    ReceivedBlock block;  // 1 x n
    double gain = 0.0;    // ||h||
};

// Coherent combining for CLO: <h, y_k> / ||h||. The effective channel is the
// scalar ||h||, and detection proceeds as the M = 1 case.
CombinedBlock clo_combine(const ReceivedBlock& block, const ChannelRealization& chan);

}  // namespace diffsimo
