#include "diffsimo/detector.hpp"

#include <cmath>
#include <string>

#include "diffsimo/errors.hpp"
#include "diffsimo/phase.hpp"
#include "diffsimo/specfun.hpp"

namespace diffsimo {

const char* to_string(PhaseAveraging mode) {
    return mode == PhaseAveraging::kCentered ? "centered" : "wrapped";
}

PhaseAveraging parse_phase_averaging(const std::string& text) {
    if (text == "centered") return PhaseAveraging::kCentered;
    if (text == "wrapped") return PhaseAveraging::kWrapThenAverage;
    throw ConfigError("unknown phase averaging mode '" + text + "'");
}

AmplitudeDetector::AmplitudeDetector(const Constellation& constellation, double norm_sq, int m_antennas)
    : m_antennas_(m_antennas) {
    if (!(norm_sq > 0.0)) throw UsageError("amplitude detector needs ||h|| > 0");
    for (const AmplitudeClass& cls : constellation.classes()) {
        log_prior_.push_back(std::log(cls.prior));
        noncentrality_.push_back(cls.amplitude * cls.amplitude * norm_sq);
    }
}

std::size_t AmplitudeDetector::detect_class(double t) const {
    if (log_prior_.size() == 1) return 0;
    std::size_t best = 0;
    double best_score = kLogZero;
    bool have_best = false;
    for (std::size_t c = 0; c < log_prior_.size(); ++c) {
        const double score = log_ncx2_pdf(t, m_antennas_, noncentrality_[c]) + log_prior_[c];
        // Strict comparison keeps the smaller amplitude on ties.
        if (!have_best || score > best_score) {
            best = c;
            best_score = score;
            have_best = true;
        }
    }
    return best;
}

double amplitude_map(const Eigen::Ref<const Eigen::VectorXcd>& y_k, const DetectorContext& ctx) {
    const auto m_ant = static_cast<int>(y_k.size());
    if (m_ant != ctx.chan.antennas()) throw UsageError("amplitude_map: vector length differs from channel");
    AmplitudeDetector det(ctx.constellation, ctx.chan.norm_sq, m_ant);
    return ctx.constellation.classes()[det.detect_class(y_k.squaredNorm())].amplitude;
}

double average_phase_differences(std::span<const double> differences, PhaseAveraging averaging) {
    if (differences.empty()) return 0.0;
    const double n = static_cast<double>(differences.size());
    if (averaging == PhaseAveraging::kWrapThenAverage) {
        double sum = 0.0;
        for (double d : differences) sum += wrap_phase(d);
        return sum / n;
    }
    double c = 0.0;
    double s = 0.0;
    for (double d : differences) {
        c += std::cos(d);
        s += std::sin(d);
    }
    const double center = (c == 0.0 && s == 0.0) ? wrap_phase(differences[0]) : std::atan2(s, c);
    double offset = 0.0;
    for (double d : differences) offset += wrap_phase(d - center);
    return wrap_phase(center + offset / n);
}

PhaseStatistic phase_statistic(const Eigen::Ref<const Eigen::VectorXcd>& y_k,
                               const Eigen::Ref<const Eigen::VectorXcd>& y_km1, PhaseAveraging averaging) {
    if (y_k.size() != y_km1.size() || y_k.size() == 0) {
        throw UsageError("phase_statistic: vectors must be nonempty and of equal length");
    }
    PhaseStatistic out;
    std::vector<double> diffs;
    diffs.reserve(static_cast<std::size_t>(y_k.size()));
    for (Eigen::Index m = 0; m < y_k.size(); ++m) {
        if (y_k[m] == cdouble(0.0, 0.0) || y_km1[m] == cdouble(0.0, 0.0)) {
            ++out.excluded;
            continue;
        }
        diffs.push_back(wrap_phase(std::arg(y_k[m]) - std::arg(y_km1[m])));
    }
    out.psi = average_phase_differences(diffs, averaging);
    return out;
}

std::size_t nearest_phase_position(double psi, const AmplitudeClass& cls) {
    if (cls.phases.empty()) throw UsageError("phase_ml: empty amplitude class");
    std::size_t best = 0;
    double best_dist = circular_distance(psi, cls.phases[0]);
    // Phases ascend, so strict comparison keeps the smaller phase on ties.
    for (std::size_t i = 1; i < cls.phases.size(); ++i) {
        const double d = circular_distance(psi, cls.phases[i]);
        if (d < best_dist) {
            best = i;
            best_dist = d;
        }
    }
    return best;
}

double phase_ml(double psi, const AmplitudeClass& cls) { return cls.phases[nearest_phase_position(psi, cls)]; }

CombinedBlock clo_combine(const ReceivedBlock& block, const ChannelRealization& chan) {
    if (block.antennas() != chan.antennas()) throw UsageError("clo_combine: block and channel sizes differ");
    const double gain = chan.norm();
    if (!(gain > 0.0)) throw UsageError("clo_combine: ||h|| = 0");
    CombinedBlock out;
    out.gain = gain;
    // h^H y / ||h||, computed as a row vector times the block.
    out.block.y = (chan.h.adjoint() * block.y) / gain;
    return out;
}

namespace {

// Mean of wrap(d - center) added back to the center.
double centered_mean(std::span<const double> differences, double center) {
    double offset = 0.0;
    for (double d : differences) offset += wrap_near(d - center);
    return wrap_near(center + offset / static_cast<double>(differences.size()));
}

// Per-antenna received phase and unit phasor of one column.
struct ColumnPhases {
    std::vector<double> phase;
    std::vector<cdouble> unit;
    std::vector<char> valid;

    explicit ColumnPhases(std::size_t m) : phase(m), unit(m), valid(m) {}

    void load(const ReceivedBlock& block, Eigen::Index k) {
        for (std::size_t m = 0; m < phase.size(); ++m) {
            const cdouble v = block.y(static_cast<Eigen::Index>(m), k);
            const double mag = std::sqrt(v.real() * v.real() + v.imag() * v.imag());
            valid[m] = mag > 0.0;
            if (!valid[m]) continue;
            phase[m] = std::atan2(v.imag(), v.real());
            unit[m] = cdouble(v.real() / mag, v.imag() / mag);
        }
    }
};

BlockDetection detect_separate(const ReceivedBlock& block, const Constellation& constellation,
                               double norm_sq, PhaseAveraging averaging) {
    const Eigen::Index m_ant = block.antennas();
    const Eigen::Index n = block.length();
    if (n < 1) throw UsageError("detect_block: block must contain the reference symbol");
    AmplitudeDetector amp(constellation, norm_sq, static_cast<int>(m_ant));
    const auto& classes = constellation.classes();

    BlockDetection out;
    out.symbols.reserve(static_cast<std::size_t>(n - 1));

    const auto m_count = static_cast<std::size_t>(m_ant);
    ColumnPhases prev(m_count);
    ColumnPhases cur(m_count);
    std::vector<double> diffs;
    diffs.reserve(m_count);
    prev.load(block, 0);

    for (Eigen::Index k = 1; k < n; ++k) {
        cur.load(block, k);
        diffs.clear();
        double res_re = 0.0;
        double res_im = 0.0;
        for (std::size_t m = 0; m < m_count; ++m) {
            if (!cur.valid[m] || !prev.valid[m]) {
                ++out.excluded_samples;
                continue;
            }
            diffs.push_back(wrap_near(cur.phase[m] - prev.phase[m]));
            // e^{j d_m} = u_k conj(u_{k-1}); their sum points at the circular mean.
            const cdouble a = cur.unit[m];
            const cdouble b = prev.unit[m];
            res_re += a.real() * b.real() + a.imag() * b.imag();
            res_im += a.imag() * b.real() - a.real() * b.imag();
        }

        double psi = 0.0;
        if (!diffs.empty()) {
            if (averaging == PhaseAveraging::kWrapThenAverage) {
                double sum = 0.0;
                for (double d : diffs) sum += d;
                psi = sum / static_cast<double>(diffs.size());
            } else {
                const double center = (res_re == 0.0 && res_im == 0.0) ? diffs[0] : std::atan2(res_im, res_re);
                psi = centered_mean(diffs, center);
            }
        }

        const std::size_t c = amp.detect_class(block.y.col(k).squaredNorm());
        const AmplitudeClass& cls = classes[c];
        const std::size_t pos = nearest_phase_position(psi, cls);
        out.symbols.push_back(DetectedSymbol{cls.amplitude, cls.phases[pos], cls.point_indices[pos]});
        std::swap(prev, cur);
    }
    return out;
}

}  // namespace

BlockDetection detect_block(const ReceivedBlock& block, const DetectorContext& ctx) {
    if (block.antennas() != ctx.chan.antennas()) throw UsageError("detect_block: block and channel sizes differ");
    if (ctx.osc_mode == OscMode::kClo) {
        const CombinedBlock combined = clo_combine(block, ctx.chan);
        return detect_separate(combined.block, ctx.constellation, combined.gain * combined.gain, ctx.averaging);
    }
    return detect_separate(block, ctx.constellation, ctx.chan.norm_sq, ctx.averaging);
}

}  // namespace diffsimo
