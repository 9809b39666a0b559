#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "diffsimo/channel.hpp"
#include "diffsimo/detector.hpp"
#include "diffsimo/phase_noise.hpp"
#include "diffsimo/sep_analysis.hpp"

namespace diffsimo {

enum class Method { kDif, kEkf };

const char* to_string(Method method);
Method parse_method(const std::string& text);

inline constexpr long kMinSymbolsPerTrial = 1000;
inline constexpr int kDefaultPilotPeriod = 50;

// One experiment point. symbols_per_trial counts every transmitted slot,
// including the DIF reference symbol and EKF pilots.
struct PointConfig {
    Method method = Method::kDif;
    OscMode osc_mode = OscMode::kSlo;
    int antennas = 1;
    double snr_db = 30.0;
    double var_tx = 0.0;
    double var_rx = 0.0;
    int qam = 16;
    long symbols_per_trial = 10000;
    int trials = 100;
    std::optional<int> pilot_period;  // EKF only; defaults to 50
    std::uint64_t seed = 1;
    bool hold_receive_snr = false;

    void validate() const;
    PhaseNoiseConfig phase_noise() const { return PhaseNoiseConfig{var_tx, var_rx, osc_mode}; }
    int effective_pilot_period() const { return pilot_period.value_or(kDefaultPilotPeriod); }
};

// Grid axes; the sweep runs their Cartesian product in the order
// var_tx, var_rx, antennas, snr_db (snr_db innermost).
struct SweepConfig {
    PointConfig base;
    std::vector<int> antennas;
    std::vector<double> snr_db;
    std::vector<double> var_tx;
    std::vector<double> var_rx;

    std::vector<PointConfig> points() const;
};

// Knobs that are not part of an experiment's identity.
struct RunOptions {
    int workers = 0;  // 0: hardware concurrency
    bool simulate = true;  // false: closed-form analysis only
    NoiseMode noise = NoiseMode::kOn;
    bool fixed_gains = false;  // h = all ones instead of CN(0, 1) draws
    PhaseAveraging averaging = PhaseAveraging::kCentered;
    PastAmplitude past = PastAmplitude::kEnergy;
};

struct SepEstimate {
    double sep = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// Point estimate and 95% Wilson score interval (z = 1.96).
SepEstimate estimate_sep(std::size_t errors, std::size_t scored);

struct ResultRecord {
    PointConfig config;
    std::size_t errors = 0;
    std::size_t symbols_scored = 0;
    std::optional<SepEstimate> estimate;  // absent in analysis-only runs
    // Union bound averaged over the trials' channel draws (DIF only), in the
    // requested past-amplitude mode and in the other one.
    std::optional<double> analytical_sep;
    std::optional<double> analytical_sep_alt;
    std::optional<double> floor;
    PastAmplitude past = PastAmplitude::kEnergy;
    std::size_t pilots = 0;
    std::size_t fading_redraws = 0;
    std::size_t skipped_updates = 0;
    double wall_time = 0.0;  // summed over trials, seconds
};

// Seed of trial `trial` at grid position `grid_index`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t grid_index, std::size_t trial);

ResultRecord run_point(const PointConfig& config, const RunOptions& options = {});

// Records are handed to `sink` in grid order as soon as they and every earlier
// point are complete; the same records are returned.
std::vector<ResultRecord> run_sweep(const SweepConfig& sweep, const RunOptions& options = {},
                                    const std::function<void(const ResultRecord&)>& sink = {});

inline constexpr const char* kCsvHeader =
    "method,osc,antennas,snr_db,var_tx,var_rx,qam,symbols_scored,errors,sep,ci_low,ci_high,analytical_sep,floor,seed";

std::string csv_row(const ResultRecord& record);
void write_csv(std::ostream& out, const std::vector<ResultRecord>& records);
std::string to_json(const std::vector<ResultRecord>& records);

}  // namespace diffsimo
