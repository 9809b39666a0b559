#include "diffsimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include "json.hpp"

#include "diffsimo/constellation.hpp"
#include "diffsimo/diff_codec.hpp"
#include "diffsimo/ekf.hpp"
#include "diffsimo/errors.hpp"
#include "diffsimo/random.hpp"

namespace diffsimo {

const char* to_string(Method method) { return method == Method::kDif ? "dif" : "ekf"; }

Method parse_method(const std::string& text) {
    if (text == "dif" || text == "DIF") return Method::kDif;
    if (text == "ekf" || text == "EKF") return Method::kEkf;
    throw ConfigError("unknown method '" + text + "'");
}

void PointConfig::validate() const {
    if (antennas < 1) throw UsageError("antennas must be >= 1");
    if (symbols_per_trial < kMinSymbolsPerTrial) {
        throw UsageError("symbols per trial must be >= " + std::to_string(kMinSymbolsPerTrial));
    }
    if (trials < 1) throw UsageError("trials must be >= 1");
    if (!std::isfinite(snr_db)) throw UsageError("snr_db must be finite");
    if (qam != 4 && qam != 16 && qam != 64) throw UsageError("qam must be 4, 16 or 64");
    try {
        phase_noise().validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    if (method == Method::kDif && pilot_period) throw UsageError("pilot period applies to the EKF method only");
    if (method == Method::kEkf && effective_pilot_period() < 1) throw UsageError("pilot period must be >= 1");
}

std::vector<PointConfig> SweepConfig::points() const {
    auto or_base = [](const auto& axis, auto value) {
        using T = typename std::decay_t<decltype(axis)>::value_type;
        return axis.empty() ? std::vector<T>{static_cast<T>(value)} : axis;
    };
    const auto vt = or_base(var_tx, base.var_tx);
    const auto vr = or_base(var_rx, base.var_rx);
    const auto ant = or_base(antennas, base.antennas);
    const auto snr = or_base(snr_db, base.snr_db);

    std::vector<PointConfig> out;
    for (double a : vt)
        for (double b : vr)
            for (int m : ant)
                for (double s : snr) {
                    PointConfig p = base;
                    p.var_tx = a;
                    p.var_rx = b;
                    p.antennas = m;
                    p.snr_db = s;
                    out.push_back(p);
                }
    return out;
}

SepEstimate estimate_sep(std::size_t errors, std::size_t scored) {
    if (scored == 0) throw UsageError("estimate_sep: no scored symbols");
    if (errors > scored) throw UsageError("estimate_sep: errors exceed scored symbols");
    constexpr double z = 1.96;
    const double n = static_cast<double>(scored);
    const double p = static_cast<double>(errors) / n;
    const double z2n = z * z / n;
    const double center = (p + 0.5 * z2n) / (1.0 + z2n);
    const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n);
    SepEstimate est{p, std::max(0.0, center - half), std::min(1.0, center + half)};
    est.ci_low = std::min(est.ci_low, p);
    est.ci_high = std::max(est.ci_high, p);
    return est;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t grid_index, std::size_t trial) {
    return derive_seed(master_seed, {static_cast<std::uint64_t>(grid_index), static_cast<std::uint64_t>(trial)});
}

namespace {

struct TrialOutcome {
    std::size_t errors = 0;
    std::size_t scored = 0;
    std::size_t pilots = 0;
    std::size_t redraws = 0;
    std::size_t skipped_updates = 0;
    double bound_energy = 0.0;
    double bound_sqrt_energy = 0.0;
    double seconds = 0.0;
};

// Per-point values shared read-only by that point's trials.
struct PreparedPoint {
    PointConfig config;
    Constellation constellation;
    std::size_t pilot_index = 0;  // EKF pilot point
};

PreparedPoint prepare(const PointConfig& config) {
    config.validate();
    const double energy = symbol_energy_for_snr(config.snr_db, config.antennas, config.hold_receive_snr);
    PreparedPoint prep{config, build_qam(config.qam, energy)};
    // Pilot: the point closest to sqrt(E) on the positive real axis, first index on ties.
    prep.pilot_index = nearest_point(prep.constellation, cdouble(std::sqrt(energy), 0.0));
    return prep;
}

std::uint64_t stream_seed(std::uint64_t trial_seed_value, Stream stream) {
    return derive_seed(trial_seed_value, {static_cast<std::uint64_t>(stream)});
}

TrialOutcome run_trial(const PreparedPoint& prep, std::size_t grid_index, std::size_t trial,
                       const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const PointConfig& cfg = prep.config;
    const std::uint64_t seed = trial_seed(cfg.seed, grid_index, trial);
    Rng fading_rng(stream_seed(seed, Stream::kFading));
    Rng phase_rng(stream_seed(seed, Stream::kPhaseNoise));
    Rng symbol_rng(stream_seed(seed, Stream::kSymbols));
    Rng awgn_rng(stream_seed(seed, Stream::kAwgn));

    const ChannelRealization chan = options.fixed_gains ? unit_channel(cfg.antennas)
                                                        : draw_fading(cfg.antennas, fading_rng);
    const PhaseNoiseConfig pn = cfg.phase_noise();

    TrialOutcome out;
    out.redraws = static_cast<std::size_t>(chan.redraws);
    if (cfg.method == Method::kDif) {
        out.bound_energy = union_bound_sep(prep.constellation, pn, chan, PastAmplitude::kEnergy);
        out.bound_sqrt_energy = union_bound_sep(prep.constellation, pn, chan, PastAmplitude::kSqrtEnergy);
    }
    if (!options.simulate) {
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    }

    const auto slots = static_cast<std::size_t>(cfg.symbols_per_trial);
    const PhaseTrajectory traj = sample_trajectory(pn, cfg.antennas, static_cast<int>(slots), phase_rng);
    boost::random::uniform_int_distribution<std::size_t> pick(0, prep.constellation.size() - 1);

    if (cfg.method == Method::kDif) {
        std::vector<std::size_t> data(slots - 1);
        for (auto& d : data) d = pick(symbol_rng);
        const EncodedSequence enc = encode_block(prep.constellation, data);
        const ReceivedBlock block = transmit(enc.x, traj, chan, awgn_rng, options.noise);
        const DetectorContext ctx{prep.constellation, chan, cfg.osc_mode, options.averaging};
        const BlockDetection det = detect_block(block, ctx);
        for (std::size_t i = 0; i < data.size(); ++i) out.errors += det.symbols[i].point_index != data[i];
        out.scored = data.size();
    } else {
        const PilotSchedule schedule{cfg.effective_pilot_period(), 0};
        const auto& points = prep.constellation.points();
        std::vector<long> truth(slots, -1);
        std::vector<cdouble> x(slots);
        for (std::size_t k = 0; k < slots; ++k) {
            if (schedule.is_pilot(k)) {
                x[k] = points[prep.pilot_index];
            } else {
                truth[k] = static_cast<long>(pick(symbol_rng));
                x[k] = points[static_cast<std::size_t>(truth[k])];
            }
        }
        const ReceivedBlock block = transmit(x, traj, chan, awgn_rng, options.noise);
        const EkfBlockResult res = run_ekf_block(EkfBlockInput{block, chan, prep.constellation, schedule, x, pn,
                                                               traj.theta.col(0)});
        for (std::size_t k = 0; k < slots; ++k) {
            if (truth[k] < 0) continue;
            ++out.scored;
            out.errors += res.decisions[k] != truth[k];
        }
        out.pilots = res.pilots;
        out.skipped_updates = res.diagnostics.skipped_updates;
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

ResultRecord aggregate(const PreparedPoint& prep, std::span<const TrialOutcome> trials, const RunOptions& options) {
    ResultRecord rec;
    rec.config = prep.config;
    rec.past = options.past;
    double energy_sum = 0.0;
    double sqrt_sum = 0.0;
    for (const TrialOutcome& t : trials) {
        rec.errors += t.errors;
        rec.symbols_scored += t.scored;
        rec.pilots += t.pilots;
        rec.fading_redraws += t.redraws;
        rec.skipped_updates += t.skipped_updates;
        rec.wall_time += t.seconds;
        energy_sum += t.bound_energy;
        sqrt_sum += t.bound_sqrt_energy;
    }
    if (rec.symbols_scored > 0) rec.estimate = estimate_sep(rec.errors, rec.symbols_scored);
    if (prep.config.method == Method::kDif) {
        const double n = static_cast<double>(trials.size());
        const double primary = options.past == PastAmplitude::kEnergy ? energy_sum : sqrt_sum;
        const double alt = options.past == PastAmplitude::kEnergy ? sqrt_sum : energy_sum;
        rec.analytical_sep = primary / n;
        rec.analytical_sep_alt = alt / n;
        rec.floor = error_floor(prep.constellation, prep.config.phase_noise());
    }
    return rec;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::vector<ResultRecord> run_sweep(const SweepConfig& sweep, const RunOptions& options,
                                    const std::function<void(const ResultRecord&)>& sink) {
    std::vector<PreparedPoint> prepared;
    for (const PointConfig& p : sweep.points()) prepared.push_back(prepare(p));
    if (prepared.empty()) throw UsageError("sweep grid is empty");

    // Flattened (point, trial) work units; outcome slots are preassigned so the
    // reduction order never depends on scheduling.
    std::vector<std::size_t> first_unit(prepared.size() + 1, 0);
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        first_unit[i + 1] = first_unit[i] + static_cast<std::size_t>(prepared[i].config.trials);
    }
    const std::size_t total = first_unit.back();
    std::vector<TrialOutcome> outcomes(total);
    std::vector<std::size_t> remaining(prepared.size());
    for (std::size_t i = 0; i < prepared.size(); ++i) remaining[i] = first_unit[i + 1] - first_unit[i];

    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::condition_variable done_cv;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            const std::size_t unit = next.fetch_add(1);
            if (unit >= total) return;
            const auto point = static_cast<std::size_t>(
                std::upper_bound(first_unit.begin(), first_unit.end(), unit) - first_unit.begin() - 1);
            try {
                outcomes[unit] = run_trial(prepared[point], point, unit - first_unit[point], options);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                next.store(total);
            }
            std::lock_guard lock(mutex);
            --remaining[point];
            done_cv.notify_all();
        }
    };

    const int n_workers = std::min<int>(resolve_workers(options.workers), static_cast<int>(total));
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);

    std::vector<ResultRecord> records;
    records.reserve(prepared.size());
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        {
            std::unique_lock lock(mutex);
            done_cv.wait(lock, [&] { return remaining[i] == 0 || failure; });
            if (failure) break;
        }
        const std::span<const TrialOutcome> trials(outcomes.data() + first_unit[i], first_unit[i + 1] - first_unit[i]);
        records.push_back(aggregate(prepared[i], trials, options));
        if (sink) sink(records.back());
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return records;
}

ResultRecord run_point(const PointConfig& config, const RunOptions& options) {
    SweepConfig sweep;
    sweep.base = config;
    return run_sweep(sweep, options).front();
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

}  // namespace

std::string csv_row(const ResultRecord& r) {
    const PointConfig& c = r.config;
    std::optional<double> sep, lo, hi;
    if (r.estimate) {
        sep = r.estimate->sep;
        lo = r.estimate->ci_low;
        hi = r.estimate->ci_high;
    }
    std::optional<double> bound;
    if (r.analytical_sep) bound = clamp_probability(*r.analytical_sep);
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", to_string(c.method), to_string(c.osc_mode),
                       c.antennas, c.snr_db, c.var_tx, c.var_rx, c.qam, r.symbols_scored, r.errors, opt(sep),
                       opt(lo), opt(hi), opt(bound), opt(r.floor), c.seed);
}

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
    out << kCsvHeader << '\n';
    for (const ResultRecord& r : records) out << csv_row(r) << '\n';
}

std::string to_json(const std::vector<ResultRecord>& records) {
    using nlohmann::json;
    auto or_null = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json arr = json::array();
    for (const ResultRecord& r : records) {
        const PointConfig& c = r.config;
        json config = {{"method", to_string(c.method)},
                       {"osc", to_string(c.osc_mode)},
                       {"antennas", c.antennas},
                       {"snr_db", c.snr_db},
                       {"var_tx", c.var_tx},
                       {"var_rx", c.var_rx},
                       {"qam", c.qam},
                       {"symbols_per_trial", c.symbols_per_trial},
                       {"trials", c.trials},
                       {"pilot_period", c.method == Method::kEkf ? json(c.effective_pilot_period()) : json(nullptr)},
                       {"seed", c.seed},
                       {"hold_receive_snr", c.hold_receive_snr}};
        json obj = {{"config", config},
                    {"method", to_string(c.method)},
                    {"osc", to_string(c.osc_mode)},
                    {"antennas", c.antennas},
                    {"snr_db", c.snr_db},
                    {"var_tx", c.var_tx},
                    {"var_rx", c.var_rx},
                    {"qam", c.qam},
                    {"symbols_scored", r.symbols_scored},
                    {"errors", r.errors},
                    {"sep", r.estimate ? json(r.estimate->sep) : json(nullptr)},
                    {"ci_low", r.estimate ? json(r.estimate->ci_low) : json(nullptr)},
                    {"ci_high", r.estimate ? json(r.estimate->ci_high) : json(nullptr)},
                    {"analytical_sep", r.analytical_sep ? json(clamp_probability(*r.analytical_sep)) : json(nullptr)},
                    {"analytical_sep_mode", to_string(r.past)},
                    {"analytical_sep_alt", r.analytical_sep_alt ? json(clamp_probability(*r.analytical_sep_alt)) : json(nullptr)},
                    {"floor", or_null(r.floor)},
                    {"seed", c.seed},
                    {"pilots", r.pilots},
                    {"fading_redraws", r.fading_redraws},
                    {"wall_time", r.wall_time}};
        arr.push_back(std::move(obj));
    }
    return arr.dump(2);
}

}  // namespace diffsimo
