// Command-line front end: simulate | sweep | analyze | selftest.
//
// Exit codes: 0 success, 2 usage error, 3 self-test failure, 1 anything else.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "diffsimo/errors.hpp"
#include "diffsimo/harness.hpp"
#include "diffsimo/selftest.hpp"

namespace {

using namespace diffsimo;

constexpr int kExitUsage = 2;
constexpr int kExitSelfTest = 3;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

// "x", "a,b,c" or "start:step:stop" (inclusive).
std::vector<double> parse_grid(const std::string& text) {
    if (text.empty()) throw UsageError("empty grid");
    const auto range = split(text, ':');
    if (range.size() == 3) {
        const double start = to_double(range[0]);
        const double step = to_double(range[1]);
        const double stop = to_double(range[2]);
        if (!(step > 0.0) || stop < start) throw UsageError("bad range '" + text + "'");
        const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        std::vector<double> out;
        for (long i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    if (range.size() != 1) throw UsageError("bad grid '" + text + "'");
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(to_double(part));
    if (out.empty()) throw UsageError("empty grid");
    return out;
}

std::vector<int> parse_int_grid(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_grid(text)) {
        if (v != std::floor(v) || v < 1) throw UsageError("antenna counts must be positive integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

struct CommonArgs {
    std::string method = "dif";
    std::string osc = "slo";
    std::string antennas = "10";
    std::string snr_db = "30";
    std::string var_tx = "0.01";
    std::string var_rx = "0.01";
    int qam = 16;
    long symbols = 10000;
    int trials = 100;
    std::optional<int> pilot_period;
    std::uint64_t seed = 1;
    bool hold_receive_snr = false;
    std::string out;
    std::string format = "csv";
    int workers = 0;
    std::string phase_average = "centered";
    std::string past_amplitude = "energy";
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--method", a.method, "dif | ekf")->check(CLI::IsMember({"dif", "ekf"}));
    cmd->add_option("--osc", a.osc, "clo | slo")->check(CLI::IsMember({"clo", "slo"}));
    cmd->add_option("--antennas", a.antennas, "antenna count(s): M or M1,M2,...");
    cmd->add_option("--snr-db", a.snr_db, "SNR per symbol E/2 in dB: x, a,b,c or start:step:stop");
    cmd->add_option("--var-tx", a.var_tx, "transmitter innovation variance(s), rad^2");
    cmd->add_option("--var-rx", a.var_rx, "receiver innovation variance(s), rad^2");
    cmd->add_option("--qam", a.qam, "constellation order")->check(CLI::IsMember({4, 16, 64}));
    cmd->add_option("--symbols", a.symbols, "transmitted symbols per trial (>= 1000)");
    cmd->add_option("--trials", a.trials, "trials (channel draws) per point");
    cmd->add_option("--pilot-period", a.pilot_period, "EKF pilot period (default 50)");
    cmd->add_option("--seed", a.seed, "master seed");
    cmd->add_flag("--hold-receive-snr", a.hold_receive_snr, "scale transmit energy by 1/M");
    cmd->add_option("--out", a.out, "output file (default stdout)");
    cmd->add_option("--format", a.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", a.workers, "worker threads (0 = all cores)");
    cmd->add_option("--phase-average", a.phase_average, "centered | wrapped")
        ->check(CLI::IsMember({"centered", "wrapped"}));
    cmd->add_option("--past-amplitude", a.past_amplitude, "analysis r_{k-1}: energy | sqrt-energy")
        ->check(CLI::IsMember({"energy", "sqrt-energy"}));
}

SweepConfig to_sweep(const CommonArgs& a) {
    SweepConfig sweep;
    PointConfig& p = sweep.base;
    p.method = parse_method(a.method);
    p.osc_mode = parse_osc_mode(a.osc);
    p.qam = a.qam;
    p.symbols_per_trial = a.symbols;
    p.trials = a.trials;
    p.pilot_period = a.pilot_period;
    p.seed = a.seed;
    p.hold_receive_snr = a.hold_receive_snr;
    sweep.antennas = parse_int_grid(a.antennas);
    sweep.snr_db = parse_grid(a.snr_db);
    sweep.var_tx = parse_grid(a.var_tx);
    sweep.var_rx = parse_grid(a.var_rx);
    p.antennas = sweep.antennas.front();
    p.snr_db = sweep.snr_db.front();
    p.var_tx = sweep.var_tx.front();
    p.var_rx = sweep.var_rx.front();
    for (const PointConfig& point : sweep.points()) point.validate();
    return sweep;
}

RunOptions to_options(const CommonArgs& a, bool simulate) {
    RunOptions o;
    o.workers = a.workers;
    o.simulate = simulate;
    o.averaging = parse_phase_averaging(a.phase_average);
    o.past = parse_past_amplitude(a.past_amplitude);
    return o;
}

int run_experiment(const CommonArgs& a, bool single_point, bool simulate) {
    const SweepConfig sweep = to_sweep(a);
    if (single_point && sweep.points().size() != 1) throw UsageError("simulate takes a single point; use sweep");
    if (!simulate && sweep.base.method != Method::kDif) throw UsageError("analyze applies to the dif method only");
    const RunOptions options = to_options(a, simulate);

    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw UsageError("cannot open output file '" + a.out + "'");
    }
    std::ostream& out = a.out.empty() ? std::cout : file;

    if (a.format == "csv") {
        out << kCsvHeader << '\n';
        run_sweep(sweep, options, [&](const ResultRecord& r) { out << csv_row(r) << '\n' << std::flush; });
    } else {
        out << to_json(run_sweep(sweep, options)) << '\n';
    }
    return 0;
}

int run_selftest_command(std::uint64_t seed) {
    SelfTestOptions options;
    options.seed = seed;
    const SelfTestReport report = run_selftest(options);
    for (const SelfTestCheck& c : report.checks) {
        std::cout << fmt::format("[{}] {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
    }
    std::cout << fmt::format("selftest {} in {:.1f} s\n", report.passed() ? "passed" : "FAILED", report.seconds);
    return report.passed() ? 0 : kExitSelfTest;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differential two-stage detection over SIMO Wiener phase-noise channels"};
    app.require_subcommand(1);

    CommonArgs sim_args, sweep_args, analyze_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo SEP at one point");
    add_common(simulate, sim_args);
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo SEP over a grid");
    add_common(sweep, sweep_args);
    auto* analyze = app.add_subcommand("analyze", "closed-form union bound and error floor only");
    add_common(analyze, analyze_args);
    auto* selftest = app.add_subcommand("selftest", "numerical calibrations");
    std::uint64_t selftest_seed = SelfTestOptions{}.seed;
    selftest->add_option("--seed", selftest_seed, "seed for the sampling checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*simulate) return run_experiment(sim_args, true, true);
        if (*sweep) return run_experiment(sweep_args, false, true);
        if (*analyze) return run_experiment(analyze_args, false, false);
        return run_selftest_command(selftest_seed);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
