#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/random/binomial_distribution.hpp>

#include "doctest.h"
#include "json.hpp"

#include "diffsimo/errors.hpp"
#include "diffsimo/harness.hpp"
#include "diffsimo/random.hpp"

using namespace diffsimo;

namespace {

PointConfig small_dif() {
    PointConfig p;
    p.method = Method::kDif;
    p.osc_mode = OscMode::kSlo;
    p.antennas = 4;
    p.snr_db = 25.0;
    p.var_tx = 0.005;
    p.var_rx = 0.005;
    p.qam = 16;
    p.symbols_per_trial = 1000;
    p.trials = 12;
    p.seed = 42;
    return p;
}

std::string csv_of(const std::vector<ResultRecord>& recs) {
    std::ostringstream os;
    write_csv(os, recs);
    return os.str();
}

}  // namespace

TEST_CASE("Wilson interval") {
    const auto zero = estimate_sep(0, 1000);
    CHECK(zero.sep == 0.0);
    CHECK(zero.ci_low == 0.0);
    CHECK(zero.ci_high == doctest::Approx(0.003826898586390522).epsilon(1e-12));

    const auto all = estimate_sep(1000, 1000);
    CHECK(all.sep == 1.0);
    CHECK(all.ci_low == doctest::Approx(0.9961731014136095).epsilon(1e-12));
    CHECK(all.ci_high == 1.0);

    const auto half = estimate_sep(500, 1000);
    CHECK(half.sep == 0.5);
    CHECK(half.ci_high - 0.5 == doctest::Approx(0.5 - half.ci_low).epsilon(1e-12));

    const auto mid = estimate_sep(37, 5000);
    CHECK(mid.ci_low == doctest::Approx(0.005373566400957179).epsilon(1e-12));
    CHECK(mid.ci_high == doctest::Approx(0.010182801330587321).epsilon(1e-12));

    CHECK_THROWS_AS(estimate_sep(1, 0), UsageError);
    CHECK_THROWS_AS(estimate_sep(5, 4), UsageError);
}

TEST_CASE("Wilson interval coverage") {
    Rng rng(2024);
    const double p = 0.01;
    const int n = 2000;
    boost::random::binomial_distribution<int> binom(n, p);
    int covered = 0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) {
        const auto est = estimate_sep(static_cast<std::size_t>(binom(rng)), n);
        CHECK(est.ci_low <= est.sep);
        CHECK(est.sep <= est.ci_high);
        covered += est.ci_low <= p && p <= est.ci_high;
    }
    // Nominal 95%; allow for the discreteness of the binomial.
    CHECK(static_cast<double>(covered) / reps > 0.93);
}

TEST_CASE("configuration errors") {
    PointConfig p = small_dif();
    p.pilot_period = 50;
    CHECK_THROWS_AS(run_point(p), UsageError);
    p = small_dif();
    p.symbols_per_trial = 999;
    CHECK_THROWS_AS(run_point(p), UsageError);
    p = small_dif();
    p.trials = 0;
    CHECK_THROWS_AS(run_point(p), UsageError);
    p = small_dif();
    p.qam = 32;
    CHECK_THROWS_AS(run_point(p), UsageError);
    p = small_dif();
    p.var_rx = -1;
    CHECK_THROWS_AS(run_point(p), UsageError);
    CHECK_THROWS_AS(parse_method("mmse"), ConfigError);
}

TEST_CASE("noise-free, phase-noise-free DIF makes no errors") {
    PointConfig p = small_dif();
    p.var_tx = p.var_rx = 0.0;
    RunOptions opt;
    opt.noise = NoiseMode::kOff;
    for (OscMode mode : {OscMode::kClo, OscMode::kSlo}) {
        p.osc_mode = mode;
        const auto r = run_point(p, opt);
        CHECK(r.errors == 0);
        CHECK(r.estimate->sep == 0.0);
    }
}

TEST_CASE("scored symbols exclude references and pilots") {
    PointConfig p = small_dif();
    p.symbols_per_trial = 1234;
    const auto dif = run_point(p);
    CHECK(dif.symbols_scored == 12u * 1233u);
    CHECK(dif.pilots == 0);

    p.method = Method::kEkf;
    p.pilot_period = 50;
    const auto ekf = run_point(p);
    const std::size_t pilots = 12u * 25u;  // ceil(1234 / 50)
    CHECK(ekf.pilots == pilots);
    CHECK(ekf.symbols_scored == 12u * 1234u - pilots);
    CHECK_FALSE(ekf.analytical_sep.has_value());
    CHECK(ekf.estimate->ci_low <= ekf.estimate->sep);
    CHECK(ekf.estimate->sep <= ekf.estimate->ci_high);
}

TEST_CASE("same seed, same records; different seed, different records") {
    const PointConfig p = small_dif();
    const auto a = run_point(p);
    const auto b = run_point(p);
    CHECK(a.errors == b.errors);
    CHECK(csv_row(a) == csv_row(b));
    CHECK(*a.analytical_sep == *b.analytical_sep);

    PointConfig q = p;
    q.seed = 43;
    CHECK(*run_point(q).analytical_sep != *a.analytical_sep);
}

TEST_CASE("worker count does not change results") {
    SweepConfig s;
    s.base = small_dif();
    s.antennas = {1, 3};
    s.snr_db = {15.0, 30.0};
    s.var_tx = {0.001, 0.01};
    std::string reference;
    for (int w : {1, 2, 5}) {
        RunOptions opt;
        opt.workers = w;
        const std::string csv = csv_of(run_sweep(s, opt));
        if (reference.empty()) reference = csv;
        CHECK(csv == reference);
    }
}

TEST_CASE("sweep order and streaming") {
    SweepConfig s;
    s.base = small_dif();
    s.base.trials = 2;
    s.antennas = {1, 2};
    s.snr_db = {10.0, 20.0, 30.0};
    s.var_tx = {0.001, 0.002};
    const auto pts = s.points();
    REQUIRE(pts.size() == 12);
    CHECK(pts[0].snr_db == 10.0);
    CHECK(pts[1].snr_db == 20.0);
    CHECK(pts[3].antennas == 2);
    CHECK(pts[6].var_tx == 0.002);

    std::vector<double> seen;
    RunOptions opt;
    opt.workers = 3;
    const auto recs = run_sweep(s, opt, [&](const ResultRecord& r) { seen.push_back(r.config.snr_db); });
    REQUIRE(seen.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(seen[i] == pts[i].snr_db);
}

TEST_CASE("a one-point grid equals run_point") {
    SweepConfig s;
    s.base = small_dif();
    const auto r = run_sweep(s).front();
    CHECK(csv_row(r) == csv_row(run_point(s.base)));
}

TEST_CASE("DIF SEP falls with SNR, common oscillator") {
    SweepConfig s;
    s.base = small_dif();
    s.base.osc_mode = OscMode::kClo;
    s.base.antennas = 10;
    s.base.var_tx = s.base.var_rx = 0.01;
    s.base.trials = 100;
    s.base.hold_receive_snr = true;
    s.snr_db = {10.0, 20.0, 30.0, 40.0};
    const auto recs = run_sweep(s);
    for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].estimate->sep <= recs[i - 1].estimate->ci_high);
    CHECK(recs.front().estimate->sep > recs.back().estimate->ci_high);
}

TEST_CASE("analysis-only runs carry bounds but no estimate") {
    RunOptions opt;
    opt.simulate = false;
    const auto r = run_point(small_dif(), opt);
    CHECK_FALSE(r.estimate.has_value());
    CHECK(r.symbols_scored == 0);
    REQUIRE(r.analytical_sep.has_value());
    REQUIRE(r.floor.has_value());
    CHECK(*r.analytical_sep >= *r.floor);
    CHECK(*r.analytical_sep_alt >= *r.floor);
    const std::string row = csv_row(r);
    CHECK(row.find(",0,0,,,,") != std::string::npos);
}

TEST_CASE("CSV and JSON layout") {
    CHECK(std::string(kCsvHeader) ==
          "method,osc,antennas,snr_db,var_tx,var_rx,qam,symbols_scored,errors,sep,ci_low,ci_high,analytical_sep,floor,seed");
    const auto r = run_point(small_dif());
    const std::string row = csv_row(r);
    CHECK(row.rfind("dif,slo,4,25,0.005,0.005,16,11988,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), ',') == 14);
    CHECK(row.substr(row.rfind(',') + 1) == "42");

    const auto j = nlohmann::json::parse(to_json({r, r}));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["config"]["antennas"] == 4);
    CHECK(j[0]["config"]["method"] == "dif");
    CHECK(j[0]["config"]["pilot_period"].is_null());
    CHECK(j[0]["errors"] == r.errors);
    CHECK(j[0]["sep"].get<double>() == r.estimate->sep);
}

TEST_CASE("trial seeds are distinct") {
    std::set<std::uint64_t> seeds;
    for (std::size_t g = 0; g < 20; ++g)
        for (std::size_t t = 0; t < 500; ++t) seeds.insert(trial_seed(7, g, t));
    CHECK(seeds.size() == 10000);
}
