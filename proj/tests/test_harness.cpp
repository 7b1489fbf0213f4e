#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dynadetect/detector.hpp"
#include "dynadetect/harness.hpp"
#include "test_support.hpp"

using namespace dynadetect;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/dynadetect_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

ExperimentSpec base_spec() {
    ExperimentSpec spec;
    spec.cfg = DynamicsConfig{50, 2, 0.5, 0.0};
    spec.m = 100;
    spec.epsilon = 0.1;
    spec.algo = Algo::GlobalSum;
    spec.trials = 50;
    spec.master_seed = 7;
    return spec;
}

} // namespace

TEST_CASE("algo names round-trip") {
    for (Algo a : {Algo::AdaptiveStt, Algo::GlobalSum, Algo::SubsampleMax}) {
        CHECK(algo_from_string(to_string(a)) == a);
    }
    CHECK_THROWS_AS(algo_from_string("nope"), std::invalid_argument);
}

TEST_CASE("spec json parsing with presets") {
    const std::string text = R"({
        "n": 5000, "s": 9, "p": 0.2,
        "mu_preset": "thm1", "tau": 1.0,
        "m_preset": "2T",
        "epsilon": 0.05, "algo": "adaptive-stt",
        "trials": 10, "master_seed": 42
    })";
    const ExperimentSpec spec = ExperimentSpec::from_json_text(text);
    CHECK(spec.m == 29536);
    CHECK(spec.cfg.mu == doctest::Approx(5.2089638828988934).epsilon(1e-12));
    CHECK(spec.algo == Algo::AdaptiveStt);
}

TEST_CASE("spec json rejects unknown presets and missing fields") {
    CHECK_THROWS(ExperimentSpec::from_json_text(R"({"n": 10})"));
    CHECK_THROWS_AS(ExperimentSpec::from_json_text(R"({
        "n": 100, "s": 2, "p": 0.1, "mu_preset": "bogus",
        "m": 100, "epsilon": 0.1, "algo": "global-sum",
        "trials": 5, "master_seed": 1
    })"),
                    std::invalid_argument);
}

TEST_CASE("adaptive-stt gate: m below 2T is rejected") {
    ExperimentSpec spec = base_spec();
    spec.algo = Algo::AdaptiveStt;
    spec.m = 10;
    CHECK_THROWS_AS(spec.resolve(), std::invalid_argument);
}

TEST_CASE("degenerate runners give the degenerate rates") {
    const ExperimentSpec spec = base_spec();
    const RiskEstimate zero = estimate_risk_with(
        spec, [](const ExperimentSpec&, Hypothesis, std::uint64_t) { return 0; });
    CHECK(zero.fpr == 0.0);
    CHECK(zero.fnr == 1.0);
    CHECK(zero.risk == 1.0);
    const RiskEstimate one = estimate_risk_with(
        spec, [](const ExperimentSpec&, Hypothesis, std::uint64_t) { return 1; });
    CHECK(one.fpr == 1.0);
    CHECK(one.fnr == 0.0);
    CHECK(one.risk == 1.0);
}

TEST_CASE("mu = 0: the two sides coincide exactly") {
    for (Algo algo : {Algo::GlobalSum, Algo::SubsampleMax}) {
        ExperimentSpec spec = base_spec();
        spec.algo = algo;
        spec.cfg = DynamicsConfig{60, 3, 0.4, 0.0};
        spec.m = algo == Algo::SubsampleMax ? 120 : 100;
        const RiskEstimate est = estimate_risk(spec, 2);
        // same verdicts trial-for-trial on both sides
        CHECK(est.fpr + est.fnr == doctest::Approx(1.0).epsilon(1e-12));
    }
    // adaptive detector, same property
    ExperimentSpec spec = base_spec();
    spec.algo = Algo::AdaptiveStt;
    spec.cfg = DynamicsConfig{80, 2, 0.3, 0.0};
    spec.m_preset_2t = true;
    spec.trials = 30;
    const RiskEstimate est = estimate_risk(spec, 2);
    CHECK(est.fpr + est.fnr == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("risk estimates are independent of thread count") {
    ExperimentSpec spec = base_spec();
    spec.cfg.mu = 0.8;
    spec.trials = 120;
    const RiskEstimate a = estimate_risk(spec, 1);
    const RiskEstimate b = estimate_risk(spec, 8);
    CHECK(a.fpr == b.fpr);
    CHECK(a.fnr == b.fnr);
    CHECK(a.risk == b.risk);
}

TEST_CASE("global-sum risk behaves at a detectable amplitude") {
    ExperimentSpec spec = base_spec();
    // mean shift sqrt(m) s mu / n = 5 -> power near 1, fpr near eps
    spec.cfg = DynamicsConfig{50, 2, 1.0, 5.0 * 50.0 / (std::sqrt(400.0) * 2.0)};
    spec.m = 400;
    spec.trials = 400;
    spec.epsilon = 0.05;
    const RiskEstimate est = estimate_risk(spec, 0);
    CHECK(est.fpr <= 0.05 + 3.0 * binomial_se(0.05, spec.trials));
    CHECK(est.fnr <= 0.05);
    CHECK(est.risk == std::max(est.fpr, est.fnr));
}

TEST_CASE("experiment file: empty grid gives a header-only csv") {
    const std::string path = write_temp("empty.json", "[]");
    std::ostringstream out;
    run_experiment_file(path, out, 1, std::nullopt, std::nullopt);
    const std::string text = out.str();
    CHECK(text.find("# version=") == 0);
    CHECK(text.find("n,s,p,mu,m,epsilon,algo,trials,fpr,fpr_se,fnr,fnr_se,risk,seed\n") !=
          std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("experiment file: grid over p produces one row per spec") {
    std::ostringstream spec_text;
    spec_text << "[";
    bool first = true;
    for (double p : {0.0, 0.5, 1.0}) {
        if (!first) spec_text << ",";
        first = false;
        spec_text << R"({"n": 40, "s": 2, "p": )" << p
                  << R"(, "mu": 1.0, "m": 80, "epsilon": 0.1,
                       "algo": "global-sum", "trials": 25, "master_seed": 3})";
    }
    spec_text << "]";
    const std::string path = write_temp("grid.json", spec_text.str());
    std::ostringstream out;
    run_experiment_file(path, out, 2, std::nullopt, std::nullopt);
    std::istringstream lines(out.str());
    std::string line;
    int data_rows = 0;
    while (std::getline(lines, line)) {
        if (!line.empty() && line[0] != '#' && line[0] != 'n') ++data_rows;
    }
    CHECK(data_rows == 3);
}

TEST_CASE("experiment file: identical output at 1 and 8 threads") {
    const std::string path = write_temp("det.json", R"({
        "n": 60, "s": 3, "p": 0.3, "mu": 1.2, "m": 90,
        "epsilon": 0.1, "algo": "subsample-max", "trials": 60, "master_seed": 11
    })");
    std::ostringstream out1, out8;
    run_experiment_file(path, out1, 1, std::nullopt, std::nullopt);
    run_experiment_file(path, out8, 8, std::nullopt, std::nullopt);
    CHECK(out1.str() == out8.str());
}

TEST_CASE("experiment file: overrides apply") {
    const std::string path = write_temp("ovr.json", R"({
        "n": 40, "s": 2, "p": 0.0, "mu": 0.5, "m": 40,
        "epsilon": 0.1, "algo": "global-sum", "trials": 10, "master_seed": 5
    })");
    std::ostringstream out;
    run_experiment_file(path, out, 1, 17, 99);
    CHECK(out.str().find(",17,") != std::string::npos); // trials column
    CHECK(out.str().find(",99\n") != std::string::npos); // seed column
}

TEST_CASE("experiment file: malformed input throws after flushing a marker") {
    const std::string bad = write_temp("bad.json", R"([{"n": 40}])");
    std::ostringstream out;
    CHECK_THROWS(run_experiment_file(bad, out, 1, std::nullopt, std::nullopt));
    CHECK(out.str().find("# FAILED spec[0]") != std::string::npos);
    const std::string garbled = write_temp("garbled.json", "not json");
    std::ostringstream out2;
    CHECK_THROWS(run_experiment_file(garbled, out2, 1, std::nullopt, std::nullopt));
}

TEST_CASE("spec hash is stable") {
    CHECK(spec_text_hash("abc") == spec_text_hash("abc"));
    CHECK(spec_text_hash("abc") != spec_text_hash("abd"));
}
