#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynadetect/signal_model.hpp"

namespace dynadetect {

inline constexpr const char* kVersion = "0.1.0";

enum class Algo { AdaptiveStt, GlobalSum, SubsampleMax };

const char* to_string(Algo a);
Algo algo_from_string(const std::string& name);

// One Monte Carlo risk-estimation job. mu and m may come from presets:
// mu_preset "thm1" evaluates the sufficient signal strength at (p, tau);
// m_preset "2T" uses twice the detector query count.
struct ExperimentSpec {
    DynamicsConfig cfg;
    std::uint64_t m = 0;
    bool m_preset_2t = false;
    bool mu_preset_thm1 = false;
    double tau = 1.0;
    double epsilon = 0.0;
    Algo algo = Algo::AdaptiveStt;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;

    // Fills mu/m from presets and checks gates. Safe to call repeatedly.
    void resolve();

    static ExperimentSpec from_json_text(const std::string& text);
};

// Parses a spec file: one JSON object or an array of them.
std::vector<ExperimentSpec> parse_spec_file(const std::string& path);

struct RiskEstimate {
    double fpr = 0.0, fpr_se = 0.0;
    double fnr = 0.0, fnr_se = 0.0;
    double risk = 0.0;
    std::uint64_t trials_per_side = 0;
};

// psi of one simulated trial; used by estimate_risk and by tests that
// exercise the aggregation with degenerate test functions.
using TrialRunner = std::function<int(const ExperimentSpec&, Hypothesis, std::uint64_t trial)>;

// `trials` independent simulations per hypothesis. Every trial derives its
// streams from (master_seed, trial index, role); the hypothesis selects the
// world construction, not the streams, so the two sides share noise
// realizations (common random numbers) and output is bit-identical across
// thread counts.
RiskEstimate estimate_risk(const ExperimentSpec& spec, int threads = 1);
RiskEstimate estimate_risk_with(const ExperimentSpec& spec, const TrialRunner& runner,
                                int threads = 1);

// psi of one trial of the spec's algorithm.
int run_trial(const ExperimentSpec& spec, Hypothesis hyp, std::uint64_t trial);

// CSV columns: n,s,p,mu,m,epsilon,algo,trials,fpr,fpr_se,fnr,fnr_se,risk,seed.
void write_risk_csv_header(std::ostream& out);
void write_risk_csv_row(const ExperimentSpec& spec, const RiskEstimate& est, std::ostream& out);

// Runs a spec-file grid and writes CSV rows plus a reproducibility header
// (version, spec hash, per-row seeds live in the rows). A spec entry that
// fails mid-grid flushes the rows computed so far and a failure marker
// comment. Throws on unreadable/malformed input.
void run_experiment_file(const std::string& path, std::ostream& out, int threads,
                         std::optional<std::uint64_t> trials_override,
                         std::optional<std::uint64_t> seed_override);

// FNV-1a over the canonicalized spec text; echoed in the CSV header.
std::uint64_t spec_text_hash(const std::string& text);

} // namespace dynadetect
