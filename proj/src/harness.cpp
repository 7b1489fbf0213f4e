#include "dynadetect/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dynadetect/detector.hpp"
#include "dynadetect/nonadaptive.hpp"
#include "dynadetect/parallel.hpp"
#include "dynadetect/stats.hpp"
#include "dynadetect/theory_bounds.hpp"

namespace dynadetect {

using nlohmann::json;

const char* to_string(Algo a) {
    switch (a) {
        case Algo::AdaptiveStt: return "adaptive-stt";
        case Algo::GlobalSum: return "global-sum";
        case Algo::SubsampleMax: return "subsample-max";
    }
    return "?";
}

Algo algo_from_string(const std::string& name) {
    if (name == "adaptive-stt") return Algo::AdaptiveStt;
    if (name == "global-sum") return Algo::GlobalSum;
    if (name == "subsample-max") return Algo::SubsampleMax;
    throw std::invalid_argument("unknown algo: " + name);
}

void ExperimentSpec::resolve() {
    cfg.validate();
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("ExperimentSpec: epsilon must lie in (0,1)");
    }
    if (trials == 0) throw std::invalid_argument("ExperimentSpec: trials must be positive");
    if (m_preset_2t) m = 2 * detector_T(cfg.n, cfg.s, epsilon);
    if (m == 0) throw std::invalid_argument("ExperimentSpec: m must be positive");
    if (mu_preset_thm1) {
        BoundInputs inp;
        inp.n = cfg.n;
        inp.s = cfg.s;
        inp.m = m;
        inp.p = cfg.p;
        inp.epsilon = epsilon;
        inp.tau = tau;
        cfg.mu = mu_upper_thm1(inp);
    }
    if (algo == Algo::AdaptiveStt && m < 2 * detector_T(cfg.n, cfg.s, epsilon)) {
        throw std::invalid_argument("ExperimentSpec: adaptive-stt requires m >= 2 * detector_T");
    }
}

namespace {

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec spec;
    spec.cfg.n = j.at("n").get<std::uint64_t>();
    spec.cfg.s = j.at("s").get<std::uint64_t>();
    spec.cfg.p = j.at("p").get<double>();
    spec.epsilon = j.at("epsilon").get<double>();
    spec.algo = algo_from_string(j.at("algo").get<std::string>());
    spec.trials = j.at("trials").get<std::uint64_t>();
    spec.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("tau")) spec.tau = j.at("tau").get<double>();

    if (j.contains("mu_preset")) {
        const std::string preset = j.at("mu_preset").get<std::string>();
        if (preset != "thm1") throw std::invalid_argument("unknown mu_preset: " + preset);
        spec.mu_preset_thm1 = true;
    } else {
        spec.cfg.mu = j.at("mu").get<double>();
    }

    if (j.contains("m_preset")) {
        const std::string preset = j.at("m_preset").get<std::string>();
        if (preset != "2T") throw std::invalid_argument("unknown m_preset: " + preset);
        spec.m_preset_2t = true;
    } else {
        spec.m = j.at("m").get<std::uint64_t>();
    }
    spec.resolve();
    return spec;
}

} // namespace

ExperimentSpec ExperimentSpec::from_json_text(const std::string& text) {
    return spec_from_json(json::parse(text));
}

std::vector<ExperimentSpec> parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    json j = json::parse(in);
    std::vector<ExperimentSpec> specs;
    if (j.is_array()) {
        for (const auto& item : j) specs.push_back(spec_from_json(item));
    } else if (j.is_object()) {
        specs.push_back(spec_from_json(j));
    } else {
        throw std::invalid_argument("spec file must hold a JSON object or array");
    }
    return specs;
}

int run_trial(const ExperimentSpec& spec, Hypothesis hyp, std::uint64_t trial) {
    const std::uint64_t world_seed =
        derive_seed(spec.master_seed, {role_tag(StreamRole::Trial), trial});
    switch (spec.algo) {
        case Algo::AdaptiveStt: {
            DetectorConfig det;
            det.T = detector_T(spec.cfg.n, spec.cfg.s, spec.epsilon);
            det.m = spec.m;
            det.epsilon = spec.epsilon;
            det.schedule = make_schedule(det.T, spec.epsilon);
            WorldOracle world(spec.cfg, hyp, spec.m, world_seed);
            Rng queries(derive_seed(spec.master_seed,
                                    {role_tag(StreamRole::Trial), trial, role_tag(StreamRole::Queries)}));
            return detect(det, spec.cfg.n, world, queries).psi;
        }
        case Algo::GlobalSum: {
            Rng design_rng(derive_seed(spec.master_seed,
                                       {role_tag(StreamRole::Trial), trial, role_tag(StreamRole::Design)}));
            const SensingDesign design = make_uniform_iid_design(spec.cfg.n, spec.m, design_rng);
            WorldOracle world(spec.cfg, hyp, spec.m, world_seed);
            std::vector<double> y;
            y.reserve(design.size());
            for (Index a : design.probes) y.push_back(world.measure(a));
            return global_sum_test(y, spec.epsilon).decision;
        }
        case Algo::SubsampleMax: {
            Rng design_rng(derive_seed(spec.master_seed,
                                       {role_tag(StreamRole::Trial), trial, role_tag(StreamRole::Design)}));
            const SensingDesign design =
                make_subsample_design(spec.cfg.n, spec.cfg.s, spec.m, spec.epsilon, design_rng, true);
            WorldOracle world(spec.cfg, hyp, spec.m, world_seed);
            std::vector<std::vector<double>> groups(design.block_count);
            std::size_t t = 0;
            for (std::uint64_t b = 0; b < design.block_count; ++b) {
                groups[b].reserve(design.block_len);
                for (std::uint64_t i = 0; i < design.block_len; ++i, ++t) {
                    groups[b].push_back(world.measure(design.probes[t]));
                }
            }
            return subsample_max_test(groups, spec.cfg.n, spec.cfg.s, spec.m, spec.epsilon).decision;
        }
    }
    throw std::logic_error("run_trial: unknown algo");
}

RiskEstimate estimate_risk_with(const ExperimentSpec& spec, const TrialRunner& runner,
                                int threads) {
    ExperimentSpec resolved = spec;
    resolved.resolve();

    std::atomic<std::uint64_t> false_alarms{0};
    std::atomic<std::uint64_t> misses{0};
    // Task i < trials is the null side; the rest is the alternative side.
    parallel_for(0, 2 * resolved.trials, threads, [&](std::uint64_t i) {
        if (i < resolved.trials) {
            if (runner(resolved, Hypothesis::Null, i) != 0) {
                false_alarms.fetch_add(1, std::memory_order_relaxed);
            }
        } else {
            if (runner(resolved, Hypothesis::Alternative, i - resolved.trials) != 1) {
                misses.fetch_add(1, std::memory_order_relaxed);
            }
        }
    });

    RiskEstimate est;
    est.trials_per_side = resolved.trials;
    est.fpr = static_cast<double>(false_alarms.load()) / static_cast<double>(resolved.trials);
    est.fnr = static_cast<double>(misses.load()) / static_cast<double>(resolved.trials);
    est.fpr_se = binomial_se(est.fpr, resolved.trials);
    est.fnr_se = binomial_se(est.fnr, resolved.trials);
    est.risk = std::max(est.fpr, est.fnr);
    return est;
}

RiskEstimate estimate_risk(const ExperimentSpec& spec, int threads) {
    return estimate_risk_with(spec, run_trial, threads);
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

} // namespace

void write_risk_csv_header(std::ostream& out) {
    out << "n,s,p,mu,m,epsilon,algo,trials,fpr,fpr_se,fnr,fnr_se,risk,seed\n";
}

void write_risk_csv_row(const ExperimentSpec& spec, const RiskEstimate& est, std::ostream& out) {
    out << spec.cfg.n << ',' << spec.cfg.s << ',' << fmt_double(spec.cfg.p) << ','
        << fmt_double(spec.cfg.mu) << ',' << spec.m << ',' << fmt_double(spec.epsilon) << ','
        << to_string(spec.algo) << ',' << spec.trials << ',' << fmt_double(est.fpr) << ','
        << fmt_double(est.fpr_se) << ',' << fmt_double(est.fnr) << ',' << fmt_double(est.fnr_se)
        << ',' << fmt_double(est.risk) << ',' << spec.master_seed << '\n';
}

std::uint64_t spec_text_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void run_experiment_file(const std::string& path, std::ostream& out, int threads,
                         std::optional<std::uint64_t> trials_override,
                         std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    json j = json::parse(text); // throws json::parse_error on malformed input
    std::vector<json> items;
    if (j.is_array()) {
        items.assign(j.begin(), j.end());
    } else if (j.is_object()) {
        items.push_back(j);
    } else {
        throw std::invalid_argument("spec file must hold a JSON object or array");
    }

    char hashbuf[32];
    std::snprintf(hashbuf, sizeof(hashbuf), "%016llx",
                  static_cast<unsigned long long>(spec_text_hash(json(j).dump())));
    out << "# version=" << kVersion << " spec_hash=" << hashbuf;
    if (seed_override) out << " seed_override=" << *seed_override;
    out << "\n";
    write_risk_csv_header(out);

    for (std::size_t i = 0; i < items.size(); ++i) {
        try {
            ExperimentSpec spec = spec_from_json(items[i]);
            if (trials_override) spec.trials = *trials_override;
            if (seed_override) spec.master_seed = *seed_override;
            spec.resolve();
            const RiskEstimate est = estimate_risk(spec, threads);
            write_risk_csv_row(spec, est, out);
            out.flush();
        } catch (const std::exception& ex) {
            out << "# FAILED spec[" << i << "]: " << ex.what() << "\n";
            out.flush();
            throw;
        }
    }
}

} // namespace dynadetect
