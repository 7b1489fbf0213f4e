// Command-line front end: trajectory dumps, single detector runs, risk
// grids, lower-bound sweeps and bound tables, all seeded and reproducible.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynadetect/detector.hpp"
#include "dynadetect/harness.hpp"
#include "dynadetect/likelihood.hpp"
#include "dynadetect/theory_bounds.hpp"

namespace {

using namespace dynadetect;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitSpecError = 2;
constexpr int kExitRuntimeError = 3;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list: " + text);
    return out;
}

// Writes to --out when given, stdout otherwise.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int cmd_simulate(std::uint64_t n, std::uint64_t s, double p, std::uint64_t steps,
                 std::uint64_t seed, const std::string& out_path) {
    DynamicsConfig cfg;
    cfg.n = n;
    cfg.s = s;
    cfg.p = p;
    Rng rng(derive_seed(seed, {role_tag(StreamRole::Dynamics)}));
    const SupportTrajectory traj = simulate_trajectory(cfg, steps, rng);
    OutputTarget out(out_path);
    write_trajectory_csv(traj, out.stream());
    return kExitOk;
}

int cmd_detect(std::uint64_t n, std::uint64_t s, double p, std::optional<double> mu, double tau,
               double epsilon, std::optional<std::uint64_t> m, const std::string& hypothesis,
               std::uint64_t seed, const std::string& out_path) {
    DetectorConfig det = DetectorConfig::presets(n, s, epsilon);
    if (m) det.m = *m;

    DynamicsConfig cfg;
    cfg.n = n;
    cfg.s = s;
    cfg.p = p;
    if (mu) {
        cfg.mu = *mu;
    } else {
        BoundInputs inp;
        inp.n = n;
        inp.s = s;
        inp.m = det.m;
        inp.p = p;
        inp.epsilon = epsilon;
        inp.tau = tau;
        cfg.mu = mu_upper_thm1(inp);
    }

    Hypothesis hyp;
    if (hypothesis == "null") {
        hyp = Hypothesis::Null;
    } else if (hypothesis == "alternative") {
        hyp = Hypothesis::Alternative;
    } else {
        throw std::invalid_argument("--hypothesis must be 'null' or 'alternative'");
    }

    WorldOracle world(cfg, hyp, det.m, derive_seed(seed, {role_tag(StreamRole::Trial)}));
    Rng queries(derive_seed(seed, {role_tag(StreamRole::Queries)}));
    const Verdict verdict = detect(det, n, world, queries);
    OutputTarget out(out_path);
    out.stream() << verdict_to_json(verdict) << "\n";
    return kExitOk;
}

int cmd_risk(const std::string& config, const std::string& out_path, int threads,
             std::optional<std::uint64_t> trials_override,
             std::optional<std::uint64_t> seed_override) {
    OutputTarget out(out_path);
    run_experiment_file(config, out.stream(), threads, trials_override, seed_override);
    return kExitOk;
}

int cmd_figure3(const std::string& panel_name, std::uint64_t n, std::uint64_t s, double epsilon,
                const std::string& p_list, const std::string& t_grid, std::uint64_t outer,
                std::uint64_t inner, const std::string& mu_variant, std::uint64_t seed,
                int threads, const std::string& out_path) {
    SweepConfig cfg;
    if (panel_name == "left") {
        cfg.panel = Panel::Left;
    } else if (panel_name == "right") {
        cfg.panel = Panel::Right;
    } else {
        throw std::invalid_argument("--panel must be 'left' or 'right'");
    }
    cfg.n = n;
    cfg.s = s;
    cfg.epsilon = epsilon;
    cfg.p_list = parse_double_list(p_list);
    cfg.t_grid = parse_double_list(t_grid);
    cfg.n_outer = outer;
    cfg.n_inner = inner;
    if (mu_variant == "caption") {
        cfg.mu_variant = MuVariant::Caption;
    } else if (mu_variant == "text") {
        cfg.mu_variant = MuVariant::Text;
    } else {
        throw std::invalid_argument("--mu-variant must be 'caption' or 'text'");
    }
    cfg.seed = seed;
    cfg.threads = threads;

    const std::vector<BoundCurvePoint> points = figure3_sweep(cfg);
    OutputTarget out(out_path);
    write_sweep_csv(points, cfg.panel, seed, out.stream());
    return kExitOk;
}

void write_bound_row(std::ostream& out, const std::string& id, const json& item, double value,
                     const std::string& status) {
    auto field = [&item](const char* name) -> std::string {
        if (!item.contains(name)) return "";
        std::ostringstream os;
        os.precision(17);
        os << item.at(name).get<double>();
        return os.str();
    };
    out << id << ',' << field("n") << ',' << field("s") << ',' << field("m") << ',' << field("p")
        << ',' << field("epsilon") << ',' << field("tau") << ',';
    if (status == "ok") {
        std::ostringstream os;
        os.precision(17);
        os << value;
        out << os.str();
    }
    out << ',' << status << '\n';
}

int cmd_bounds(const std::string& config, const std::string& out_path) {
    std::ifstream in(config);
    if (!in) throw std::invalid_argument("cannot open config file: " + config);
    json j = json::parse(in);
    if (!j.is_array()) throw std::invalid_argument("bounds config must be a JSON array");

    OutputTarget out(out_path);
    out.stream() << "formula_id,n,s,m,p,epsilon,tau,value,status\n";
    for (const json& item : j) {
        const std::string formula = item.at("formula").get<std::string>();
        BoundInputs inp;
        if (item.contains("n")) inp.n = item.at("n").get<std::uint64_t>();
        if (item.contains("s")) inp.s = item.at("s").get<std::uint64_t>();
        if (item.contains("m")) inp.m = item.at("m").get<std::uint64_t>();
        if (item.contains("p")) inp.p = item.at("p").get<double>();
        if (item.contains("epsilon")) inp.epsilon = item.at("epsilon").get<double>();
        if (item.contains("tau")) inp.tau = item.at("tau").get<double>();
        if (item.contains("c_const")) inp.c_const = item.at("c_const").get<double>();
        try {
            double value = 0.0;
            if (formula == "thm1-upper") {
                value = mu_upper_thm1(inp);
            } else if (formula == "na-p0-literal") {
                value = mu_lower_na_p0(inp, Theorem2Variant::TheoremLiteral);
            } else if (formula == "na-p0-proof") {
                value = mu_lower_na_p0(inp, Theorem2Variant::ProofFinal);
            } else if (formula == "na-p1") {
                value = mu_lower_na_p1(inp);
            } else if (formula == "as-generic") {
                value = mu_lower_as_generic(inp);
            } else if (formula == "as-1sparse") {
                value = mu_lower_as_1sparse(inp);
            } else if (formula == "miss-exact") {
                value = miss_probability_bound(inp.n, inp.s, inp.m).exact;
            } else if (formula == "miss-bound") {
                value = miss_probability_bound(inp.n, inp.s, inp.m).lower_bound;
            } else {
                throw std::invalid_argument("unknown formula: " + formula);
            }
            write_bound_row(out.stream(), formula, item, value, "ok");
        } catch (const std::domain_error&) {
            write_bound_row(out.stream(), formula, item, 0.0, "domain-error");
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation laboratory for adaptive and non-adaptive detection of dynamically "
                 "evolving sparse signals"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags (--seed, --threads, --out) work after the subcommand

    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware concurrency
    std::string out_path;
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--out", out_path, "Output file (default: stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Dump a support trajectory as CSV");
    std::uint64_t sim_n = 50, sim_s = 5, sim_steps = 100;
    double sim_p = 0.2;
    sim->add_option("--n", sim_n, "Ambient dimension")->capture_default_str();
    sim->add_option("--s", sim_s, "Sparsity")->capture_default_str();
    sim->add_option("--p", sim_p, "Resample rate")->capture_default_str();
    sim->add_option("--steps", sim_steps, "Number of time steps")->capture_default_str();

    // detect
    auto* det = app.add_subcommand("detect", "Run the adaptive detector once, print verdict JSON");
    std::uint64_t det_n = 5000, det_s = 9;
    double det_p = 0.2, det_tau = 1.0, det_eps = 0.05;
    std::optional<double> det_mu;
    std::optional<std::uint64_t> det_m;
    std::string det_hyp = "alternative";
    det->add_option("--n", det_n, "Ambient dimension")->capture_default_str();
    det->add_option("--s", det_s, "Sparsity")->capture_default_str();
    det->add_option("--p", det_p, "Resample rate")->capture_default_str();
    det->add_option("--mu", det_mu, "Signal amplitude (default: sufficient-strength preset)");
    det->add_option("--tau", det_tau, "Slack factor for the amplitude preset")->capture_default_str();
    det->add_option("--epsilon", det_eps, "Target risk level")->capture_default_str();
    det->add_option("--m", det_m, "Measurement budget (default: 2T)");
    det->add_option("--hypothesis", det_hyp, "'null' or 'alternative'")->capture_default_str();

    // risk
    auto* risk = app.add_subcommand("risk", "Run a spec-file grid of risk estimates, write CSV");
    std::string risk_config;
    std::optional<std::uint64_t> trials_override;
    bool seed_given = false;
    risk->add_option("--config", risk_config, "JSON spec file")->required();
    risk->add_option("--trials-override", trials_override, "Override trial counts in all specs");
    risk->add_flag("--override-seed", seed_given, "Apply --seed to every spec in the file");

    // figure3
    auto* fig = app.add_subcommand("figure3", "Lower-bound curve sweep, write CSV");
    std::string fig_panel = "left";
    std::uint64_t fig_n = 5000, fig_s = 9, fig_outer = 100, fig_inner = 2000;
    double fig_eps = 0.05;
    std::string fig_p_list = "0,0.25,0.5,0.75,1";
    std::string fig_t_grid = "0,0.25,0.5,0.75,1,1.25,1.5";
    std::string fig_mu_variant = "caption";
    fig->add_option("--panel", fig_panel, "'left' or 'right'")->capture_default_str();
    fig->add_option("--n", fig_n, "Ambient dimension")->capture_default_str();
    fig->add_option("--s", fig_s, "Sparsity")->capture_default_str();
    fig->add_option("--epsilon", fig_eps, "Level entering c(eps)")->capture_default_str();
    fig->add_option("--p-list", fig_p_list, "Comma-separated resample rates")->capture_default_str();
    fig->add_option("--t-grid", fig_t_grid, "Comma-separated t values")->capture_default_str();
    fig->add_option("--outer", fig_outer, "Outer simulations per point")->capture_default_str();
    fig->add_option("--inner", fig_inner, "Inner trajectories per likelihood estimate")
        ->capture_default_str();
    fig->add_option("--mu-variant", fig_mu_variant, "'caption' or 'text' amplitude scale")
        ->capture_default_str();

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Evaluate closed-form bounds, write CSV");
    std::string bounds_config;
    bounds->add_option("--config", bounds_config, "JSON array of formula evaluations")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSpecError;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_n, sim_s, sim_p, sim_steps, seed, out_path);
        if (det->parsed()) {
            return cmd_detect(det_n, det_s, det_p, det_mu, det_tau, det_eps, det_m, det_hyp, seed,
                              out_path);
        }
        if (risk->parsed()) {
            return cmd_risk(risk_config, out_path, threads, trials_override,
                            seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt);
        }
        if (fig->parsed()) {
            return cmd_figure3(fig_panel, fig_n, fig_s, fig_eps, fig_p_list, fig_t_grid, fig_outer,
                               fig_inner, fig_mu_variant, seed, threads, out_path);
        }
        if (bounds->parsed()) return cmd_bounds(bounds_config, out_path);
    } catch (const nlohmann::json::exception& ex) {
        std::cerr << "spec error: " << ex.what() << "\n";
        return kExitSpecError;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "spec error: " << ex.what() << "\n";
        return kExitSpecError;
    } catch (const std::domain_error& ex) {
        std::cerr << "spec error: " << ex.what() << "\n";
        return kExitSpecError;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitSpecError;
}
