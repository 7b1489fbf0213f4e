#include "dynadetect/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dynadetect/parallel.hpp"

namespace dynadetect {

namespace {

void check_lengths(std::span<const double> y, const SensingDesign& design) {
    if (y.size() != design.probes.size()) {
        throw std::invalid_argument("likelihood: observation/design length mismatch");
    }
    if (y.empty()) throw std::invalid_argument("likelihood: empty observation sequence");
}

double emission_weight(double y, double mu) { return std::exp(mu * y - 0.5 * mu * mu); }

// log C(a, b) for 0 <= b <= a.
double log_choose(std::uint64_t a, std::uint64_t b) {
    return std::lgamma(static_cast<double>(a) + 1.0) - std::lgamma(static_cast<double>(b) + 1.0) -
           std::lgamma(static_cast<double>(a - b) + 1.0);
}

} // namespace

const char* to_string(LrMethod m) {
    switch (m) {
        case LrMethod::Exact1Sparse: return "exact-1sparse";
        case LrMethod::ExactP0: return "exact-p0";
        case LrMethod::ExactP1: return "exact-p1";
        case LrMethod::NestedMc: return "nested-mc";
    }
    return "?";
}

LikelihoodEstimate lr_exact_1sparse(std::span<const double> y, const SensingDesign& design,
                                    std::uint64_t n, double p, double mu) {
    check_lengths(y, design);
    if (n == 0) throw std::invalid_argument("lr_exact_1sparse: n must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("lr_exact_1sparse: p outside [0,1]");

    if (n == 1) {
        // single component, always active
        double value = 1.0;
        for (double v : y) value *= emission_weight(v, mu);
        return LikelihoodEstimate{value, 0.0, LrMethod::Exact1Sparse};
    }

    const double nn = static_cast<double>(n);
    const double beta = 1.0 - p * nn / (nn - 1.0);
    const double gamma = p / (nn - 1.0);

    // Forward masses: previously probed locations carry individual masses,
    // the never-probed remainder is one lumped per-location mass.
    std::vector<Index> locs;
    std::vector<double> mass;
    double pool_mass = 1.0 / nn;
    double total = 1.0;

    for (std::size_t t = 0; t < y.size(); ++t) {
        if (t > 0) {
            const double drift = gamma * total;
            for (double& a : mass) a = beta * a + drift;
            pool_mass = beta * pool_mass + drift;
        }
        const Index a_t = design.probes[t];
        if (a_t < 1 || a_t > n) throw std::out_of_range("lr_exact_1sparse: probe outside [1, n]");
        auto it = std::lower_bound(locs.begin(), locs.end(), a_t);
        std::size_t idx = static_cast<std::size_t>(it - locs.begin());
        if (it == locs.end() || *it != a_t) {
            locs.insert(it, a_t);
            mass.insert(mass.begin() + static_cast<std::ptrdiff_t>(idx), pool_mass);
        }
        const double g = emission_weight(y[t], mu);
        total += mass[idx] * (g - 1.0);
        mass[idx] *= g;
    }
    return LikelihoodEstimate{total, 0.0, LrMethod::Exact1Sparse};
}

LikelihoodEstimate lr_exact_p1(std::span<const double> y, const SensingDesign& design,
                               std::uint64_t n, std::uint64_t s, double mu) {
    check_lengths(y, design);
    if (s == 0 || s > n) throw std::invalid_argument("lr_exact_p1: need 1 <= s <= n");
    const double frac = static_cast<double>(s) / static_cast<double>(n);
    double value = 1.0;
    for (double v : y) {
        value *= frac * emission_weight(v, mu) + 1.0 - frac;
    }
    return LikelihoodEstimate{value, 0.0, LrMethod::ExactP1};
}

LikelihoodEstimate lr_exact_p0(std::span<const double> y, const SensingDesign& design,
                               std::uint64_t n, std::uint64_t s, double mu) {
    check_lengths(y, design);
    if (s == 0 || s > n) throw std::invalid_argument("lr_exact_p0: need 1 <= s <= n");

    // Per-component aggregated emission weights G_i.
    std::vector<Index> comps;
    std::vector<double> weight;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const Index a_t = design.probes[t];
        if (a_t < 1 || a_t > n) throw std::out_of_range("lr_exact_p0: probe outside [1, n]");
        auto it = std::lower_bound(comps.begin(), comps.end(), a_t);
        const std::size_t idx = static_cast<std::size_t>(it - comps.begin());
        const double g = emission_weight(y[t], mu);
        if (it == comps.end() || *it != a_t) {
            comps.insert(it, a_t);
            weight.insert(weight.begin() + static_cast<std::ptrdiff_t>(idx), g);
        } else {
            weight[idx] *= g;
        }
    }

    const std::uint64_t B = comps.size();
    const std::uint64_t K = std::min<std::uint64_t>(s, B);

    // Elementary symmetric polynomials e_0..e_K of the weights.
    std::vector<double> esp(K + 1, 0.0);
    esp[0] = 1.0;
    for (double G : weight) {
        for (std::uint64_t k = K; k >= 1; --k) {
            esp[k] += esp[k - 1] * G;
        }
    }

    // L = sum_k P(|S ∩ probed| = k) / C(B, k) * e_k-weighting; each overlap
    // set of size k has probability C(n-B, s-k) / C(n, s).
    const double log_denom = log_choose(n, s);
    double value = 0.0;
    for (std::uint64_t k = 0; k <= K; ++k) {
        if (s - k > n - B) continue; // no room for the rest of the support
        const double h = std::exp(log_choose(n - B, s - k) - log_denom);
        value += h * esp[k];
    }
    return LikelihoodEstimate{value, 0.0, LrMethod::ExactP0};
}

LikelihoodEstimate lr_nested_mc(std::span<const double> y, const SensingDesign& design,
                                const DynamicsConfig& cfg, std::uint64_t n_inner, Rng& rng) {
    check_lengths(y, design);
    cfg.validate();
    if (n_inner == 0) throw std::invalid_argument("lr_nested_mc: n_inner must be positive");

    const double mu = cfg.mu;
    const std::uint64_t inner_base = rng.next_u64();
    double sum = 0.0;
    double sumsq = 0.0;
    SupportEvolver evolver;
    std::vector<Index> active;
    for (std::uint64_t i = 0; i < n_inner; ++i) {
        Rng ri(derive_seed(inner_base, {role_tag(StreamRole::Inner), i}));
        active = init_support(cfg, ri).active;
        double logw = 0.0;
        for (std::size_t t = 0; t < y.size(); ++t) {
            if (t > 0) evolver.step(active, cfg, ri);
            if (std::binary_search(active.begin(), active.end(), design.probes[t])) {
                logw += mu * y[t] - 0.5 * mu * mu;
            }
        }
        const double w = std::exp(logw);
        sum += w;
        sumsq += w * w;
    }
    LikelihoodEstimate est;
    est.method = LrMethod::NestedMc;
    est.value = sum / static_cast<double>(n_inner);
    if (n_inner > 1) {
        const double nn = static_cast<double>(n_inner);
        const double var = std::max(0.0, (sumsq - sum * sum / nn) / (nn - 1.0));
        est.se = std::sqrt(var / nn);
    }
    return est;
}

LrMethod choose_lr_method(const DynamicsConfig& cfg) {
    if (cfg.p == 0.0) return LrMethod::ExactP0;
    if (cfg.p == 1.0) return LrMethod::ExactP1;
    if (cfg.s == 1) return LrMethod::Exact1Sparse;
    return LrMethod::NestedMc;
}

LikelihoodEstimate evaluate_lr(LrMethod method, std::span<const double> y,
                               const SensingDesign& design, const DynamicsConfig& cfg,
                               std::uint64_t n_inner, Rng& rng) {
    switch (method) {
        case LrMethod::Exact1Sparse:
            if (cfg.s != 1) throw std::invalid_argument("evaluate_lr: exact-1sparse needs s = 1");
            return lr_exact_1sparse(y, design, cfg.n, cfg.p, cfg.mu);
        case LrMethod::ExactP0:
            if (cfg.p != 0.0) throw std::invalid_argument("evaluate_lr: exact-p0 needs p = 0");
            return lr_exact_p0(y, design, cfg.n, cfg.s, cfg.mu);
        case LrMethod::ExactP1:
            if (cfg.p != 1.0) throw std::invalid_argument("evaluate_lr: exact-p1 needs p = 1");
            return lr_exact_p1(y, design, cfg.n, cfg.s, cfg.mu);
        case LrMethod::NestedMc:
            return lr_nested_mc(y, design, cfg, n_inner, rng);
    }
    throw std::logic_error("evaluate_lr: unknown method");
}

BoundCurvePoint tv_bound_estimate(const SensingDesign& design, const DynamicsConfig& cfg,
                                  std::uint64_t n_outer, std::uint64_t n_inner, Rng& rng,
                                  int threads) {
    cfg.validate();
    if (n_outer == 0) throw std::invalid_argument("tv_bound_estimate: n_outer must be positive");
    const LrMethod method = choose_lr_method(cfg);
    const std::uint64_t base = rng.next_u64();

    std::vector<double> absdev(n_outer, 0.0);
    if (cfg.mu == 0.0) {
        // L is identically 1 under every method; skip the simulations.
        BoundCurvePoint pt;
        pt.p = cfg.p;
        pt.mu = 0.0;
        pt.raw_bound = 0.5;
        pt.bound = 0.5;
        pt.se = 0.0;
        pt.n_outer = n_outer;
        pt.n_inner = n_inner;
        pt.method = method;
        return pt;
    }
    parallel_for(0, n_outer, threads, [&](std::uint64_t i) {
        Rng ro(derive_seed(base, {role_tag(StreamRole::Outer), i}));
        std::vector<double> y(design.size());
        for (double& v : y) v = ro.normal();
        const LikelihoodEstimate est = evaluate_lr(method, y, design, cfg, n_inner, ro);
        absdev[i] = std::fabs(est.value - 1.0);
    });

    double sum = 0.0;
    for (double v : absdev) sum += v;
    const double mean = sum / static_cast<double>(n_outer);
    double sq = 0.0;
    for (double v : absdev) sq += (v - mean) * (v - mean);
    const double sd = n_outer > 1 ? std::sqrt(sq / static_cast<double>(n_outer - 1)) : 0.0;

    BoundCurvePoint pt;
    pt.p = cfg.p;
    pt.mu = cfg.mu;
    pt.raw_bound = 0.5 * (1.0 - 0.5 * mean);
    pt.bound = std::clamp(pt.raw_bound, 0.0, 0.5);
    pt.se = 0.25 * sd / std::sqrt(static_cast<double>(n_outer));
    pt.n_outer = n_outer;
    pt.n_inner = n_inner;
    pt.method = method;
    return pt;
}

const char* to_string(Panel p) { return p == Panel::Left ? "left" : "right"; }

std::uint64_t figure3_m(Panel panel, std::uint64_t n, std::uint64_t s, double epsilon) {
    if (panel == Panel::Right) return n;
    const double c_eps = std::log(1.0 / epsilon);
    return static_cast<std::uint64_t>(
        std::ceil(c_eps * static_cast<double>(n) / static_cast<double>(s)));
}

double figure3_mu(double t, std::uint64_t n, std::uint64_t s, std::uint64_t m, double epsilon,
                  MuVariant variant) {
    const double c_eps = std::log(1.0 / epsilon);
    const double core = 2.0 * c_eps * static_cast<double>(n) /
                        (static_cast<double>(s) * static_cast<double>(m)) *
                        std::log(static_cast<double>(n) / static_cast<double>(s));
    const double scale = (variant == MuVariant::Caption) ? 2.0 : 1.0;
    return t * std::sqrt(scale * core);
}

std::vector<BoundCurvePoint> figure3_sweep(const SweepConfig& cfg) {
    if (cfg.p_list.empty() || cfg.t_grid.empty()) {
        throw std::invalid_argument("figure3_sweep: empty p_list or t_grid");
    }
    const std::uint64_t m = figure3_m(cfg.panel, cfg.n, cfg.s, cfg.epsilon);
    Rng design_rng(derive_seed(cfg.seed, {role_tag(StreamRole::Design)}));
    const SensingDesign design = make_subsample_design(cfg.n, cfg.s, m, cfg.epsilon, design_rng,
                                                       cfg.panel == Panel::Right);

    std::vector<BoundCurvePoint> points;
    points.reserve(cfg.p_list.size() * cfg.t_grid.size());
    for (std::size_t pi = 0; pi < cfg.p_list.size(); ++pi) {
        for (std::size_t ti = 0; ti < cfg.t_grid.size(); ++ti) {
            const double t = cfg.t_grid[ti];
            DynamicsConfig dyn;
            dyn.n = cfg.n;
            dyn.s = cfg.s;
            dyn.p = cfg.p_list[pi];
            dyn.mu = figure3_mu(t, cfg.n, cfg.s, m, cfg.epsilon, cfg.mu_variant);
            Rng point_rng(derive_seed(cfg.seed, {role_tag(StreamRole::Outer), pi, ti}));
            BoundCurvePoint pt =
                tv_bound_estimate(design, dyn, cfg.n_outer, cfg.n_inner, point_rng, cfg.threads);
            pt.t_scale = t;
            points.push_back(pt);
        }
    }
    return points;
}

void write_sweep_csv(const std::vector<BoundCurvePoint>& points, Panel panel, std::uint64_t seed,
                     std::ostream& out) {
    out << "panel,p,t,mu,bound,bound_se,raw_bound,n_outer,n_inner,method,seed\n";
    char buf[64];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const BoundCurvePoint& pt : points) {
        out << to_string(panel) << ',' << fmt(pt.p) << ',' << fmt(pt.t_scale) << ',' << fmt(pt.mu)
            << ',' << fmt(pt.bound) << ',' << fmt(pt.se) << ',' << fmt(pt.raw_bound) << ','
            << pt.n_outer << ',' << pt.n_inner << ',' << to_string(pt.method) << ',' << seed
            << '\n';
    }
}

} // namespace dynadetect
