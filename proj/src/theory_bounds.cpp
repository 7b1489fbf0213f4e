#include "dynadetect/theory_bounds.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "dynadetect/stats.hpp"

namespace dynadetect {

double default_c_const() { return 6.0 + 3.0 * std::log(2.0); }

namespace {

double resolved_c(const BoundInputs& inp) {
    return inp.c_const > 0.0 ? inp.c_const : default_c_const();
}

void require(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}

} // namespace

double mu_upper_thm1(const BoundInputs& inp) {
    require(inp.s >= 1 && inp.s < inp.n, "mu_upper_thm1: need 1 <= s < n");
    require(inp.epsilon > 0.0 && inp.epsilon < 1.0 / 3.0, "mu_upper_thm1: need eps in (0, 1/3)");
    require(inp.tau > 0.0, "mu_upper_thm1: need tau > 0");
    require(inp.p >= 0.0 && inp.p <= 1.0, "mu_upper_thm1: need p in [0,1]");
    const double ratio_log = std::log(static_cast<double>(inp.n) / static_cast<double>(inp.s));
    const double rate = std::max(2.0 * inp.p, 1.0 / ratio_log);
    return inp.tau * std::sqrt(2.0 * rate * ratio_log) + std::sqrt(2.0 * std::log(4.0 / inp.epsilon));
}

double mu_lower_na_p0(const BoundInputs& inp, Theorem2Variant variant) {
    const double n = static_cast<double>(inp.n);
    const double s = static_cast<double>(inp.s);
    const double m = static_cast<double>(inp.m);
    require(inp.s >= 1 && s <= n / 2.0, "mu_lower_na_p0: need s <= n/2");
    require(n / s <= m, "mu_lower_na_p0: need n/s <= m");
    require(inp.epsilon > 0.0 && inp.epsilon <= 1.0 / (2.0 * std::exp(1.0)),
            "mu_lower_na_p0: need eps <= 1/(2e)");

    const double base = (variant == Theorem2Variant::TheoremLiteral)
                            ? std::exp(-1.0)  // 1/e, as printed
                            : 1.5;            // 3/2, per the proof's final display
    const double inner0 = base - 4.0 * inp.epsilon;
    require(inner0 > 0.0, "mu_lower_na_p0: log argument (constant - 4 eps) is non-positive");
    const double arg = 2.0 * n / (s * s) * std::log(inner0) + 1.0;
    require(arg > 0.0, "mu_lower_na_p0: outer log argument is non-positive");
    const double radicand = n / (2.0 * m * s) * std::log(arg);
    require(radicand >= 0.0, "mu_lower_na_p0: negative radicand (outer log argument below 1)");
    return std::sqrt(radicand);
}

double mu_lower_na_p1(const BoundInputs& inp) {
    const double n = static_cast<double>(inp.n);
    const double s = static_cast<double>(inp.s);
    const double m = static_cast<double>(inp.m);
    require(inp.s >= 1 && inp.s <= inp.n, "mu_lower_na_p1: need 1 <= s <= n");
    require(inp.m >= 1, "mu_lower_na_p1: need m >= 1");
    require(inp.epsilon > 0.0 && inp.epsilon < 0.5, "mu_lower_na_p1: need eps < 1/2");
    const double inner = 4.0 * (1.0 - 2.0 * inp.epsilon) * (1.0 - 2.0 * inp.epsilon) + 1.0;
    return std::sqrt(std::log(n * n / (s * s * m) * std::log(inner) + 1.0));
}

double mu_lower_as_generic(const BoundInputs& inp) {
    const double n = static_cast<double>(inp.n);
    const double s = static_cast<double>(inp.s);
    const double m = static_cast<double>(inp.m);
    require(inp.s >= 1 && inp.s <= inp.n, "mu_lower_as_generic: need 1 <= s <= n");
    require(inp.m >= 1, "mu_lower_as_generic: need m >= 1");
    require(inp.epsilon > 0.0 && inp.epsilon < 0.25, "mu_lower_as_generic: need eps < 1/4");
    return std::sqrt(2.0 * n / (s * m) * std::log(1.0 / (4.0 * inp.epsilon)));
}

double mu_lower_as_1sparse(const BoundInputs& inp) {
    const double n = static_cast<double>(inp.n);
    const double m = static_cast<double>(inp.m);
    const double c = resolved_c(inp);
    require(inp.m >= 1, "mu_lower_as_1sparse: need m >= 1");
    require(inp.p >= 8.0 / m, "mu_lower_as_1sparse: need p >= 8/m");
    require(inp.p <= 1.0, "mu_lower_as_1sparse: need p <= 1");
    const double sq = 1.25 - 4.0 * inp.epsilon;
    const double inner = sq * sq + 0.5;
    require(inner > 1.0, "mu_lower_as_1sparse: need (5/4 - 4 eps)^2 + 1/2 > 1");
    const double arg = std::log(inner) * (inp.p * inp.p * n * n) / (4.0 * c * c * m) + 1.0;
    return std::sqrt(inp.p / (2.0 * c) * std::log(arg));
}

MissProbability miss_probability_bound(std::uint64_t n, std::uint64_t s, std::uint64_t m) {
    if (n == 0) throw std::invalid_argument("miss_probability_bound: n must be positive");
    if (s > n) throw std::invalid_argument("miss_probability_bound: s exceeds n");
    if (m > n - s) throw std::invalid_argument("miss_probability_bound: need m <= n - s");
    if (s > 0 && static_cast<double>(m) > static_cast<double>(n) / static_cast<double>(s)) {
        throw std::invalid_argument("miss_probability_bound: need m <= n/s");
    }
    MissProbability res;
    res.exact = 1.0;
    for (std::uint64_t i = 0; i < m; ++i) {
        res.exact *= static_cast<double>(n - s - i) / static_cast<double>(n - i);
    }
    if (s == 0) {
        res.lower_bound = 0.0; // the closed form needs s >= 1; exact = 1 still holds
        return res;
    }
    const double base = 1.0 - 2.0 * static_cast<double>(s) / static_cast<double>(n);
    res.lower_bound = std::pow(std::max(base, 0.0), static_cast<double>(n) / static_cast<double>(s));
    assert(res.exact >= res.lower_bound);
    return res;
}

BlockDecomposition sample_block_decomposition(std::uint64_t m, double p, Rng& rng) {
    if (m == 0) throw std::invalid_argument("sample_block_decomposition: m must be positive");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("sample_block_decomposition: p must lie in [0,1]");
    }
    BlockDecomposition dec;
    std::uint64_t prev = 0;
    for (std::uint64_t t = 1; t < m; ++t) {
        if (rng.bernoulli(p)) {
            dec.change_times.push_back(t);
            dec.lengths.push_back(t - prev);
            prev = t;
        }
    }
    dec.change_times.push_back(m); // final coin forced to 1
    dec.lengths.push_back(m - prev);
    dec.count = dec.change_times.size();
    return dec;
}

ProbEstimate lemma2_mc_check(std::uint64_t m, double p, double c_const, std::uint64_t trials,
                             Rng& rng) {
    if (trials == 0) throw std::invalid_argument("lemma2_mc_check: trials must be positive");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("lemma2_mc_check: need p in (0,1]");
    const double cap = 2.0 * c_const / p;
    std::uint64_t good = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const BlockDecomposition dec = sample_block_decomposition(m, p, rng);
        bool ok = true;
        for (std::uint64_t l : dec.lengths) {
            if (static_cast<double>(l) > cap) {
                ok = false;
                break;
            }
        }
        if (ok) ++good;
    }
    ProbEstimate est;
    est.value = static_cast<double>(good) / static_cast<double>(trials);
    est.se = binomial_se(est.value, trials);
    return est;
}

} // namespace dynadetect
