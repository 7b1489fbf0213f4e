#pragma once

#include <cstdint>
#include <vector>

#include "dynadetect/rng.hpp"

namespace dynadetect {

// Constant of the 1-sparse adaptive lower bound: 6 + 3 log 2.
double default_c_const();

struct BoundInputs {
    std::uint64_t n = 0;
    std::uint64_t s = 0;
    std::uint64_t m = 0;
    double p = 0.0;
    double epsilon = 0.0;
    double tau = 1.0;
    double c_const = 0.0; // 0 means "use default_c_const()"
};

// Sufficient signal strength for the adaptive detector:
// tau * sqrt(2 max{2p, 1/log(n/s)} log(n/s)) + sqrt(2 log(4/eps)).
double mu_upper_thm1(const BoundInputs& inp);

// The printed statement of the static-signal non-adaptive bound contains
// log(1/e - 4 eps), which is negative for every admissible eps, so the
// literal form always signals a domain error. The proof's closing display
// uses log(3/2 - 4 eps) instead; both variants are exposed and neither is
// silently corrected.
enum class Theorem2Variant { TheoremLiteral, ProofFinal };

// Non-adaptive lower bound, p = 0:
// sqrt( n/(2ms) * log( (2n/s^2) * log(<variant constant> - 4 eps) + 1 ) ).
double mu_lower_na_p0(const BoundInputs& inp, Theorem2Variant variant);

// Non-adaptive lower bound, p = 1:
// sqrt( log( n^2/(s^2 m) * log(4 (1-2 eps)^2 + 1) + 1 ) ).
double mu_lower_na_p1(const BoundInputs& inp);

// Adaptive lower bound, any p and s: sqrt( 2n/(sm) * log(1/(4 eps)) ).
double mu_lower_as_generic(const BoundInputs& inp);

// Adaptive lower bound, s = 1 and p >= 8/m:
// sqrt( p/(2c) * log( log((5/4 - 4 eps)^2 + 1/2) * p^2 n^2 / (4 c^2 m) + 1 ) ).
double mu_lower_as_1sparse(const BoundInputs& inp);

struct MissProbability {
    double exact = 0.0;       // hypergeometric no-hit probability
    double lower_bound = 0.0; // (1 - 2s/n)^(n/s)
};

// Probability that m probes of a noiseless static world never touch the
// support, together with its closed-form lower bound. The exact value
// always dominates the bound (asserted).
MissProbability miss_probability_bound(std::uint64_t n, std::uint64_t s, std::uint64_t m);

// Change-point structure of a 1-sparse trajectory over horizon m: times
// tau_1 < ... < tau_N = m where the resample coin came up 1 (the final coin
// is forced), and interval lengths l_j summing to m. N-1 ~ Bin(m-1, p).
struct BlockDecomposition {
    std::vector<std::uint64_t> change_times;
    std::vector<std::uint64_t> lengths;
    std::uint64_t count = 0; // N
};

BlockDecomposition sample_block_decomposition(std::uint64_t m, double p, Rng& rng);

struct ProbEstimate {
    double value = 0.0;
    double se = 0.0;
};

// Monte Carlo estimate of P(all block lengths <= 2c/p).
ProbEstimate lemma2_mc_check(std::uint64_t m, double p, double c_const, std::uint64_t trials,
                             Rng& rng);

} // namespace dynadetect
