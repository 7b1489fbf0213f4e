#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dynadetect/nonadaptive.hpp"
#include "dynadetect/signal_model.hpp"

namespace dynadetect {

enum class LrMethod { Exact1Sparse, ExactP0, ExactP1, NestedMc };

const char* to_string(LrMethod m);

// Likelihood ratio L(y) of a non-adaptive observation vector, or its
// Monte Carlo estimate. Exact methods report se = 0.
struct LikelihoodEstimate {
    double value = 0.0;
    double se = 0.0;
    LrMethod method = LrMethod::NestedMc;
};

// Exact marginal likelihood ratio for the 1-sparse chain: the active
// location stays with probability 1-p and otherwise jumps uniformly to one
// of the other n-1 locations; the emission weight at step t is
// exp(mu y_t - mu^2/2) when the state equals the probed index, else 1.
// Forward recursion tracks only previously probed locations plus one
// lumped mass for the exchangeable remainder.
LikelihoodEstimate lr_exact_1sparse(std::span<const double> y, const SensingDesign& design,
                                    std::uint64_t n, double p, double mu);

// Exact likelihood ratio for p = 1 (support resampled every step):
// prod_t [ (s/n) exp(mu y_t - mu^2/2) + 1 - s/n ].
LikelihoodEstimate lr_exact_p1(std::span<const double> y, const SensingDesign& design,
                               std::uint64_t n, std::uint64_t s, double mu);

// Exact likelihood ratio for p = 0 (static support): the static support
// meets the probed components in an exchangeable way, so L reduces to a
// hypergeometric mixture over the overlap size of elementary symmetric
// polynomials in the per-component aggregated emission weights.
// O(m + B*s) with B the number of distinct probed components.
LikelihoodEstimate lr_exact_p0(std::span<const double> y, const SensingDesign& design,
                               std::uint64_t n, std::uint64_t s, double mu);

// Unbiased nested Monte Carlo estimate: average over n_inner simulated
// support trajectories of exp( sum_t 1{A_t in S^(t)} (mu y_t - mu^2/2) ),
// with the sample standard error of the mean. Inner trajectory streams are
// derived from (the passed stream, inner index).
LikelihoodEstimate lr_nested_mc(std::span<const double> y, const SensingDesign& design,
                                const DynamicsConfig& cfg, std::uint64_t n_inner, Rng& rng);

// Exact method when one applies (p = 0, p = 1 or s = 1), nested MC otherwise.
LrMethod choose_lr_method(const DynamicsConfig& cfg);

LikelihoodEstimate evaluate_lr(LrMethod method, std::span<const double> y,
                               const SensingDesign& design, const DynamicsConfig& cfg,
                               std::uint64_t n_inner, Rng& rng);

// One point of the total-variation risk lower-bound curve:
// bound = clip( (1/2)(1 - (1/2) avg|L-1|), [0, 1/2] ), with the pre-clip
// value retained and the standard error taken across outer samples.
struct BoundCurvePoint {
    double p = 0.0;
    double t_scale = 0.0;
    double mu = 0.0;
    double bound = 0.0;
    double se = 0.0;
    double raw_bound = 0.0;
    std::uint64_t n_outer = 0;
    std::uint64_t n_inner = 0;
    LrMethod method = LrMethod::NestedMc;
};

// Draws n_outer observation vectors under the null (pure noise), evaluates
// L on each and averages |L-1|. Outer samples own derived streams and run
// in parallel; results are independent of the thread count.
BoundCurvePoint tv_bound_estimate(const SensingDesign& design, const DynamicsConfig& cfg,
                                  std::uint64_t n_outer, std::uint64_t n_inner, Rng& rng,
                                  int threads = 1);

enum class Panel { Left, Right };
enum class MuVariant { Caption, Text };

const char* to_string(Panel p);

// Budget of the sweep design: ceil(c(eps) n / s) for the left panel
// (one probe per selected component), n for the right panel (block design).
std::uint64_t figure3_m(Panel panel, std::uint64_t n, std::uint64_t s, double epsilon);

// Signal strength on the sweep grid. The two variants differ by a factor
// sqrt(2); Caption: t * sqrt( 2 (2 c(eps) n / (s m)) log(n/s) ),
// Text: t * sqrt( (2 c(eps) n / (s m)) log(n/s) ).
double figure3_mu(double t, std::uint64_t n, std::uint64_t s, std::uint64_t m, double epsilon,
                  MuVariant variant);

struct SweepConfig {
    Panel panel = Panel::Left;
    std::uint64_t n = 5000;
    std::uint64_t s = 9;
    double epsilon = 0.05;
    std::vector<double> p_list{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> t_grid;
    std::uint64_t n_outer = 100;
    std::uint64_t n_inner = 2000;
    MuVariant mu_variant = MuVariant::Caption;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Lower-bound curves over (p, t): one sub-sampling design per sweep, one
// tv_bound_estimate per grid point. Points are ordered by (p, t).
std::vector<BoundCurvePoint> figure3_sweep(const SweepConfig& cfg);

// CSV columns: panel,p,t,mu,bound,bound_se,raw_bound,n_outer,n_inner,method,seed.
void write_sweep_csv(const std::vector<BoundCurvePoint>& points, Panel panel, std::uint64_t seed,
                     std::ostream& out);

} // namespace dynadetect
