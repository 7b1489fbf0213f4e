#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "dynadetect/rng.hpp"

namespace dynadetect {

// Component indices are 1-based: valid probes lie in [1, n].
using Index = std::uint64_t;

// Problem parameters of the signal law: ambient dimension n, sparsity s,
// per-component resample rate p, amplitude mu.
struct DynamicsConfig {
    std::uint64_t n = 0;
    std::uint64_t s = 0;
    double p = 0.0;
    double mu = 0.0;

    void validate() const {
        if (n == 0) throw std::invalid_argument("DynamicsConfig: n must be positive");
        if (s == 0 || s > n) throw std::invalid_argument("DynamicsConfig: need 1 <= s <= n");
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("DynamicsConfig: p must lie in [0,1]");
        if (!(mu >= 0.0)) throw std::invalid_argument("DynamicsConfig: mu must be non-negative");
    }
};

// Active support at a given time step. `active` is sorted and distinct;
// the sparsity |active| is conserved by the dynamics.
struct SupportState {
    std::vector<Index> active;
    std::uint64_t t = 1;

    bool contains(Index i) const;
};

struct SupportTrajectory {
    std::vector<SupportState> states;
    // Per transition: the components of states[k] that left the support
    // (their resample coin came up 1 and a fresh location was drawn).
    std::vector<std::vector<Index>> resampled;
};

struct MeasurementRecord {
    std::uint64_t t = 0;
    Index a = 0;
    double y = 0.0;
};

class BudgetExhausted : public std::runtime_error {
public:
    explicit BudgetExhausted(std::uint64_t budget)
        : std::runtime_error("measurement budget exhausted (m = " + std::to_string(budget) + ")") {}
};

// k distinct values drawn uniformly from {1, ..., n}; returned sorted.
std::vector<Index> sample_distinct(std::uint64_t n, std::uint64_t k, Rng& rng);

// k distinct values drawn uniformly from {1, ..., n} minus `excluded`
// (which must be sorted); returned sorted.
std::vector<Index> sample_distinct_excluding(std::uint64_t n, std::uint64_t k,
                                             const std::vector<Index>& excluded, Rng& rng);

// Uniformly random s-subset of [n] at time t = 1.
SupportState init_support(const DynamicsConfig& cfg, Rng& rng);

// One step of the support dynamics: each active component is resampled
// independently with probability p; retained components stay; resampled
// ones are replaced by fresh locations drawn uniformly from outside the
// old support, so the new support is uniform over s-subsets whose
// intersection with the old support is exactly the retained set.
SupportState evolve_support(const SupportState& state, const DynamicsConfig& cfg, Rng& rng);

// Allocation-free variant for hot simulation loops: mutates `active` in
// place, reusing scratch buffers. Consumes exactly the same draw sequence
// as evolve_support, so the two produce identical trajectories from
// identical streams.
class SupportEvolver {
public:
    void step(std::vector<Index>& active, const DynamicsConfig& cfg, Rng& rng);

private:
    std::vector<Index> retained_;
    std::vector<Index> flagged_;
    std::vector<Index> fresh_;
    std::vector<Index> merged_;
};

// Noisy coordinate-wise measurement: mu * 1{a in support} + N(0,1).
double observe(const SupportState& state, Index a, const DynamicsConfig& cfg, Rng& rng);

SupportTrajectory simulate_trajectory(const DynamicsConfig& cfg, std::uint64_t steps, Rng& rng);

// CSV columns: t, active_indices (semicolon-separated), resampled_count.
void write_trajectory_csv(const SupportTrajectory& traj, std::ostream& out);

enum class Hypothesis { Null, Alternative };

// Stateful measurement oracle over one world realization. Time advances by
// exactly one step per measure() call and (under the alternative) the
// support evolves between consecutive calls. Under the null the support is
// the empty set, so mu never enters the sampling path.
//
// Noise and support dynamics consume separate derived streams; with mu = 0
// the null and alternative worlds therefore produce identical observations
// for identical seeds.
class WorldOracle {
public:
    WorldOracle(const DynamicsConfig& cfg, Hypothesis hyp, std::uint64_t budget, std::uint64_t seed);

    double measure(Index a);

    std::uint64_t budget() const { return budget_; }
    std::uint64_t used() const { return used_; }
    std::uint64_t remaining() const { return budget_ - used_; }
    Hypothesis hypothesis() const { return hyp_; }
    const std::vector<MeasurementRecord>& records() const { return records_; }
    const SupportState& support() const { return state_; }

private:
    DynamicsConfig cfg_;
    Hypothesis hyp_;
    std::uint64_t budget_;
    std::uint64_t used_ = 0;
    SupportState state_;
    Rng noise_;
    Rng dynamics_;
    SupportEvolver evolver_;
    std::vector<MeasurementRecord> records_;
};

} // namespace dynadetect
