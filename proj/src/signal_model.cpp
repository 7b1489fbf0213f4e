#include "dynadetect/signal_model.hpp"

#include <algorithm>
#include <ostream>

namespace dynadetect {

bool SupportState::contains(Index i) const {
    return std::binary_search(active.begin(), active.end(), i);
}

std::vector<Index> sample_distinct(std::uint64_t n, std::uint64_t k, Rng& rng) {
    if (k > n) throw std::invalid_argument("sample_distinct: k exceeds n");
    // Floyd's algorithm: one draw per selected element, no rejection.
    std::vector<Index> out;
    out.reserve(k);
    for (std::uint64_t j = n - k + 1; j <= n; ++j) {
        const Index r = rng.uniform_below(j) + 1;
        auto it = std::lower_bound(out.begin(), out.end(), r);
        if (it != out.end() && *it == r) {
            it = std::lower_bound(out.begin(), out.end(), j);
            out.insert(it, j);
        } else {
            out.insert(it, r);
        }
    }
    return out;
}

std::vector<Index> sample_distinct_excluding(std::uint64_t n, std::uint64_t k,
                                             const std::vector<Index>& excluded, Rng& rng) {
    const std::uint64_t avail = n - excluded.size();
    if (k > avail) throw std::invalid_argument("sample_distinct_excluding: not enough free indices");
    std::vector<Index> raw = sample_distinct(avail, k, rng);
    // Order-preserving map from rank space {1..n-|excluded|} onto the
    // complement of the excluded set.
    for (Index& v : raw) {
        for (Index e : excluded) {
            if (e <= v) ++v; else break;
        }
    }
    return raw;
}

SupportState init_support(const DynamicsConfig& cfg, Rng& rng) {
    cfg.validate();
    return SupportState{sample_distinct(cfg.n, cfg.s, rng), 1};
}

SupportState evolve_support(const SupportState& state, const DynamicsConfig& cfg, Rng& rng) {
    SupportState next{state.active, state.t + 1};
    SupportEvolver evolver;
    evolver.step(next.active, cfg, rng);
    return next;
}

void SupportEvolver::step(std::vector<Index>& active, const DynamicsConfig& cfg, Rng& rng) {
    cfg.validate();
    if (active.size() != cfg.s) {
        throw std::invalid_argument("evolve_support: |active| != s");
    }

    retained_.clear();
    flagged_.clear();
    for (Index i : active) {
        (rng.bernoulli(cfg.p) ? flagged_ : retained_).push_back(i);
    }
    if (flagged_.empty()) return;

    const std::uint64_t avail = cfg.n - cfg.s;
    if (flagged_.size() > avail) {
        // Not enough free locations to move every flagged component (only
        // possible when s > n/2, outside the sparse regime). A uniformly
        // chosen subset of the flagged components stays put so that the
        // move is feasible and |support| = s is conserved.
        const std::uint64_t keep = flagged_.size() - avail;
        std::vector<Index> keep_pos = sample_distinct(flagged_.size(), keep, rng);
        std::vector<Index> still_moving;
        std::uint64_t pos = 1;
        auto next_keep = keep_pos.begin();
        for (Index i : flagged_) {
            if (next_keep != keep_pos.end() && *next_keep == pos) {
                retained_.push_back(i);
                ++next_keep;
            } else {
                still_moving.push_back(i);
            }
            ++pos;
        }
        std::sort(retained_.begin(), retained_.end());
        flagged_ = std::move(still_moving);
    }

    // Floyd over the rank space of the complement, as in sample_distinct,
    // then an order-preserving remap around the old support.
    const std::uint64_t k = flagged_.size();
    fresh_.clear();
    for (std::uint64_t j = avail - k + 1; j <= avail; ++j) {
        const Index r = rng.uniform_below(j) + 1;
        auto it = std::lower_bound(fresh_.begin(), fresh_.end(), r);
        if (it != fresh_.end() && *it == r) {
            it = std::lower_bound(fresh_.begin(), fresh_.end(), j);
            fresh_.insert(it, j);
        } else {
            fresh_.insert(it, r);
        }
    }
    for (Index& v : fresh_) {
        for (Index e : active) {
            if (e <= v) ++v; else break;
        }
    }

    merged_.clear();
    std::merge(retained_.begin(), retained_.end(), fresh_.begin(), fresh_.end(),
               std::back_inserter(merged_));
    active.swap(merged_);
}

double observe(const SupportState& state, Index a, const DynamicsConfig& cfg, Rng& rng) {
    if (a < 1 || a > cfg.n) throw std::out_of_range("observe: index outside [1, n]");
    const double mean = state.contains(a) ? cfg.mu : 0.0;
    return mean + rng.normal();
}

SupportTrajectory simulate_trajectory(const DynamicsConfig& cfg, std::uint64_t steps, Rng& rng) {
    if (steps == 0) throw std::invalid_argument("simulate_trajectory: steps must be positive");
    SupportTrajectory traj;
    traj.states.reserve(steps);
    traj.states.push_back(init_support(cfg, rng));
    for (std::uint64_t k = 1; k < steps; ++k) {
        const SupportState& prev = traj.states.back();
        SupportState next = evolve_support(prev, cfg, rng);
        std::vector<Index> moved;
        for (Index i : prev.active) {
            if (!next.contains(i)) moved.push_back(i);
        }
        traj.resampled.push_back(std::move(moved));
        traj.states.push_back(std::move(next));
    }
    return traj;
}

void write_trajectory_csv(const SupportTrajectory& traj, std::ostream& out) {
    out << "t,active_indices,resampled_count\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const SupportState& st = traj.states[k];
        out << st.t << ",";
        for (std::size_t i = 0; i < st.active.size(); ++i) {
            if (i > 0) out << ';';
            out << st.active[i];
        }
        const std::size_t moved = (k < traj.resampled.size()) ? traj.resampled[k].size() : 0;
        out << ',' << moved << '\n';
    }
}

WorldOracle::WorldOracle(const DynamicsConfig& cfg, Hypothesis hyp, std::uint64_t budget,
                         std::uint64_t seed)
    : cfg_(cfg),
      hyp_(hyp),
      budget_(budget),
      noise_(derive_seed(seed, {role_tag(StreamRole::Noise)})),
      dynamics_(derive_seed(seed, {role_tag(StreamRole::Dynamics)})) {
    cfg_.validate();
    if (budget_ == 0) throw std::invalid_argument("WorldOracle: budget must be positive");
    records_.reserve(std::min<std::uint64_t>(budget_, 1u << 16));
    if (hyp_ == Hypothesis::Alternative) {
        state_ = init_support(cfg_, dynamics_);
    }
}

double WorldOracle::measure(Index a) {
    if (a < 1 || a > cfg_.n) throw std::out_of_range("measure: index outside [1, n]");
    if (used_ == budget_) throw BudgetExhausted(budget_);
    ++used_;
    double y;
    if (hyp_ == Hypothesis::Null) {
        y = noise_.normal();
    } else {
        y = observe(state_, a, cfg_, noise_);
        evolver_.step(state_.active, cfg_, dynamics_);
        ++state_.t;
    }
    records_.push_back(MeasurementRecord{used_, a, y});
    return y;
}

} // namespace dynadetect
