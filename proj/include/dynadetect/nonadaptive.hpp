#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dynadetect/signal_model.hpp"

namespace dynadetect {

enum class DesignKind { OneEachSubsample, BlockSubsample, UniformIid, Custom };

// A non-adaptive probe sequence: built from (parameters, seed) before any
// observation exists, never from data.
struct SensingDesign {
    std::vector<Index> probes;
    DesignKind kind = DesignKind::Custom;
    std::uint64_t block_count = 0; // B, BlockSubsample only
    std::uint64_t block_len = 0;   // r = probes per block, BlockSubsample only

    std::size_t size() const { return probes.size(); }
};

// blocks = false: m distinct uniformly chosen components, one probe each,
// in random order (requires m <= n).
// blocks = true: B = ceil(c(eps) n / s) distinct components with
// c(eps) = log(1/eps), each probed floor(m/B) consecutive times, group
// after group; leftover probes (at most B-1) are discarded.
SensingDesign make_subsample_design(std::uint64_t n, std::uint64_t s, std::uint64_t m,
                                    double epsilon, Rng& rng, bool blocks);

// m probes drawn i.i.d. uniform on [n], with replacement.
SensingDesign make_uniform_iid_design(std::uint64_t n, std::uint64_t m, Rng& rng);

// CSV columns: t, a.
void write_design_csv(const SensingDesign& design, std::ostream& out);

struct TestResult {
    double statistic = 0.0;
    double threshold = 0.0;
    int decision = 0;
};

// JSON dump: {statistic, threshold, decision}.
std::string test_result_to_json(const TestResult& r);

// Standardized global sum: rejects iff sum(y) / sqrt(m) exceeds the
// (1 - epsilon) standard normal quantile.
TestResult global_sum_test(std::span<const double> y, double epsilon);

// Sub-sampling max test over equal-size groups of consecutive probes of a
// single component each. Declares a signal iff some group mean exceeds the
// threshold.
//
// The default threshold sqrt(2 (log B + log(1/eps)) / r) is calibrated so
// that B * Phi_bar(theta * sqrt(r)) <= eps under the null. The flag selects
// the literal threshold sqrt(n/(s m) * log(n/s)) instead, whose constant is
// not calibrated to any particular error level.
TestResult subsample_max_test(const std::vector<std::vector<double>>& groups, std::uint64_t n,
                              std::uint64_t s, std::uint64_t m, double epsilon,
                              bool literal_threshold = false);

} // namespace dynadetect
