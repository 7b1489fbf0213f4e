#include "dynadetect/nonadaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dynadetect/stats.hpp"

namespace dynadetect {

namespace {

void shuffle_indices(std::vector<Index>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace

SensingDesign make_subsample_design(std::uint64_t n, std::uint64_t s, std::uint64_t m,
                                    double epsilon, Rng& rng, bool blocks) {
    if (n == 0 || s == 0 || s > n) throw std::invalid_argument("make_subsample_design: need 1 <= s <= n");
    if (m == 0) throw std::invalid_argument("make_subsample_design: m must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("make_subsample_design: epsilon must lie in (0,1)");
    }

    SensingDesign design;
    if (!blocks) {
        if (m > n) throw std::invalid_argument("make_subsample_design: one-each design needs m <= n");
        design.kind = DesignKind::OneEachSubsample;
        design.probes = sample_distinct(n, m, rng);
        shuffle_indices(design.probes, rng);
        return design;
    }

    const double c_eps = std::log(1.0 / epsilon);
    const std::uint64_t B = static_cast<std::uint64_t>(
        std::ceil(c_eps * static_cast<double>(n) / static_cast<double>(s)));
    if (B > n) throw std::invalid_argument("make_subsample_design: B = ceil(c(eps) n/s) exceeds n");
    if (m < B) throw std::invalid_argument("make_subsample_design: block design needs m >= B");
    const std::uint64_t r = m / B;

    std::vector<Index> components = sample_distinct(n, B, rng);
    shuffle_indices(components, rng);
    design.kind = DesignKind::BlockSubsample;
    design.block_count = B;
    design.block_len = r;
    design.probes.reserve(B * r);
    for (Index c : components) {
        for (std::uint64_t i = 0; i < r; ++i) design.probes.push_back(c);
    }
    return design;
}

SensingDesign make_uniform_iid_design(std::uint64_t n, std::uint64_t m, Rng& rng) {
    if (n == 0) throw std::invalid_argument("make_uniform_iid_design: n must be positive");
    if (m == 0) throw std::invalid_argument("make_uniform_iid_design: m must be positive");
    SensingDesign design;
    design.kind = DesignKind::UniformIid;
    design.probes.reserve(m);
    for (std::uint64_t t = 0; t < m; ++t) design.probes.push_back(rng.uniform_below(n) + 1);
    return design;
}

void write_design_csv(const SensingDesign& design, std::ostream& out) {
    out << "t,a\n";
    for (std::size_t t = 0; t < design.probes.size(); ++t) {
        out << (t + 1) << ',' << design.probes[t] << '\n';
    }
}

std::string test_result_to_json(const TestResult& r) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"statistic\":" << r.statistic << ",\"threshold\":" << r.threshold
       << ",\"decision\":" << r.decision << "}";
    return os.str();
}

TestResult global_sum_test(std::span<const double> y, double epsilon) {
    if (y.empty()) throw std::invalid_argument("global_sum_test: empty observation sequence");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("global_sum_test: epsilon must lie in (0,1)");
    }
    double sum = 0.0;
    for (double v : y) sum += v;
    TestResult res;
    res.statistic = sum / std::sqrt(static_cast<double>(y.size()));
    res.threshold = normal_quantile(1.0 - epsilon);
    res.decision = (res.statistic > res.threshold) ? 1 : 0;
    return res;
}

TestResult subsample_max_test(const std::vector<std::vector<double>>& groups, std::uint64_t n,
                              std::uint64_t s, std::uint64_t m, double epsilon,
                              bool literal_threshold) {
    if (groups.empty()) throw std::invalid_argument("subsample_max_test: no groups");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("subsample_max_test: epsilon must lie in (0,1)");
    }
    const std::size_t r = groups.front().size();
    if (r == 0) throw std::invalid_argument("subsample_max_test: empty group");
    for (const auto& g : groups) {
        if (g.size() != r) throw std::invalid_argument("subsample_max_test: ragged groups");
    }
    const double B = static_cast<double>(groups.size());

    double max_mean = -std::numeric_limits<double>::infinity();
    for (const auto& g : groups) {
        double sum = 0.0;
        for (double v : g) sum += v;
        max_mean = std::max(max_mean, sum / static_cast<double>(r));
    }

    TestResult res;
    res.statistic = max_mean;
    if (literal_threshold) {
        res.threshold = std::sqrt(static_cast<double>(n) / (static_cast<double>(s) * static_cast<double>(m)) *
                                  std::log(static_cast<double>(n) / static_cast<double>(s)));
    } else {
        res.threshold =
            std::sqrt(2.0 * (std::log(B) + std::log(1.0 / epsilon)) / static_cast<double>(r));
    }
    res.decision = (res.statistic > res.threshold) ? 1 : 0;
    return res;
}

} // namespace dynadetect
