#include "dynadetect/detector.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dynadetect {

std::uint64_t detector_T(std::uint64_t n, std::uint64_t s, double epsilon) {
    if (s == 0 || s > n) throw std::invalid_argument("detector_T: need 1 <= s <= n");
    if (!(epsilon > 0.0 && epsilon < 1.0 / 3.0)) {
        throw std::invalid_argument("detector_T: epsilon must lie in (0, 1/3)");
    }
    const double value =
        9.0 * static_cast<double>(n) / (2.0 * static_cast<double>(s)) * std::log2(3.0 / epsilon);
    return static_cast<std::uint64_t>(std::ceil(value));
}

DetectorConfig DetectorConfig::presets(std::uint64_t n, std::uint64_t s, double epsilon) {
    DetectorConfig cfg;
    cfg.T = detector_T(n, s, epsilon);
    cfg.m = 2 * cfg.T;
    cfg.epsilon = epsilon;
    cfg.schedule = make_schedule(cfg.T, epsilon);
    return cfg;
}

void DetectorConfig::validate() const {
    if (T == 0) throw std::invalid_argument("DetectorConfig: T must be positive");
    if (m == 0) throw std::invalid_argument("DetectorConfig: m must be positive");
    if (schedule.k == 0 || schedule.T != T) {
        throw std::invalid_argument("DetectorConfig: schedule does not match T");
    }
}

std::string verdict_to_json(const Verdict& v) {
    std::ostringstream os;
    os << "{\"psi\":" << v.psi << ",\"measurements_used\":" << v.measurements_used << ",\"runs\":[";
    for (std::size_t i = 0; i < v.runs.size(); ++i) {
        const SttRunRecord& r = v.runs[i];
        if (i > 0) os << ',';
        os << "{\"q\":" << r.q << ",\"n_obs\":" << r.n_obs << ",\"verdict\":\""
           << to_string(r.verdict) << "\"}";
    }
    os << "]}";
    return os.str();
}

Verdict detect(const DetectorConfig& cfg, std::uint64_t n, WorldOracle& world, Rng& queries) {
    cfg.validate();
    if (world.budget() != cfg.m) {
        throw std::invalid_argument("detect: world budget must equal cfg.m");
    }
    Verdict verdict;
    for (std::uint64_t j = 0; j < cfg.T; ++j) {
        if (verdict.measurements_used >= cfg.m) break; // psi stays 0
        const Index q = queries.uniform_below(n) + 1;
        SttRunRecord rec =
            run_stt(cfg.schedule, [&] { return world.measure(q); }, cfg.m - verdict.measurements_used);
        rec.q = q;
        verdict.measurements_used += rec.n_obs;
        const SttVerdict sv = rec.verdict;
        verdict.runs.push_back(std::move(rec));
        if (sv == SttVerdict::Signal) {
            verdict.psi = 1;
            break;
        }
        if (sv == SttVerdict::BudgetTruncated) break; // psi stays 0
    }
    return verdict;
}

} // namespace dynadetect
