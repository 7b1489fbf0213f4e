#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "dynadetect/signal_model.hpp"

namespace dynadetect {

// c(x) = 2 (1 + log log(1/x) / log(1/x)), natural logs. Domain (0, 1/e):
// decreases toward 2 as x -> 0 and never exceeds 2(1 + 1/e).
double c_factor(double x);

// Threshold ladder of the sequential thresholding test: k = floor(log(T/2)),
// t_j = sqrt(c(2 eps / T) / j * log(2T / eps)). Thresholds are strictly
// decreasing with t_j * sqrt(j) constant; t_k doubles as the lower stopping
// floor.
struct SttSchedule {
    std::uint64_t T = 0;
    double epsilon = 0.0;
    std::uint64_t k = 0;
    double c_val = 0.0;
    std::vector<double> thresholds; // t_1 > t_2 > ... > t_k > 0

    double floor_threshold() const { return thresholds.back(); }
};

SttSchedule make_schedule(std::uint64_t T, double epsilon);

// JSON dump with fields T, epsilon, k, c_val, thresholds[].
std::string schedule_to_json(const SttSchedule& sched);

enum class SttVerdict { Signal, NoSignal, BudgetTruncated };

const char* to_string(SttVerdict v);

struct SttRunRecord {
    Index q = 0; // probed component, filled by the caller
    std::uint64_t n_obs = 0;
    SttVerdict verdict = SttVerdict::NoSignal;
    std::vector<double> running_means;
};

// One sequential thresholding test against `source`, a callable returning
// the next observation for a fixed component. Consumes at most
// min(k, budget_left) observations. The lower check (running mean <= t_k,
// declare NoSignal) is applied before the upper check (mean > t_j, declare
// Signal) at every step. Exhausting the budget mid-test yields
// BudgetTruncated with n_obs = budget_left; completing k steps without a
// break is vacuous but pinned to NoSignal.
template <class Source>
SttRunRecord run_stt(const SttSchedule& sched, Source&& source, std::uint64_t budget_left) {
    if (budget_left == 0) throw std::invalid_argument("run_stt: budget_left must be positive");
    SttRunRecord rec;
    const double floor_t = sched.floor_threshold();
    const std::uint64_t cap = std::min<std::uint64_t>(sched.k, budget_left);
    rec.running_means.reserve(cap);
    double sum = 0.0;
    for (std::uint64_t j = 1; j <= cap; ++j) {
        sum += source();
        const double mean = sum / static_cast<double>(j);
        rec.running_means.push_back(mean);
        rec.n_obs = j;
        if (mean <= floor_t) {
            rec.verdict = SttVerdict::NoSignal;
            return rec;
        }
        if (mean > sched.thresholds[j - 1]) {
            rec.verdict = SttVerdict::Signal;
            return rec;
        }
    }
    rec.n_obs = cap;
    rec.verdict = (cap < sched.k) ? SttVerdict::BudgetTruncated : SttVerdict::NoSignal;
    return rec;
}

} // namespace dynadetect
