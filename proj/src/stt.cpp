#include "dynadetect/stt.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dynadetect {

double c_factor(double x) {
    if (!(x > 0.0) || x >= std::exp(-1.0)) {
        throw std::domain_error("c_factor: x must lie in (0, 1/e)");
    }
    const double l = std::log(1.0 / x);
    return 2.0 * (1.0 + std::log(l) / l);
}

SttSchedule make_schedule(std::uint64_t T, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("make_schedule: epsilon must lie in (0,1)");
    }
    if (T < 6) throw std::invalid_argument("make_schedule: need T >= 6 so that k >= 1");
    const double x = 2.0 * epsilon / static_cast<double>(T);
    if (!(x < std::exp(-1.0))) {
        throw std::invalid_argument("make_schedule: need 2*epsilon/T < 1/e");
    }
    SttSchedule sched;
    sched.T = T;
    sched.epsilon = epsilon;
    sched.k = static_cast<std::uint64_t>(std::floor(std::log(static_cast<double>(T) / 2.0)));
    if (sched.k < 1) throw std::invalid_argument("make_schedule: parameters give k < 1");
    sched.c_val = c_factor(x);
    const double log_term = std::log(2.0 * static_cast<double>(T) / epsilon);
    sched.thresholds.reserve(sched.k);
    for (std::uint64_t j = 1; j <= sched.k; ++j) {
        sched.thresholds.push_back(std::sqrt(sched.c_val / static_cast<double>(j) * log_term));
    }
    return sched;
}

std::string schedule_to_json(const SttSchedule& sched) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"T\":" << sched.T << ",\"epsilon\":" << sched.epsilon << ",\"k\":" << sched.k
       << ",\"c_val\":" << sched.c_val << ",\"thresholds\":[";
    for (std::size_t i = 0; i < sched.thresholds.size(); ++i) {
        if (i > 0) os << ',';
        os << sched.thresholds[i];
    }
    os << "]}";
    return os.str();
}

const char* to_string(SttVerdict v) {
    switch (v) {
        case SttVerdict::Signal: return "Signal";
        case SttVerdict::NoSignal: return "NoSignal";
        case SttVerdict::BudgetTruncated: return "BudgetTruncated";
    }
    return "?";
}

} // namespace dynadetect
