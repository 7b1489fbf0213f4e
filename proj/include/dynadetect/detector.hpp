#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynadetect/stt.hpp"

namespace dynadetect {

// Number of queries T = ceil( (9n / 2s) * log2(3 / epsilon) ).
std::uint64_t detector_T(std::uint64_t n, std::uint64_t s, double epsilon);

// Detector parameters. Deliberately contains neither p nor mu: the test is
// agnostic about the speed of change and the signal strength.
struct DetectorConfig {
    std::uint64_t T = 0;
    std::uint64_t m = 0;
    double epsilon = 0.0;
    SttSchedule schedule;

    // T from detector_T, m = 2T (the smallest licensed budget) and the
    // matching threshold schedule.
    static DetectorConfig presets(std::uint64_t n, std::uint64_t s, double epsilon);

    void validate() const;
};

struct Verdict {
    int psi = 0;
    std::uint64_t measurements_used = 0;
    std::vector<SttRunRecord> runs;
};

// JSON dump: {psi, measurements_used, runs:[{q, n_obs, verdict}]}.
std::string verdict_to_json(const Verdict& v);

// Queries Q_1, ..., Q_T i.i.d. uniform on [n] (with replacement), one
// sequential thresholding test per query. Stops with psi = 1 at the first
// Signal verdict; psi = 0 after T clean tests or once the measurement
// budget runs out (a truncated test counts as NoSignal and ends the loop).
Verdict detect(const DetectorConfig& cfg, std::uint64_t n, WorldOracle& world, Rng& queries);

} // namespace dynadetect
