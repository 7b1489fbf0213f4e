#pragma once

// Independent reference computations used by the unit and acceptance
// suites. These deliberately avoid the library's own evaluation paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include "dynadetect/signal_model.hpp"

namespace testutil {

// Sum over all n^m location paths of the 1-sparse chain (stay with
// probability 1-p, jump uniformly to one of the other n-1 locations),
// weighting each path by its emission factors. Exponential in m; for tiny
// instances only.
inline double brute_force_lr_1sparse(const std::vector<double>& y,
                                     const std::vector<dynadetect::Index>& probes,
                                     std::uint64_t n, double p, double mu) {
    const std::size_t m = y.size();
    std::vector<double> g(m);
    for (std::size_t t = 0; t < m; ++t) g[t] = std::exp(mu * y[t] - 0.5 * mu * mu);

    double total = 0.0;
    std::vector<dynadetect::Index> path(m, 1);
    for (;;) {
        double prob = 1.0 / static_cast<double>(n);
        double weight = (path[0] == probes[0]) ? g[0] : 1.0;
        for (std::size_t t = 1; t < m; ++t) {
            prob *= (path[t] == path[t - 1]) ? (1.0 - p) : p / static_cast<double>(n - 1);
            if (path[t] == probes[t]) weight *= g[t];
        }
        total += prob * weight;
        std::size_t pos = 0;
        while (pos < m && path[pos] == n) {
            path[pos] = 1;
            ++pos;
        }
        if (pos == m) break;
        ++path[pos];
    }
    return total;
}

} // namespace testutil
