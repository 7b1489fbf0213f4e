#pragma once

#include <cstdint>

namespace dynadetect {

// Standard normal CDF / survival function / quantile.
double normal_cdf(double x);
double normal_sf(double x);

// Inverse standard normal CDF (Wichura's PPND16), p in (0,1).
// Accurate to ~1e-15 relative over the full range.
double normal_quantile(double p);

// Standard error of a binomial proportion estimate.
double binomial_se(double phat, std::uint64_t trials);

} // namespace dynadetect
