#pragma once

#include <span>
#include <vector>

namespace longnet {

double mean(std::span<const double> values);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> values);
/// Type-7 sample quantile (linear interpolation), q in [0, 1]. NaN when empty.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

}  // namespace longnet
