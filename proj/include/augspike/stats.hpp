#pragma once

// Small descriptive and inferential helpers for run aggregation.

#include <span>

namespace augspike::stats {

double Mean(std::span<const double> x);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double StdDev(std::span<const double> x);
// Infinite entries sort last, so a median over censored values may be inf.
double Median(std::span<const double> x);

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

// One-sample t-test of mean(x) == 0. A zero-variance sample gives p = 1 when
// its mean is 0 and p = 0 otherwise.
TTest OneSampleT(std::span<const double> x);
// Paired test of mean(a - b) == 0.
TTest PairedT(std::span<const double> a, std::span<const double> b);

}  // namespace augspike::stats
