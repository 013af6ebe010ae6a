#include "augspike/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "augspike/errors.hpp"

namespace augspike::stats {

double Mean(std::span<const double> x) {
  if (x.empty()) return std::nan("");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double StdDev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = Mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

double Median(std::span<const double> x) {
  if (x.empty()) return std::nan("");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  const double a = v[n / 2 - 1], b = v[n / 2];
  if (std::isinf(a) || std::isinf(b)) return std::max(a, b);
  return 0.5 * (a + b);
}

TTest OneSampleT(std::span<const double> x) {
  if (x.size() < 2) throw InputError("t-test needs at least two samples");
  TTest r;
  r.df = static_cast<double>(x.size() - 1);
  const double m = Mean(x);
  const double se = StdDev(x) / std::sqrt(static_cast<double>(x.size()));
  if (se == 0.0) {
    r.t = m == 0.0 ? 0.0 : std::copysign(INFINITY, m);
    r.p = m == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.t = m / se;
  const boost::math::students_t dist(r.df);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

TTest PairedT(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("paired samples differ in size");
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return OneSampleT(d);
}

}  // namespace augspike::stats
