#include "augspike/sts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "membrane.hpp"

namespace augspike {
namespace {

// Spikes of two thresholds that straddle theta* agree up to numerical noise
// before the critical one; anything further apart marks the divergence.
constexpr double kSameSpike = 1e-6;  // seconds

std::vector<double> CreditVector(const SpikePattern& pattern, double t,
                                 const NeuronConfig& config, bool blind) {
  std::vector<double> g(pattern.n_afferents(), 0.0);
  for (const auto& s : pattern.spikes()) {
    if (s.time >= t) break;
    g[s.afferent] += (blind ? 1.0 : s.coefficient) * PspKernel(t - s.time, config);
  }
  return g;
}

}  // namespace

std::size_t CountSpikes(const SpikePattern& pattern,
                        std::span<const double> weights, double theta,
                        const NeuronConfig& config, std::size_t cap) {
  CheckWeights(pattern, weights);
  const auto events = detail::BuildEvents(pattern, weights);
  return detail::Scan(events, pattern.window(), theta, true, cap, config)
      .crossings.size();
}

CriticalThreshold ComputeSts(const SpikePattern& pattern,
                             std::span<const double> weights, std::size_t k,
                             const NeuronConfig& config,
                             const StsOptions& options) {
  if (k == 0) throw ParameterError("critical threshold index k must be >= 1");
  CheckWeights(pattern, weights);
  const auto events = detail::BuildEvents(pattern, weights);
  const double window = pattern.window();
  auto crossings = [&](double theta) {
    return detail::Scan(events, window, theta, true, k, config).crossings;
  };

  // Peak of U bounds every composed trace from above.
  const double u_max =
      detail::Scan(events, window, std::numeric_limits<double>::infinity(),
                   false, 0, config)
          .v_max;
  if (!(u_max > 0.0)) {
    throw NoSuchCritical("input potential never rises above zero");
  }

  // Bracket [lo, hi]: lo yields >= k spikes, hi fewer. A scan that yields
  // k - 1 spikes also gives its highest sub-threshold peak, where a lower
  // threshold adds the next crossing. Secant steps on the gap between the two
  // give candidates, each probed just below and just above; a bisection step
  // follows whenever the bracket fails to shrink.
  // Above u_max by more than the probe offset, so that theta* = u_max for
  // k = 1 is found by one candidate step.
  const double above_u = u_max * (1.0 + std::max(0.5 * options.relative_tolerance, 1e-15)) +
                         std::numeric_limits<double>::min();
  double hi = above_u;
  if (options.fires_fewer && *options.fires_fewer > 0.0) {
    hi = std::min(hi, *options.fires_fewer);
  }
  double lo = 0.0;
  // g(theta) = (highest sub-threshold peak) - theta at the last two
  // upper-side scans that produced exactly k - 1 spikes.
  double g_theta[2] = {0.0, 0.0}, g_value[2] = {0.0, 0.0};
  int g_count = 0;
  // Candidates from the latest upper-side scan: its sub-threshold peak, and
  // the secant root through the last two such scans.
  double peak = std::numeric_limits<double>::quiet_NaN();
  double secant = std::numeric_limits<double>::quiet_NaN();
  auto probe = [&](double theta) {
    const auto r = detail::Scan(events, window, theta, true, k, config);
    if (r.crossings.size() >= k) {
      lo = theta;
      return true;
    }
    hi = theta;
    if (r.crossings.size() + 1 != k) {
      peak = secant = std::numeric_limits<double>::quiet_NaN();
      g_count = 0;
      return false;
    }
    g_theta[0] = g_theta[1];
    g_value[0] = g_value[1];
    g_theta[1] = theta;
    g_value[1] = r.sub_peak - theta;
    g_count = std::min(g_count + 1, 2);
    const double slope = (g_value[1] - g_value[0]) / (g_theta[1] - g_theta[0]);
    peak = r.sub_peak;
    secant = g_count == 2 && slope != 0.0 ? theta - g_value[1] / slope
                                          : std::numeric_limits<double>::quiet_NaN();
    return false;
  };
  if (options.fires_fewer && hi == *options.fires_fewer) {
    if (probe(hi)) {
      // A wrong hint still bounds theta* from below.
      hi = above_u;
    }
  } else if (k == 1) {
    peak = u_max;  // peak of the reset-free trace
  }
  if (options.fires_at_least && *options.fires_at_least > lo &&
      *options.fires_at_least < hi) {
    lo = *options.fires_at_least;
  }
  for (double theta = 0.5 * hi; !(lo > 0.0); theta *= 0.5) {
    if (theta < u_max * 1e-12) {
      throw NoSuchCritical("no positive threshold yields " + std::to_string(k) +
                           " output spikes");
    }
    probe(theta);
  }

  double last_width = 2.0 * (hi - lo);
  for (int it = 0; it < options.max_iterations; ++it) {
    const double width = hi - lo;
    if (width <= options.relative_tolerance * hi) break;
    const double nudge = 0.25 * options.relative_tolerance * hi;
    auto inside = [&](double c) { return c > lo + nudge && c < hi - nudge; };
    double c = std::numeric_limits<double>::quiet_NaN();
    if (width < 0.75 * last_width) {
      if (inside(secant)) {
        c = secant;
      } else if (inside(peak)) {
        c = peak;
      }
    }
    last_width = width;
    if (!std::isnan(c)) {
      peak = secant = std::numeric_limits<double>::quiet_NaN();
      if (probe(c - nudge) && c + nudge < hi) probe(c + nudge);
      continue;
    }
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    probe(mid);
  }

  CriticalThreshold crit;
  crit.k = k;
  crit.lower = lo;
  crit.upper = hi;
  crit.theta_star = 0.5 * (lo + hi);

  const auto below = crossings(lo);
  const auto above = crossings(hi);
  std::size_t j = 0;
  while (j + 1 < below.size() && j < above.size() &&
         std::abs(below[j] - above[j]) <= kSameSpike) {
    ++j;
  }
  crit.preceding_spikes.assign(below.begin(), below.begin() + j);
  crit.t_star = FirstPeakAfter(pattern, weights, below[j],
                               crit.preceding_spikes, lo, config);
  return crit;
}

std::vector<double> StsGradient(const SpikePattern& pattern,
                                std::span<const double> weights,
                                const CriticalThreshold& crit,
                                const NeuronConfig& config, GradientForm form,
                                bool coefficient_blind) {
  CheckWeights(pattern, weights);
  const std::size_t n = pattern.n_afferents();
  const double theta = crit.theta_star;
  const double inv_m = 1.0 / config.tau_m();
  const auto& ts = crit.preceding_spikes;
  const std::size_t m = ts.size();

  std::vector<double> grad =
      CreditVector(pattern, crit.t_star, config, coefficient_blind);
  if (m == 0) return grad;

  // dV(t*)/dt_s^j
  std::vector<double> a_star(m);
  double s_star = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double e = std::exp(-(crit.t_star - ts[j]) * inv_m);
    a_star[j] = -theta * inv_m * e;
    s_star += e;
  }

  std::vector<double> slopes(m);
  std::vector<std::vector<double>> credit(m);
  for (std::size_t j = 0; j < m; ++j) {
    slopes[j] = Vdot(pattern, weights, ts[j],
                     std::span<const double>(ts.data(), j), theta, config);
    if (std::abs(slopes[j]) < kGrazingSlope) {
      throw DegenerateCrossing("output spike crosses threshold tangentially");
    }
    credit[j] = CreditVector(pattern, ts[j], config, coefficient_blind);
  }

  if (form == GradientForm::kFirstOrder) {
    for (std::size_t j = 0; j < m; ++j) {
      const double f = a_star[j] / slopes[j];
      for (std::size_t i = 0; i < n; ++i) grad[i] -= f * credit[j][i];
    }
    return grad;
  }

  // Forward substitution for dt_s^j = p_j + q_j * dtheta.
  std::vector<std::vector<double>> p(m, std::vector<double>(n, 0.0));
  std::vector<double> q(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double s_j = 0.0;
    std::vector<double>& pj = p[j];
    for (std::size_t i = 0; i < n; ++i) pj[i] = -credit[j][i];
    double qj = 0.0;
    for (std::size_t l = 0; l < j; ++l) {
      const double e = std::exp(-(ts[j] - ts[l]) * inv_m);
      s_j += e;
      const double a_jl = -theta * inv_m * e;
      for (std::size_t i = 0; i < n; ++i) pj[i] -= a_jl * p[l][i];
      qj -= a_jl * q[l];
    }
    qj += 1.0 + s_j;
    for (std::size_t i = 0; i < n; ++i) pj[i] /= slopes[j];
    q[j] = qj / slopes[j];
  }

  double denom = 1.0 + s_star;
  for (std::size_t j = 0; j < m; ++j) denom -= a_star[j] * q[j];
  for (std::size_t i = 0; i < n; ++i) {
    double num = grad[i];
    for (std::size_t j = 0; j < m; ++j) num += a_star[j] * p[j][i];
    grad[i] = num / denom;
  }
  return grad;
}

}  // namespace augspike
