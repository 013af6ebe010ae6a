#include "membrane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace augspike::detail {
namespace {

constexpr double kRootTolerance = 1e-15;  // seconds
constexpr int kMaxRootIterations = 200;

// V(x) = a*exp(-x/tau_m) - b*exp(-x/tau_s) on one inter-event segment.
struct Segment {
  double a;
  double b;
  double inv_m;
  double inv_s;

  double Value(double x) const {
    return a * std::exp(-x * inv_m) - b * std::exp(-x * inv_s);
  }
  double Slope(double x) const {
    return -a * inv_m * std::exp(-x * inv_m) + b * inv_s * std::exp(-x * inv_s);
  }
  // The unique stationary point, or NaN when V is monotone on (0, inf).
  double Critical() const {
    if (a == 0.0 || b == 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double ratio = (b * inv_s) / (a * inv_m);
    if (!(ratio > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(ratio) / (inv_s - inv_m);
    return x > 0.0 ? x : std::numeric_limits<double>::quiet_NaN();
  }
};

// Root of V(x) = theta on [lo, hi] where V is increasing and
// V(lo) < theta <= V(hi). Safeguarded Newton.
double IncreasingRoot(const Segment& seg, double theta, double lo, double hi) {
  double x = hi;
  for (int it = 0; it < kMaxRootIterations; ++it) {
    const double f = seg.Value(x) - theta;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double df = seg.Slope(x);
    double next = df > 0.0 ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= kRootTolerance || hi - lo <= kRootTolerance) {
      return next;
    }
    x = next;
  }
  return hi;
}

}  // namespace

std::vector<Event> BuildEvents(const SpikePattern& pattern,
                               std::span<const double> weights) {
  std::vector<Event> events;
  events.reserve(pattern.size());
  for (const auto& s : pattern.spikes()) {
    const double amp = weights[s.afferent] * s.coefficient;
    if (amp != 0.0) events.push_back({s.time, amp});
  }
  return events;
}

ScanResult Scan(std::span<const Event> events, double window, double theta,
                bool reset, std::size_t stop_after,
                const NeuronConfig& config) {
  ScanResult out;
  const double inv_m = 1.0 / config.tau_m();
  const double inv_s = 1.0 / config.tau_s();
  const double v0 = config.v0();
  // Integral tau_m / tau_s (every standard parameter set) lets the fast decay
  // be a power of the slow one.
  const double ratio = config.tau_m() / config.tau_s();
  const int power = std::abs(ratio - std::round(ratio)) < 1e-12 && ratio <= 8.0
                        ? static_cast<int>(std::round(ratio))
                        : 0;
  auto fast_decay = [&](double slow, double len) {
    if (power == 0) return std::exp(-len * inv_s);
    double f = slow;
    for (int k = 1; k < power; ++k) f *= slow;
    return f;
  };

  double t0 = 0.0;
  double am = 0.0;  // sum amp*exp(-(t0 - t_i)/tau_m)
  double as = 0.0;  // sum amp*exp(-(t0 - t_i)/tau_s)
  double r = 0.0;   // sum exp(-(t0 - t_s)/tau_m)
  bool detect = true;
  std::size_t i = 0;
  const std::size_t n = events.size();

  auto consider = [&out](double v, double t) {
    if (v > out.v_max) {
      out.v_max = v;
      out.t_max = t;
    }
  };

  for (;;) {
    const double t1 = i < n ? events[i].time : window;
    double dm = 1.0, ds = 1.0;
    for (;;) {
      const double reset_term = r == 0.0 ? 0.0 : theta * r;
      const Segment seg{v0 * am - reset_term, v0 * as, inv_m, inv_s};
      const double len = std::max(t1 - t0, 0.0);
      dm = std::exp(-len * inv_m);
      ds = fast_decay(dm, len);
      const double v_start = seg.a - seg.b;
      const double v_end = seg.a * dm - seg.b * ds;
      const double s_start = -seg.a * inv_m + seg.b * inv_s;
      const double s_end = -seg.a * inv_m * dm + seg.b * inv_s * ds;

      // A sign change of the slope marks the single interior extremum.
      double xc = -1.0, vc = 0.0;
      if ((s_start > 0.0 && s_end < 0.0) || (s_start < 0.0 && s_end > 0.0)) {
        xc = seg.Critical();
        if (xc > 0.0 && xc < len) {
          vc = seg.Value(xc);
        } else {
          xc = -1.0;
        }
      }
      const bool peak = xc > 0.0 && s_start > 0.0;

      std::optional<double> x;
      if (detect && len > 0.0) {
        if (xc > 0.0) {
          if (v_start < theta && vc >= theta) {
            x = IncreasingRoot(seg, theta, 0.0, xc);
          } else if (vc < theta && v_end >= theta) {
            x = IncreasingRoot(seg, theta, xc, len);
          }
        } else if (v_start < theta && v_end >= theta) {
          x = IncreasingRoot(seg, theta, 0.0, len);
        }
      }

      if (!x) {
        if (peak) {
          consider(vc, t0 + xc);
          out.sub_peak = std::max(out.sub_peak, vc);
        }
        consider(v_end, t0 + len);
        if (i >= n) out.sub_peak = std::max(out.sub_peak, v_end);
        break;
      }
      if (peak && xc < *x) consider(vc, t0 + xc);
      consider(seg.Value(*x), t0 + *x);

      out.crossings.push_back(t0 + *x);
      const double em = std::exp(-*x * inv_m);
      am *= em;
      as *= std::exp(-*x * inv_s);
      r *= em;
      t0 += *x;
      if (reset) {
        r += 1.0;
        if (stop_after > 0 && out.crossings.size() >= stop_after) return out;
      } else {
        detect = false;
      }
    }
    if (i >= n) break;

    am *= dm;
    as *= ds;
    r *= dm;
    t0 = t1;
    while (i < n && events[i].time == t1) {
      am += events[i].amplitude;
      as += events[i].amplitude;
      ++i;
    }
  }
  return out;
}

}  // namespace augspike::detail
