#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "augspike/experiments.hpp"
#include "augspike/kernels.hpp"
#include "augspike/stats.hpp"
#include "experiments_internal.hpp"

namespace augspike::experiments {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t PatternCount(double alpha, std::size_t n) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n))));
}

CapacityPoint EvaluatePoint(const CapacityConfig& config, LatencyMode mode,
                            int q, std::size_t alpha_index, double alpha) {
  CapacityPoint pt;
  pt.alpha = alpha;
  pt.patterns = PatternCount(alpha, config.n_afferents);
  std::vector<double> times;
  std::size_t censored = 0;
  const std::uint64_t point_seed = DeriveSeed(
      DeriveSeed(DeriveSeed(config.seed, mode == LatencyMode::kRandom ? 0 : 1),
                 static_cast<std::uint64_t>(q)),
      alpha_index);
  const std::size_t chunk = std::max<std::size_t>(1, config.chunk);
  for (std::size_t begin = 0; begin < config.runs; begin += chunk) {
    const std::size_t n = std::min(chunk, config.runs - begin);
    std::vector<std::optional<std::size_t>> out(n);
    ParallelFor(n, [&](std::size_t k) {
      out[k] = CapacityRun(config, mode, q, alpha,
                           DeriveSeed(point_seed, begin + k));
    });
    for (const auto& o : out) {
      times.push_back(detail::CyclesOrInf(o));
      if (o) ++pt.converged; else ++censored;
    }
    // The median is already censored once more than half of all runs are.
    if (2 * censored > config.runs) break;
  }
  pt.evaluated = times.size();
  // Early exit happens only once the median is known to be censored.
  pt.median_cycles = 2 * censored > config.runs ? kInf : stats::Median(times);
  return pt;
}

// Crossing of the median learning time through cap, linear in log learning
// time between the bracketing grid points. A censored median is treated as
// the measurement ceiling, so the estimate is an upper bound in that case.
std::optional<double> Crossing(const std::vector<CapacityPoint>& pts,
                               double cap, double ceiling) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].median_cycles <= cap) continue;
    if (i == 0) return 0.0;
    const double m0 = std::max(pts[i - 1].median_cycles, 1.0);
    const double m1 = std::min(pts[i].median_cycles, ceiling);
    const double a0 = pts[i - 1].alpha;
    const double a1 = pts[i].alpha;
    if (!(m1 > m0)) return a1;
    const double f = (std::log(cap) - std::log(m0)) / (std::log(m1) - std::log(m0));
    return a0 + std::clamp(f, 0.0, 1.0) * (a1 - a0);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> CapacityRun(const CapacityConfig& config,
                                       LatencyMode mode, int q, double alpha,
                                       std::uint64_t seed) {
  Rng rng(seed);
  const auto scheme = CoefficientScheme::QLevels(q);
  const std::size_t p = PatternCount(alpha, config.n_afferents);
  std::vector<SpikePattern> data;
  data.reserve(p);
  std::bernoulli_distribution coin(0.5);
  if (mode == LatencyMode::kRandom) {
    for (std::size_t k = 0; k < p; ++k) {
      data.push_back(LatencyPattern(config.n_afferents, config.window, scheme, rng));
    }
  } else {
    const auto base = LatencyPattern(config.n_afferents, config.window, scheme, rng);
    for (std::size_t k = 0; k < p; ++k) {
      data.push_back(RefreshCoefficients(base, scheme, rng));
    }
  }
  for (auto& d : data) d.set_label(coin(rng) ? 1 : 0);
  const auto w0 = detail::InitialWeights(config.n_afferents, config.learn, rng);

  auto learner = detail::MakeLearner(LearningRule::kAugTmp, config.learn);
  learner.max_epochs = config.measure_cycles;
  const auto result = Train(data, w0, learner, config.neuron.Build(), seed);
  return result.history.converged_cycle;
}

CapacityResult RunCapacity(const CapacityConfig& config) {
  if (config.runs == 0) throw ParameterError("capacity needs runs > 0");
  if (config.measure_cycles < config.cap) {
    throw ParameterError("capacity measure_cycles must be >= cap");
  }
  CapacityResult res;
  for (const auto mode : config.modes) {
    const auto& grid =
        mode == LatencyMode::kRandom ? config.alphas_random : config.alphas_fixed;
    for (const int q : config.q_values) {
      CapacityCurve curve;
      curve.mode = mode;
      curve.q = q;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        curve.points.push_back(EvaluatePoint(config, mode, q, i, grid[i]));
        const bool crossed =
            curve.points.back().median_cycles > static_cast<double>(config.cap);
        // A crossing at the first load (capacity 0) is followed to the end of
        // the grid so that non-convergence is checked at every load.
        if (crossed && config.stop_at_crossing &&
            !(curve.points.front().median_cycles > static_cast<double>(config.cap))) {
          break;
        }
      }
      curve.alpha_c = Crossing(curve.points, static_cast<double>(config.cap),
                               static_cast<double>(config.measure_cycles));
      res.curves.push_back(std::move(curve));
    }
  }

  auto& rep = res.report;
  rep.experiment = "capacity";
  Table points{"capacity_curve",
               {"mode", "q", "alpha", "patterns", "evaluated", "converged",
                "median_cycles"},
               {}};
  Table summary{"alpha_c", {"mode", "q", "alpha_c"}, {}};
  for (const auto& c : res.curves) {
    for (const auto& p : c.points) {
      points.Add(std::string(ToString(c.mode)), c.q, p.alpha, p.patterns,
                 p.evaluated, p.converged, p.median_cycles);
    }
    summary.Add(std::string(ToString(c.mode)), c.q,
                c.alpha_c ? *c.alpha_c : kInf);
    rep.Set("alpha_c_" + std::string(ToString(c.mode)) + "_q" +
                std::to_string(c.q),
            c.alpha_c ? *c.alpha_c : kInf);
  }
  rep.tables = {points, summary};
  rep.Set("runs", config.runs);
  rep.Set("seed", std::to_string(config.seed));
  rep.Set("n_afferents", config.n_afferents);
  rep.Set("cap_cycles", config.cap);
  rep.Set("measure_cycles", config.measure_cycles);
  return res;
}

}  // namespace augspike::experiments
