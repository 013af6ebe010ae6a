#include "augspike/spike_core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "augspike/pattern_io.hpp"
#include "augspike/reference.hpp"
#include "test_util.hpp"

namespace augspike {
namespace {

using testing::BruteU;
using testing::RandomPattern;
using testing::RandomWeights;

SpikePattern Single(double t0, double c, std::size_t n = 1,
                    std::size_t afferent = 0, double window = 0.5) {
  return SpikePattern(n, window, {{afferent, t0, c}});
}

// Kernel maximum by scanning a 1 us grid over [0, 100 ms].
double GridPeak(double tau_m_ms, double tau_s_ms, double* at = nullptr) {
  double best = -1.0, best_t = 0.0;
  for (int k = 0; k <= 100000; ++k) {
    const double t = k * 1e-3;  // ms
    const double v = std::exp(-t / tau_m_ms) - std::exp(-t / tau_s_ms);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  if (at) *at = best_t;
  return best;
}

TEST(ComputeV0, MatchesGridMaximizedKernel) {
  double t_grid = 0.0;
  const double peak = GridPeak(20.0, 5.0, &t_grid);
  EXPECT_NEAR(KernelPeakTime(20.0, 5.0), 9.2420, 1e-4);
  EXPECT_NEAR(KernelPeakTime(20.0, 5.0), t_grid, 1e-3);
  // Closed form: 1 / (exp(-ln4/3) - exp(-4 ln4/3)) = 2.11653...
  EXPECT_NEAR(ComputeV0(20.0, 5.0), 2.11653, 1e-5);
  EXPECT_NEAR(ComputeV0(20.0, 5.0), 1.0 / peak, 1e-8);
}

TEST(ComputeV0, EqualsFourForTenAndFive) {
  // t_peak = 10 ln 2, exp(-ln 2) - exp(-2 ln 2) = 1/4.
  EXPECT_NEAR(ComputeV0(10.0, 5.0), 4.0, 1e-12);
  EXPECT_NEAR(KernelPeakTime(10.0, 5.0), 10.0 * std::log(2.0), 1e-12);
}

TEST(ComputeV0, RejectsInvalidTimeConstants) {
  EXPECT_THROW(ComputeV0(5.0, 5.0), ParameterError);
  EXPECT_THROW(ComputeV0(5.0, 10.0), ParameterError);
  EXPECT_THROW(ComputeV0(10.0, 0.0), ParameterError);
  EXPECT_THROW(NeuronConfig(5.0, 10.0), ParameterError);
  EXPECT_THROW(NeuronConfig(20.0, 5.0, 0.0), ParameterError);
}

TEST(PspKernel, CausalAndPeakNormalized) {
  const NeuronConfig cfg(20.0, 5.0);
  EXPECT_EQ(PspKernel(0.0, cfg), 0.0);
  EXPECT_EQ(PspKernel(-0.005, cfg), 0.0);
  EXPECT_NEAR(PspKernel(cfg.t_peak(), cfg), 1.0, 1e-14);
  for (double tm : {10.0, 15.0, 40.0}) {
    const NeuronConfig c(tm, 2.5);
    EXPECT_NEAR(PspKernel(c.t_peak(), c), 1.0, 1e-13);
  }
}

TEST(SpikePatternTest, SortsAndValidates) {
  SpikePattern p(3, 1.0, {{2, 0.5, 1.0}, {0, 0.5, 1.0}, {1, 0.1, 2.0}});
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p.spikes()[0].afferent, 1u);
  EXPECT_EQ(p.spikes()[1].afferent, 0u);
  EXPECT_EQ(p.spikes()[2].afferent, 2u);
  EXPECT_THROW(SpikePattern(2, 1.0, {{2, 0.5, 1.0}}), InputError);
  EXPECT_THROW(SpikePattern(2, 1.0, {{0, 1.5, 1.0}}), InputError);
  EXPECT_THROW(SpikePattern(2, 1.0, {{0, -0.1, 1.0}}), InputError);
  EXPECT_THROW(SpikePattern(2, 1.0, {{0, 0.5, NAN}}), InputError);
  EXPECT_NO_THROW(SpikePattern(2, 1.0, {{0, 0.5, -2.0}}));
}

TEST(UnresetPotential, EmptySinglePeakAndLinearity) {
  const NeuronConfig cfg(20.0, 5.0);
  const SpikePattern empty(4, 0.5, {});
  const std::vector<double> w{0.3, 0.1, -0.2, 0.4};
  for (double t : {0.0, 0.1, 0.49}) {
    EXPECT_EQ(UnresetPotential(empty, w, t, cfg), 0.0);
  }
  const auto p = Single(0.1, 1.7, 4, 3);
  EXPECT_NEAR(UnresetPotential(p, w, 0.1 + cfg.t_peak(), cfg), 0.4 * 1.7, 1e-14);

  std::mt19937_64 rng(7);
  const auto q = RandomPattern(rng, 4, 0.5, 40);
  std::vector<AugmentedSpike> scaled(q.spikes().begin(), q.spikes().end());
  for (auto& s : scaled) s.coefficient *= 2.5;
  const SpikePattern q2(4, 0.5, scaled);
  for (double t = 0.0; t < 0.5; t += 0.013) {
    EXPECT_NEAR(UnresetPotential(q2, w, t, cfg),
                2.5 * UnresetPotential(q, w, t, cfg), 1e-12);
  }
}

TEST(Simulate, EmptyPatternIsSilent) {
  const NeuronConfig cfg(20.0, 5.0);
  const SpikePattern empty(3, 0.5, {});
  const std::vector<double> w{1.0, 5.0, -2.0};
  for (auto mode : {NeuronMode::kMultiSpike, NeuronMode::kSingleSpikeShunting}) {
    const auto r = Simulate(empty, w, cfg.WithMode(mode));
    EXPECT_TRUE(r.output_times.empty());
    EXPECT_EQ(r.v_max, 0.0);
    EXPECT_EQ(r.t_max, 0.0);
  }
}

TEST(Simulate, SubthresholdSinglePspPeak) {
  const NeuronConfig cfg(20.0, 5.0);
  const auto p = Single(0.1, 0.9);
  const std::vector<double> w{1.0};
  const auto r = Simulate(p, w, cfg);
  EXPECT_TRUE(r.output_times.empty());
  EXPECT_NEAR(r.v_max, 0.9, 1e-12);
  EXPECT_NEAR(r.t_max, 0.1 + cfg.t_peak(), 1e-9);

  // Dense 1 us grid oracle.
  double best = 0.0, best_t = 0.0;
  for (int k = 0; k <= 500000; ++k) {
    const double t = k * 1e-6;
    const double v = BruteU(p, w, t, cfg.tau_m(), cfg.tau_s(), cfg.v0());
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  EXPECT_NEAR(r.v_max, best, 1e-7);
  EXPECT_NEAR(r.t_max, best_t, 1e-6);
}

TEST(Simulate, SuprathresholdSinglePspFiresOnceInBothModes) {
  const NeuronConfig cfg(20.0, 5.0);
  const auto p = Single(0.1, 1.2);
  const std::vector<double> w{1.0};
  const auto f = [&](double t) {
    return BruteU(p, w, t, cfg.tau_m(), cfg.tau_s(), cfg.v0()) - 1.0;
  };
  const double expected = testing::Bisect(f, 0.1, 0.1 + cfg.t_peak());
  for (auto mode : {NeuronMode::kMultiSpike, NeuronMode::kSingleSpikeShunting}) {
    const auto r = Simulate(p, w, cfg.WithMode(mode));
    ASSERT_EQ(r.output_times.size(), 1u);
    EXPECT_NEAR(r.output_times[0], expected, 1e-12);
    const auto grid = reference::SimulateDenseGrid(p, w, cfg.WithMode(mode), 1e-5);
    ASSERT_EQ(grid.output_times.size(), 1u);
    EXPECT_NEAR(grid.output_times[0], expected, 1e-6);
  }
}

TEST(Simulate, ResetTermStartsAtCrossing) {
  const NeuronConfig cfg(20.0, 5.0);
  const auto p = Single(0.1, 1.2);
  const std::vector<double> w{1.0};
  const auto r = Simulate(p, w, cfg);
  ASSERT_EQ(r.output_times.size(), 1u);
  const double ts = r.output_times[0];
  EXPECT_NEAR(ComposedPotential(p, w, ts, r.output_times, 1.0, cfg), 1.0, 1e-9);
  EXPECT_NEAR(ComposedPotential(p, w, ts + 1e-9, r.output_times, 1.0, cfg), 0.0,
              1e-6);
}

TEST(Simulate, ShuntingStopsIntegrationAndReportsUnshuntedPeak) {
  const NeuronConfig cfg(20.0, 5.0, 1.0, NeuronMode::kSingleSpikeShunting);
  const SpikePattern p(2, 0.5, {{0, 0.1, 2.0}, {1, 0.2, 2.0}});
  const std::vector<double> w{1.0, 1.0};
  const auto r = Simulate(p, w, cfg, {.trace_dt = 1e-3});
  ASSERT_EQ(r.output_times.size(), 1u);
  EXPECT_LT(r.output_times[0], 0.1 + cfg.t_peak());
  double best = 0.0;
  for (int k = 0; k <= 500000; ++k) {
    best = std::max(best, BruteU(p, w, k * 1e-6, cfg.tau_m(), cfg.tau_s(), cfg.v0()));
  }
  EXPECT_NEAR(r.v_max, best, 1e-7);  // unshunted peak, past the output spike
  EXPECT_GT(r.t_max, 0.2);
  for (const auto& pt : r.trace) {
    if (pt.time > r.output_times[0]) {
      EXPECT_NEAR(pt.voltage,
                  std::exp(-(pt.time - r.output_times[0]) / cfg.tau_m()), 1e-12);
    }
  }
  const auto multi = Simulate(p, w, cfg.WithMode(NeuronMode::kMultiSpike));
  EXPECT_GT(multi.output_times.size(), 1u);
}

TEST(FindTmax, SuperpositionAndZeroWeights) {
  const NeuronConfig cfg(20.0, 5.0);
  const std::vector<double> w{0.3};
  const auto one = FindTmax(Single(0.1, 1.0), w, cfg);
  EXPECT_NEAR(one.t_max, 0.1 + cfg.t_peak(), 1e-9);
  const SpikePattern two(1, 0.5, {{0, 0.1, 1.0}, {0, 0.104, 1.0}});
  EXPECT_GT(FindTmax(two, w, cfg).v_max, one.v_max);

  std::mt19937_64 rng(3);
  const auto p = RandomPattern(rng, 5, 0.5, 30);
  const std::vector<double> zeros(5, 0.0);
  const auto z = FindTmax(p, zeros, cfg);
  EXPECT_EQ(z.v_max, 0.0);
  EXPECT_EQ(z.t_max, 0.0);
}

TEST(Vdot, EmptyPeakAndFiniteDifference) {
  const NeuronConfig cfg(20.0, 5.0);
  const std::vector<double> w1{1.0};
  EXPECT_EQ(Vdot(SpikePattern(1, 0.5, {}), w1, 0.2, {}, 1.0, cfg), 0.0);
  EXPECT_NEAR(Vdot(Single(0.1, 1.0), w1, 0.1 + cfg.t_peak(), {}, 1.0, cfg), 0.0,
              1e-9);

  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = RandomPattern(rng, 8, 0.3, 30);
    const auto w = RandomWeights(rng, 8, 0.2, 0.3);
    const auto sim = Simulate(p, w, cfg);
    std::uniform_real_distribution<double> when(0.01, 0.29);
    const double t = when(rng);
    bool near_event = false;
    for (const auto& s : p.spikes()) near_event |= std::abs(s.time - t) < 5e-6;
    for (double ts : sim.output_times) near_event |= std::abs(ts - t) < 5e-6;
    if (near_event) continue;
    const double h = 1e-6;
    const auto v = [&](double x) {
      return ComposedPotential(p, w, x, sim.output_times, 1.0, cfg);
    };
    const double fd = (v(t + h) - v(t - h)) / (2 * h);
    const double an = Vdot(p, w, t, sim.output_times, 1.0, cfg);
    EXPECT_LE(std::abs(an - fd), 1e-6 * std::max(1.0, std::abs(fd)))
        << "t=" << t;
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

TEST(SimulateProperties, CoefficientWeightDuality) {
  const NeuronConfig cfg(20.0, 5.0);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = RandomPattern(rng, 10, 0.5, 120);
    const auto w = RandomWeights(rng, 10, 0.15, 0.2);
    // One synthetic afferent per spike, coefficient 1, weight w_i * c_i^j.
    std::vector<AugmentedSpike> expanded;
    std::vector<double> w_eff;
    for (const auto& s : p.spikes()) {
      expanded.push_back({expanded.size(), s.time, 1.0});
      w_eff.push_back(w[s.afferent] * s.coefficient);
    }
    const SpikePattern q(expanded.size(), p.window(), expanded);
    const auto a = Simulate(p, w, cfg);
    const auto b = Simulate(q, w_eff, cfg);
    ASSERT_EQ(a.output_times.size(), b.output_times.size());
    for (std::size_t k = 0; k < a.output_times.size(); ++k) {
      EXPECT_NEAR(a.output_times[k], b.output_times[k], 1e-12);
    }
    EXPECT_NEAR(a.v_max, b.v_max, 1e-12);
  }
}

TEST(SimulateProperties, BinaryDegenerationMatchesPlainLif) {
  // All coefficients 1: crossings must match a plain LIF with only weights,
  // located here by dense scan + bisection on the brute-force potential.
  const NeuronConfig cfg(20.0, 5.0);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = RandomPattern(rng, 20, 0.3, 80).Binarized();
    const auto w = RandomWeights(rng, 20, 0.2, 0.2);
    const auto r = Simulate(p, w, cfg);
    std::vector<double> resets;
    const auto v = [&](double t) {
      double x = BruteU(p, w, t, cfg.tau_m(), cfg.tau_s(), cfg.v0());
      for (double ts : resets) {
        if (ts < t) x -= std::exp(-(t - ts) / cfg.tau_m());
      }
      return x;
    };
    double prev = 0.0;
    for (int k = 1; k <= 30000; ++k) {
      const double t = k * 1e-5;
      const double cur = v(t);
      if (prev < 1.0 && cur >= 1.0) {
        resets.push_back(testing::Bisect(
            [&](double x) { return v(x) - 1.0; }, t - 1e-5, t));
        prev = v(t);
        continue;
      }
      prev = cur;
    }
    ASSERT_EQ(r.output_times.size(), resets.size()) << "trial " << trial;
    for (std::size_t k = 0; k < resets.size(); ++k) {
      EXPECT_NEAR(r.output_times[k], resets[k], 1e-9);
    }
  }
}

TEST(SimulateProperties, SpikeCountNonIncreasingInThreshold) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = RandomPattern(rng, 30, 0.5, 200);
    const auto w = RandomWeights(rng, 30, 0.1, 0.1);
    std::size_t last = SIZE_MAX;
    for (double theta = 0.2; theta < 3.0; theta += 0.1) {
      const auto n =
          Simulate(p, w, NeuronConfig(20.0, 5.0, theta)).output_times.size();
      EXPECT_LE(n, last);
      last = n;
    }
  }
}

TEST(SimulateProperties, ShuntingNeverExceedsOneSpike) {
  std::mt19937_64 rng(13);
  const NeuronConfig cfg(20.0, 5.0, 1.0, NeuronMode::kSingleSpikeShunting);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = RandomPattern(rng, 20, 0.5, 300);
    const auto w = RandomWeights(rng, 20, 0.3, 0.3);
    EXPECT_LE(Simulate(p, w, cfg).output_times.size(), 1u);
  }
}

TEST(SimulateProperties, OutputTimesStrictlyIncreasing) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = RandomPattern(rng, 20, 0.5, 300, false);
    const auto w = RandomWeights(rng, 20, 0.3, 0.4);
    const auto r = Simulate(p, w, NeuronConfig(20.0, 5.0));
    for (std::size_t k = 1; k < r.output_times.size(); ++k) {
      EXPECT_LT(r.output_times[k - 1], r.output_times[k]);
    }
  }
}

TEST(Simulate, RejectsBadWeights) {
  const auto p = Single(0.1, 1.0, 2);
  const NeuronConfig cfg;
  EXPECT_THROW(Simulate(p, std::vector<double>{1.0}, cfg), InputError);
  EXPECT_THROW(Simulate(p, std::vector<double>{1.0, INFINITY}, cfg), InputError);
}

TEST(PatternIo, RoundTripsAndResortsOnRead) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = RandomPattern(rng, 50, 0.5, 200, false);
    p.set_label(trial);
    std::stringstream ss;
    WritePattern(ss, p);
    const auto back = ReadPatterns(ss);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0], p);
  }
  std::stringstream unsorted(
      "# comment\npattern\nn_afferents 3\nwindow_s 1\nlabel 2\nspikes 2\n"
      "2 0.9 1.5\n0 0.1 0.5\nend\n");
  const auto ps = ReadPatterns(unsorted);
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].spikes()[0].afferent, 0u);
  EXPECT_EQ(ps[0].label(), 2);

  std::stringstream bad("pattern\nn_afferents 3\nwindow_s 1\nlabel 0\nspikes 1\n5 0.1 1\nend\n");
  EXPECT_THROW(ReadPatterns(bad), FormatError);
}

}  // namespace
}  // namespace augspike
