// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails. Usage: acceptance [criterion number ...]

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "augspike/experiments.hpp"
#include "augspike/plasticity.hpp"
#include "augspike/reference.hpp"
#include "augspike/sts.hpp"
#include "classic_rules.hpp"
#include "test_util.hpp"

namespace {

using namespace augspike;
using namespace augspike::experiments;
using augspike::testing::RandomPattern;
using augspike::testing::RandomWeights;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Runtime limit folded into the verdict.
Verdict WithinTime(Verdict v, double seconds, double limit) {
  v.detail += Fmt("; %.1f s (limit %.0f s)", seconds, limit);
  v.pass = v.pass && seconds <= limit;
  return v;
}

Verdict Classify3() {
  const auto r = RunClassify3(Classify3Config{});
  const bool conv = r.aug_converged_fraction >= 0.95;
  const bool plateau = r.ablation_plateau >= 0.23 && r.ablation_plateau <= 0.43;
  return {conv && plateau,
          Fmt("AugTmp converged %.3f (>= 0.95); ablation plateau %.4f in [0.23, 0.43]",
              r.aug_converged_fraction, r.ablation_plateau)};
}

Verdict Capacity() {
  const auto r = RunCapacity(CapacityConfig{});
  bool ok = true;
  std::string detail;
  for (const auto& c : r.curves) {
    const std::string name =
        std::string(ToString(c.mode)) + " Q=" + std::to_string(c.q);
    if (c.mode == LatencyMode::kFixed && c.q == 1) {
      std::size_t converged = 0;
      for (const auto& p : c.points) {
        if (p.alpha >= 0.1 - 1e-12) converged += p.converged;
      }
      ok = ok && converged == 0;
      detail += Fmt("%s converged runs at alpha>=0.1: %zu (== 0); ", name.c_str(),
                    converged);
      continue;
    }
    const double lo = c.mode == LatencyMode::kRandom ? 2.3 : 0.15;
    const double hi = c.mode == LatencyMode::kRandom ? 3.5 : 0.45;
    const bool in = c.alpha_c && *c.alpha_c >= lo && *c.alpha_c <= hi;
    ok = ok && in;
    detail += c.alpha_c
                  ? Fmt("%s alpha_c %.3f in [%.2f, %.2f]; ", name.c_str(), *c.alpha_c, lo, hi)
                  : Fmt("%s alpha_c not reached; ", name.c_str());
  }
  if (!detail.empty()) detail.resize(detail.size() - 2);
  return {ok, detail};
}

Verdict PsdTiming() {
  const auto r = RunPsdTiming(PsdConfig{});
  return {r.median_epochs <= 20.0 && r.matched_fraction == 1.0,
          Fmt("median epochs %.1f (<= 20); matched %.3f (== 1)", r.median_epochs,
              r.matched_fraction)};
}

Verdict Causality() {
  const auto r = RunCausality(PsdConfig{});
  const bool order = r.aug_mean_first < r.aug_mean_second;
  const bool ablation = r.ablation_p >= 0.05;
  return {order && ablation,
          Fmt("AugPSD %.4f < %.4f (p=%.2g); ablation %.4f vs %.4f p=%.3f (>= 0.05)",
              r.aug_mean_first, r.aug_mean_second, r.aug_p, r.ablation_mean_first,
              r.ablation_mean_second, r.ablation_p)};
}

Verdict Feature() {
  FeatureConfig c;
  const auto r = RunFeatureDetect(c);
  const bool acc = r.aug.accuracy >= 0.90;
  const bool abl = r.ablation && r.ablation->difference_p >= 0.05;
  return {acc && abl && c.max_cycles <= 100 && c.runs >= 50,
          Fmt("AugTDP occurrence accuracy %.3f (>= 0.90) over %zu runs, <= %zu "
              "cycles; ablation target-distractor p=%.3f (>= 0.05)",
              r.aug.accuracy, c.runs, c.max_cycles,
              r.ablation ? r.ablation->difference_p : 0.0)};
}

Verdict Robustness() {
  RobustnessConfig c;
  const auto r = RunRobustness(c);
  const auto at = [](const std::vector<double>& grid, const std::vector<double>& acc,
                     double x) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (std::abs(grid[g] - x) < 1e-12) return acc[g];
    }
    return -1.0;
  };
  const auto& tmp = r.curves[0];
  const auto& psd = r.curves[1];
  const auto& tdp = r.curves[2];
  const double jit = at(c.sigma_grid, tdp.jitter_accuracy, 0.08);
  const double del = at(c.p_del_grid, tdp.deletion_accuracy, 0.4);
  std::size_t levels = 0, dominated = 0;
  const auto count = [&](const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<double>& d) {
    for (std::size_t g = 0; g < a.size(); ++g) {
      ++levels;
      if (a[g] >= b[g] && a[g] >= d[g]) ++dominated;
    }
  };
  count(tdp.jitter_accuracy, psd.jitter_accuracy, tmp.jitter_accuracy);
  count(tdp.deletion_accuracy, psd.deletion_accuracy, tmp.deletion_accuracy);
  return {jit >= 0.80 && del >= 0.80 && dominated == levels && c.runs >= 50,
          Fmt("AugTDP at sigma 80 ms %.3f (>= 0.80), at p_del 0.4 %.3f (>= 0.80); "
              "AugTDP >= others at %zu of %zu levels; %zu runs",
              jit, del, dominated, levels, c.runs)};
}

// Central differences with h = 1e-6 on instances with N <= 50. Components
// where both sides are below 1e-6 are degenerate and not scored.
Verdict Gradient() {
  const NeuronConfig cfg(20.0, 5.0);
  const StsOptions tight{200, 1e-14, {}, {}};
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> n_dist(5, 50), k_dist(1, 4);
  int instances = 0, scored = 0, agree = 0;
  while (instances < 200) {
    const std::size_t n = n_dist(rng);
    const auto p = RandomPattern(rng, n, 0.5, 40);
    const auto w = RandomWeights(rng, n, 0.05, 0.2);
    const std::size_t k = k_dist(rng);
    CriticalThreshold crit;
    std::vector<double> g;
    try {
      crit = ComputeSts(p, w, k, cfg, tight);
      g = StsGradient(p, w, crit, cfg);
    } catch (const NoSuchCritical&) {
      continue;
    } catch (const DegenerateCrossing&) {
      continue;
    }
    ++instances;
    for (std::size_t i = 0; i < n; ++i) {
      const double h = 1e-6;
      auto wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      const double fd = (ComputeSts(p, wp, k, cfg, tight).theta_star -
                         ComputeSts(p, wm, k, cfg, tight).theta_star) /
                        (2 * h);
      if (std::max(std::abs(fd), std::abs(g[i])) < 1e-6) continue;
      ++scored;
      if (std::abs(fd - g[i]) <= 1e-3 * std::abs(fd)) ++agree;
    }
  }
  const double frac = scored ? static_cast<double>(agree) / scored : 0.0;
  return {frac >= 0.99, Fmt("%d of %d components within 1e-3 relative (%.4f >= 0.99) "
                            "over %d instances",
                            agree, scored, frac, instances)};
}

Verdict Degeneration() {
  const NeuronConfig multi(20.0, 5.0);
  const NeuronConfig shunt(20.0, 5.0, 1.0, NeuronMode::kSingleSpikeShunting);
  std::mt19937_64 rng(808);
  double worst[3] = {0.0, 0.0, 0.0};
  int trials[3] = {0, 0, 0};
  const auto track = [&](int r, const std::vector<double>& a,
                         const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst[r] = std::max(worst[r], std::abs(a[i] - b[i]));
    }
    ++trials[r];
  };
  while (trials[0] < 100) {
    const auto p = RandomPattern(rng, 30, 0.5, 120).Binarized();
    const auto w = RandomWeights(rng, 30, 0.05, 0.1);
    const bool target = trials[0] % 2 == 0;
    const auto sim = Simulate(p, w, shunt);
    track(0, AugTmpUpdate(p, w, target, shunt, 1e-3).dw,
          classic::Tempotron(p, sim.t_max, target, !sim.output_times.empty(), 1e-3,
                             shunt));
  }
  while (trials[1] < 100) {
    const auto p = RandomPattern(rng, 30, 0.5, 120).Binarized();
    const auto w = RandomWeights(rng, 30, 0.1, 0.1);
    const std::vector<double> desired{0.1, 0.3};
    const auto actual = Simulate(p, w, multi).output_times;
    track(1, AugPsdUpdate(p, w, desired, multi, 1e-2).dw,
          classic::Psd(p, desired, actual, 1e-2, multi));
  }
  int attempts = 0;
  while (trials[2] < 100 && attempts < 10000) {
    ++attempts;
    const auto p = RandomPattern(rng, 30, 0.5, 120).Binarized();
    const auto w = RandomWeights(rng, 30, 0.1, 0.15);
    const int n_desired = attempts % 4;
    const auto n = Simulate(p, w, multi).output_times.size();
    const auto aug = AugTdpUpdate(p, w, n_desired, multi, 1e-2);
    if (aug.skipped || aug.error == TrialError::kNone) continue;
    const bool ltp = n < static_cast<std::size_t>(n_desired);
    StsOptions opts;
    (ltp ? opts.fires_fewer : opts.fires_at_least) = multi.threshold();
    const auto crit = ComputeSts(p, w, ltp ? n + 1 : n, multi, opts);
    auto ref = classic::TdpGradient(p, w, crit, multi);
    for (auto& x : ref) x *= ltp ? 1e-2 : -1e-2;
    track(2, aug.dw, ref);
  }
  bool ok = true;
  for (int r = 0; r < 3; ++r) ok = ok && trials[r] == 100 && worst[r] <= 1e-12;
  return {ok, Fmt("max |aug - classic| Tmp %.2g, PSD %.2g, TDP %.2g (<= 1e-12) on "
                  "%d/%d/%d trials",
                  worst[0], worst[1], worst[2], trials[0], trials[1], trials[2])};
}

Verdict Simulator() {
  Rng rng(909);
  const NeuronConfig cfg(20.0, 5.0);
  std::size_t count_mismatch = 0, spikes = 0;
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const auto p = PoissonPattern(300, 4.0, 0.5, CoefficientScheme::QLevels(3), rng);
    const auto w = GaussianWeights(300, 0.03, 0.05, rng);
    const auto a = Simulate(p, w, cfg);
    const auto b = reference::SimulateDenseGrid(p, w, cfg, 1e-5);
    if (a.output_times.size() != b.output_times.size()) {
      ++count_mismatch;
      continue;
    }
    spikes += a.output_times.size();
    for (std::size_t j = 0; j < a.output_times.size(); ++j) {
      worst = std::max(worst, std::abs(a.output_times[j] - b.output_times[j]));
    }
  }
  return {count_mismatch == 0 && worst <= 5e-5,
          Fmt("count mismatches %zu of 500 (== 0); max time difference %.3g ms "
              "(<= 0.05) over %zu spikes",
              count_mismatch, worst * 1e3, spikes)};
}

Verdict Visual() {
  VisualConfig c;
  c.data = AUGSPIKE_DATA_DIR "/digits_subset.txt";
  const auto r = RunVisual(c);
  bool ok = !r.rules.empty();
  std::string detail;
  for (const auto& rr : r.rules) {
    ok = ok && rr.mean_accuracy >= 0.70;
    detail += Fmt("%s accuracy %.3f (>= 0.70); ", std::string(ToString(rr.rule)).c_str(),
                  rr.mean_accuracy);
  }
  detail += Fmt("%zu runs", c.runs);
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: no runtime limit
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<Criterion> all{
      {1, "classify3", 120, Classify3},
      {2, "capacity", 1800, Capacity},
      {3, "psd_timing", 60, PsdTiming},
      {4, "causality", 300, Causality},
      {5, "feature_detect", 900, Feature},
      {6, "robustness", 900, Robustness},
      {7, "gradient", 120, Gradient},
      {8, "degeneration", 0, Degeneration},
      {9, "simulator", 0, Simulator},
      {10, "visual", 0, Visual},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0) {
      v = WithinTime(v, s, c.limit_s);
    } else {
      v.detail += Fmt("; %.1f s", s);
    }
    std::printf("%s  %2d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
