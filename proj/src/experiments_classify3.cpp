#include <vector>

#include "augspike/experiments.hpp"
#include "augspike/kernels.hpp"
#include "augspike/stats.hpp"
#include "experiments_internal.hpp"

namespace augspike::experiments {

namespace {

struct Classify3Run {
  std::vector<std::size_t> aug_errors;
  std::vector<std::size_t> ablation_errors;
  std::optional<std::size_t> aug_converged;
  std::optional<std::size_t> ablation_converged;
};

std::vector<std::size_t> ErrorsPerCycle(const TrainHistory& h) {
  std::vector<std::size_t> out;
  out.reserve(h.cycles.size());
  for (const auto& c : h.cycles) out.push_back(c.errors);
  return out;
}

Classify3Run RunOne(const Classify3Config& config, std::uint64_t seed) {
  Rng rng(seed);
  const auto scheme = detail::EqualSet(config.coefficients);
  // P1 is the target; P2 shares its timings; P3 is independent.
  auto p1 = PoissonPattern(config.n_afferents, config.rate, config.window,
                           scheme, rng);
  auto p2 = RefreshCoefficients(p1, scheme, rng);
  auto p3 = PoissonPattern(config.n_afferents, config.rate, config.window,
                           scheme, rng);
  p1.set_label(1);
  p2.set_label(0);
  p3.set_label(0);
  const std::vector<SpikePattern> data{p1, p2, p3};
  const auto w0 = detail::InitialWeights(config.n_afferents, config.learn, rng);

  auto learner = detail::MakeLearner(LearningRule::kAugTmp, config.learn);
  learner.max_epochs = config.cycles;
  learner.stop_on_convergence = false;
  const auto neuron = config.neuron.Build();

  Classify3Run out;
  const auto aug = Train(data, w0, learner, neuron, seed);
  out.aug_errors = ErrorsPerCycle(aug.history);
  out.aug_converged = aug.history.converged_cycle;

  learner.view = config.ablation;
  const auto abl = Train(data, w0, learner, neuron, seed);
  out.ablation_errors = ErrorsPerCycle(abl.history);
  out.ablation_converged = abl.history.converged_cycle;
  return out;
}

double Plateau(const std::vector<double>& curve, std::size_t from) {
  if (from >= curve.size()) return curve.empty() ? 0.0 : curve.back();
  return stats::Mean(std::span(curve).subspan(from));
}

}  // namespace

Classify3Result RunClassify3(const Classify3Config& config) {
  if (config.runs == 0 || config.cycles == 0) {
    throw ParameterError("classify3 needs runs > 0 and cycles > 0");
  }
  std::vector<Classify3Run> runs(config.runs);
  ParallelFor(config.runs, [&](std::size_t r) {
    runs[r] = RunOne(config, DeriveSeed(config.seed, r));
  });

  Classify3Result res;
  res.aug_curve.assign(config.cycles, 0.0);
  res.ablation_curve.assign(config.cycles, 0.0);
  const double scale = 1.0 / (3.0 * static_cast<double>(config.runs));
  std::size_t converged = 0;
  for (const auto& run : runs) {
    for (std::size_t c = 0; c < config.cycles; ++c) {
      res.aug_curve[c] += static_cast<double>(run.aug_errors[c]) * scale;
      res.ablation_curve[c] += static_cast<double>(run.ablation_errors[c]) * scale;
    }
    res.aug_converged.push_back(run.aug_converged);
    if (run.aug_converged) ++converged;
  }
  res.aug_converged_fraction =
      static_cast<double>(converged) / static_cast<double>(config.runs);
  res.aug_plateau = Plateau(res.aug_curve, config.plateau_from);
  res.ablation_plateau = Plateau(res.ablation_curve, config.plateau_from);

  auto& rep = res.report;
  rep.experiment = "classify3";
  Table curve{"error_curve", {"cycle", "aug_error", "ablation_error"}, {}};
  for (std::size_t c = 0; c < config.cycles; ++c) {
    curve.Add(c, res.aug_curve[c], res.ablation_curve[c]);
  }
  Table per_run{"runs",
                {"run", "seed", "aug_converged_cycle",
                 "ablation_converged_cycle", "aug_final_errors",
                 "ablation_final_errors"},
                {}};
  for (std::size_t r = 0; r < runs.size(); ++r) {
    per_run.Add(r, std::to_string(DeriveSeed(config.seed, r)),
                detail::CyclesOrInf(runs[r].aug_converged),
                detail::CyclesOrInf(runs[r].ablation_converged),
                runs[r].aug_errors.back(), runs[r].ablation_errors.back());
  }
  // Single-run trajectories of run 0.
  Table single{"run0_errors", {"cycle", "aug_errors", "ablation_errors"}, {}};
  for (std::size_t c = 0; c < config.cycles; ++c) {
    single.Add(c, runs[0].aug_errors[c], runs[0].ablation_errors[c]);
  }
  rep.tables = {curve, per_run, single};
  rep.Set("runs", config.runs);
  rep.Set("seed", std::to_string(config.seed));
  rep.Set("ablation_view", detail::ViewName(config.ablation));
  rep.Set("aug_converged_fraction", res.aug_converged_fraction);
  rep.Set("aug_plateau_error", res.aug_plateau);
  rep.Set("ablation_plateau_error", res.ablation_plateau);
  rep.Set("plateau_cycles_from", config.plateau_from);
  return res;
}

}  // namespace augspike::experiments
