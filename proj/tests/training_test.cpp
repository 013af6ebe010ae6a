#include "augspike/training.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace augspike {
namespace {

const NeuronConfig kNeuron(20.0, 5.0);

std::vector<SpikePattern> TwoClassLatency(Rng& rng, int n) {
  std::vector<SpikePattern> out;
  for (int k = 0; k < n; ++k) {
    auto p = LatencyPattern(100, 0.5, CoefficientScheme::QLevels(3), rng);
    p.set_label(k % 2);
    out.push_back(std::move(p));
  }
  return out;
}

TEST(LearnerConfig, Validation) {
  LearnerConfig c;
  c.eta = 0.0;
  EXPECT_THROW(c.Validate(false), ParameterError);
  c.eta = 0.1;
  c.mu = 1.5;
  EXPECT_THROW(c.Validate(false), ParameterError);
  c.mu = 0.5;
  c.rule = LearningRule::kAugPsd;
  EXPECT_THROW(c.Validate(true), ParameterError);
  c.desired_times = std::vector<double>{0.1};
  EXPECT_NO_THROW(c.Validate(true));
  c.rule = LearningRule::kAugTdp;
  EXPECT_THROW(c.Validate(true), ParameterError);
}

TEST(Train, AlreadyCorrectConvergesAtCycleZeroUnchanged) {
  Rng rng(1);
  const auto data = TwoClassLatency(rng, 10);
  LearnerConfig learner;
  learner.target_label = 5;  // nothing is a target; zero weights never fire
  const std::vector<double> w(100, 0.0);
  const auto r = Train(data, w, learner, kNeuron, 7);
  ASSERT_TRUE(r.history.converged_cycle);
  EXPECT_EQ(*r.history.converged_cycle, 0u);
  EXPECT_EQ(r.weights, w);
  EXPECT_EQ(r.history.cycles.size(), 1u);
}

TEST(Train, DeterministicGivenSeed) {
  Rng rng(2);
  const auto data = TwoClassLatency(rng, 20);
  LearnerConfig learner;
  learner.eta = 1e-3;
  learner.mu = 0.9;
  learner.shuffle = true;
  const auto w0 = GaussianWeights(100, 0.0, 0.001, rng);
  const auto a = Train(data, w0, learner, kNeuron, 11);
  const auto b = Train(data, w0, learner, kNeuron, 11);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.history.converged_cycle, b.history.converged_cycle);
  ASSERT_EQ(a.history.cycles.size(), b.history.cycles.size());
  for (std::size_t k = 0; k < a.history.cycles.size(); ++k) {
    EXPECT_EQ(a.history.cycles[k].errors, b.history.cycles[k].errors);
  }
}

TEST(Train, AugTmpLearnsSmallTask) {
  Rng rng(3);
  const auto data = TwoClassLatency(rng, 20);
  LearnerConfig learner;
  learner.eta = 1e-2;
  learner.mu = 0.9;
  learner.max_epochs = 200;
  const auto r = Train(data, GaussianWeights(100, 0.0, 0.001, rng), learner,
                       kNeuron, 5);
  ASSERT_TRUE(r.history.converged_cycle);
  for (const auto& p : data) {
    EXPECT_FALSE(IsErrorTrial(p, r.weights, TargetFromLabel(p, learner), learner,
                              kNeuron));
  }
}

TEST(Train, MomentumTouchedOnlyByErrorTrials) {
  // A correct trial between two error trials must not decay the momentum:
  // the second error applies current + mu * (first applied update).
  const SpikePattern err1(2, 0.5, {{0, 0.1, 1.0}}, 1);
  const SpikePattern ok(2, 0.5, {}, 0);
  const SpikePattern err2(2, 0.5, {{1, 0.2, 1.0}}, 1);
  const std::vector<SpikePattern> data{err1, ok, err2};
  LearnerConfig learner;
  learner.eta = 0.1;
  learner.mu = 0.5;
  learner.max_epochs = 1;
  const auto r = Train(data, std::vector<double>{0.01, 0.01}, learner, kNeuron, 1);
  // Each lone spike is credited at its PSP peak, K = 1. Update 1: +0.1 on w0.
  // Update 2: +0.1 on w1 plus 0.5 * 0.1 on w0.
  EXPECT_NEAR(r.weights[0], 0.01 + 0.1 + 0.05, 1e-12);
  EXPECT_NEAR(r.weights[1], 0.01 + 0.1, 1e-12);
}

TEST(Train, BinaryViewSeesCoefficientFreePattern) {
  const SpikePattern p(1, 0.5, {{0, 0.1, 1.5}}, 1);
  LearnerConfig learner;
  learner.eta = 0.01;
  const std::vector<double> w{0.1};
  const TrialTarget target{true, {}, 0};
  learner.view = CoefficientView::kAugmented;
  EXPECT_NEAR(ComputeUpdate(p, w, target, learner, kNeuron).dw[0], 0.015, 1e-14);
  learner.view = CoefficientView::kBlindRule;
  EXPECT_NEAR(ComputeUpdate(p, w, target, learner, kNeuron).dw[0], 0.01, 1e-14);
  learner.view = CoefficientView::kBinary;
  EXPECT_NEAR(ComputeUpdate(p, w, target, learner, kNeuron).dw[0], 0.01, 1e-14);
  // 0.8 * 1.5 crosses threshold with coefficients, 0.8 * 1 does not.
  const std::vector<double> w2{0.8};
  learner.view = CoefficientView::kBlindRule;
  EXPECT_FALSE(IsErrorTrial(p, w2, target, learner, kNeuron));
  learner.view = CoefficientView::kBinary;
  EXPECT_TRUE(IsErrorTrial(p, w2, target, learner, kNeuron));
}

TEST(History, WritesOneLinePerCycleAndWeightsRoundTrip) {
  TrainHistory h;
  h.cycles.push_back({0, 3, {{0, 1}, {1, 2}}, 0, 0.5});
  h.cycles.push_back({1, 0, {{0, 0}, {1, 0}}, 0, 0.25});
  std::ostringstream os;
  WriteHistory(os, h);
  EXPECT_NE(os.str().find("0\t3\t0\t0.5\t0:1,1:2\n"), std::string::npos);

  const std::vector<double> w{0.1, -1e-17, 3.0};
  std::stringstream ss;
  WriteWeights(ss, w, LearningRule::kAugTdp, 42);
  EXPECT_EQ(ReadWeights(ss), w);
  std::stringstream bad("n_afferents 3\nrule augtdp\nseed 1\n0.1\n");
  EXPECT_THROW(ReadWeights(bad), FormatError);
}

}  // namespace
}  // namespace augspike
