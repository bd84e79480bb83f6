#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "orl/binpack/distribution.hpp"
#include "orl/binpack/env.hpp"
#include "orl/core/runner.hpp"
#include "orl/learn/checkpoint.hpp"
#include "orl/learn/gradient_check.hpp"
#include "orl/learn/masked.hpp"
#include "orl/learn/mlp.hpp"
#include "orl/learn/policy.hpp"
#include "orl/learn/policy_gradient.hpp"
#include "orl/learn/trainer.hpp"
#include "orl/newsvendor/base_stock.hpp"
#include "orl/newsvendor/env.hpp"
#include "orl/vrp/env.hpp"

using namespace orl;
using namespace orl::learn;

namespace {

std::vector<bool> mask_of(std::initializer_list<int> on, int size) {
  std::vector<bool> m(static_cast<std::size_t>(size), false);
  for (int k : on) m[static_cast<std::size_t>(k)] = true;
  return m;
}

// Batch of recorded decisions from a random categorical policy on bin packing.
std::vector<Trajectory> recorded_batch(const Mlp& net, int episodes) {
  binpack::BinPackConfig cfg = *binpack::presets::find("bw9");
  cfg.horizon = 12;
  std::vector<Trajectory> batch;
  PolicyHead head;
  for (int e = 0; e < episodes; ++e) {
    binpack::BinPackEnv env(cfg);
    RngStream rng(5, static_cast<std::uint64_t>(e));
    batch.push_back(collect_episode(env, net, head, rng, rng.fork(1)));
  }
  return batch;
}

}  // namespace

TEST(MaskedSoftmax, EqualLogitsSplitEvenly) {
  const std::vector<double> logits(9, 0.3);
  const auto p = masked_softmax(logits, mask_of({0, 4, 7}, 9));
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(p[static_cast<std::size_t>(k)], (k == 0 || k == 4 || k == 7) ? 1.0 / 3 : 0.0, 1e-15);
}

TEST(MaskedSoftmax, SingleFeasibleAction) {
  const std::vector<double> logits{-50, 80, 3, 1e3};
  const auto p = masked_softmax(logits, mask_of({2}, 4));
  EXPECT_EQ(p, (std::vector<double>{0, 0, 1, 0}));
}

TEST(MaskedSoftmax, ProportionalToExpOnFeasibleSet) {
  RngStream r(1, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> logits(12);
    std::vector<bool> mask(12);
    for (std::size_t k = 0; k < 12; ++k) {
      logits[k] = r.normal(0, 3);
      mask[k] = r.bernoulli(0.5);
    }
    mask[static_cast<std::size_t>(r.uniform_int(0, 11))] = true;
    const auto p = masked_softmax(logits, mask);
    double z = 0;
    for (std::size_t k = 0; k < 12; ++k)
      if (mask[k]) z += std::exp(logits[k]);
    double sum = 0;
    for (std::size_t k = 0; k < 12; ++k) {
      if (!mask[k]) ASSERT_EQ(p[k], 0.0);
      else ASSERT_NEAR(p[k], std::exp(logits[k]) / z, 1e-12);
      sum += p[k];
    }
    ASSERT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(MaskedSoftmax, UnderflowFallsBackToUniform) {
  const std::vector<double> logits{-INFINITY, -INFINITY, 0.0};
  const auto p = masked_softmax(logits, mask_of({0, 1}, 3));
  EXPECT_EQ(p, (std::vector<double>{0.5, 0.5, 0.0}));
  const auto q = masked_softmax(std::vector<double>{NAN, 1.0}, mask_of({0, 1}, 2));
  EXPECT_EQ(q, (std::vector<double>{0.5, 0.5}));
}

TEST(MaskedSoftmax, AllMaskedIsError) {
  EXPECT_THROW(masked_softmax(std::vector<double>{1, 2}, mask_of({}, 2)), std::invalid_argument);
}

TEST(MaskedSoftmax, MaskedActionsNeverSampled) {
  RngStream r(2, 0);
  const std::vector<double> logits{5, -2, 9, 0, 1, 3};
  const auto mask = mask_of({1, 3, 4}, 6);
  const auto p = masked_softmax(logits, mask);
  for (int i = 0; i < 1000000; ++i) ASSERT_TRUE(mask[static_cast<std::size_t>(sample_index(p, r))]);
}

TEST(Mlp, ShapesAndValidation) {
  RngStream r(1, 0);
  const auto net = Mlp::random({10, 64, 32, 9}, r);
  EXPECT_EQ(net.parameter_count(), 10u * 64 + 64 + 64 * 32 + 32 + 32 * 9 + 9);
  EXPECT_EQ(net.forward(std::vector<double>(10, 0.1)).size(), 9u);
  EXPECT_THROW(net.forward(std::vector<double>(3, 0.0)), std::invalid_argument);
  EXPECT_THROW(Mlp({3, 2}, std::vector<double>(5)), std::invalid_argument);
  EXPECT_THROW(Mlp({3}, {}), std::invalid_argument);
}

TEST(GradientCheck, QuadraticIsExact) {
  const std::vector<double> a{1.0, -2.0, 0.5, 3.0};
  LossFunction loss = [&](std::span<const double> x, std::vector<double>* g) {
    double v = 0;
    if (g) g->assign(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      v += a[i] * x[i] * x[i] + x[i];
      if (g) (*g)[i] = 2 * a[i] * x[i] + 1;
    }
    return v;
  };
  RngStream r(1, 0);
  EXPECT_LT(gradient_check({0.3, -1.2, 2.0, 0.7}, loss, r).max_relative_error, 1e-6);
}

TEST(GradientCheck, FindsWrongGradient) {
  LossFunction loss = [](std::span<const double> x, std::vector<double>* g) {
    if (g) *g = {3 * x[0]};  // true derivative is 2x
    return x[0] * x[0];
  };
  RngStream r(1, 0);
  EXPECT_GT(gradient_check({1.0}, loss, r).max_relative_error, 0.1);
}

TEST(GradientCheck, MaskedCrossEntropy) {
  RngStream r(3, 0);
  auto net = Mlp::random({6, 16, 8, 5}, r, 1.0);
  std::vector<std::vector<double>> obs;
  std::vector<std::vector<bool>> masks;
  std::vector<int> targets;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> o(6);
    for (auto& v : o) v = r.normal(0, 1);
    obs.push_back(o);
    auto m = mask_of({}, 5);
    for (std::size_t k = 0; k < 5; ++k) m[k] = r.bernoulli(0.6);
    const auto t = static_cast<std::size_t>(r.uniform_int(0, 4));
    m[t] = true;
    masks.push_back(m);
    targets.push_back(static_cast<int>(t));
  }
  LossFunction loss = [&](std::span<const double> p, std::vector<double>* g) {
    Mlp copy(net.layer_sizes(), std::vector<double>(p.begin(), p.end()));
    return masked_cross_entropy(copy, obs, masks, targets, g);
  };
  const std::vector<double> params(net.parameters().begin(), net.parameters().end());
  EXPECT_LT(gradient_check(params, loss, r, 200).max_relative_error, 1e-4);
}

TEST(GradientCheck, SurrogateOnRecordedBatch) {
  RngStream r(4, 0);
  const auto net = Mlp::random({10, 16, 8, 9}, r, 1.0);
  const auto batch = recorded_batch(net, 6);
  const auto samples = make_samples(batch, 0.99);
  PolicyHead head;
  // Move away from the collection point so ratios differ from 1 but stay
  // inside the clip range, and include the entropy term.
  std::vector<double> params(net.parameters().begin(), net.parameters().end());
  for (auto& p : params) p += r.normal(0, 0.01);
  LossFunction loss = [&](std::span<const double> p, std::vector<double>* g) {
    Mlp copy(net.layer_sizes(), std::vector<double>(p.begin(), p.end()));
    return surrogate(copy, head, samples, 0.3, 0.01, g);
  };
  EXPECT_LT(gradient_check(params, loss, r, 200).max_relative_error, 1e-4);
}

TEST(GradientCheck, GaussianSurrogate) {
  RngStream r(5, 0);
  auto net = Mlp::random({10, 8, 1}, r, 1.0);
  PolicyHead head{HeadKind::Gaussian, 0.1};
  newsvendor::NewsvendorConfig cfg;
  cfg.horizon = 10;
  std::vector<Trajectory> batch;
  for (int e = 0; e < 4; ++e) {
    newsvendor::NewsvendorEnv env(cfg);
    RngStream er(6, static_cast<std::uint64_t>(e));
    batch.push_back(collect_episode(env, net, head, er, er.fork(1)));
  }
  const auto samples = make_samples(batch, 1.0);
  const std::vector<double> params(net.parameters().begin(), net.parameters().end());
  LossFunction loss = [&](std::span<const double> p, std::vector<double>* g) {
    Mlp copy(net.layer_sizes(), std::vector<double>(p.begin(), p.end()));
    return surrogate(copy, head, samples, 0.3, 0.0, g);
  };
  EXPECT_LT(gradient_check(params, loss, r, 97).max_relative_error, 1e-4);
}

TEST(Samples, AdvantagesAreNormalised) {
  RngStream r(1, 0);
  const auto net = Mlp::random({10, 8, 9}, r);
  const auto batch = recorded_batch(net, 5);
  const auto s = make_samples(batch, 0.995);
  double mean = 0, sq = 0;
  for (const auto& x : s) mean += x.advantage;
  mean /= static_cast<double>(s.size());
  for (const auto& x : s) sq += (x.advantage - mean) * (x.advantage - mean);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(sq / static_cast<double>(s.size()), 1.0, 1e-9);
}

TEST(Samples, ReturnsToGoAreDiscounted) {
  Trajectory t(3);
  t[0].reward = 1;
  t[1].reward = 0;
  t[2].reward = 2;
  Trajectory u(1);
  u[0].reward = 0;
  const auto s = make_samples({t, u}, 0.5);
  // Raw returns: 1.5, 1.0, 2.0, 0.0 -> mean 1.125.
  const double mean = 1.125;
  const double sd = std::sqrt((0.375 * 0.375 + 0.125 * 0.125 + 0.875 * 0.875 + 1.125 * 1.125) / 4);
  EXPECT_NEAR(s[0].advantage, (1.5 - mean) / sd, 1e-12);
  EXPECT_NEAR(s[3].advantage, (0.0 - mean) / sd, 1e-12);
}

TEST(Update, ZeroAdvantageLeavesParametersUnchanged) {
  RngStream r(2, 0);
  auto net = Mlp::random({10, 8, 9}, r, 1.0);
  auto batch = recorded_batch(net, 1);
  for (auto& d : batch[0]) d.reward = 0.0;
  const std::vector<double> before(net.parameters().begin(), net.parameters().end());
  Adam adam;
  TrainerConfig cfg;
  const auto diag = policy_gradient_update(net, adam, PolicyHead{}, batch, cfg);
  EXPECT_FALSE(diag.aborted);
  EXPECT_EQ(std::vector<double>(net.parameters().begin(), net.parameters().end()), before);
}

TEST(Update, DeterministicGivenSeedAndBatch) {
  auto run = [] {
    RngStream r(3, 0);
    auto net = Mlp::random({10, 8, 9}, r, 1.0);
    const auto batch = recorded_batch(net, 4);
    Adam adam;
    policy_gradient_update(net, adam, PolicyHead{}, batch, TrainerConfig{});
    return std::vector<double>(net.parameters().begin(), net.parameters().end());
  };
  EXPECT_EQ(run(), run());
}

TEST(Update, NonFiniteGradientAborts) {
  RngStream r(3, 0);
  auto net = Mlp::random({10, 8, 9}, r, 1.0);
  auto batch = recorded_batch(net, 2);
  batch[0][0].observation[0] = INFINITY;
  const std::vector<double> before(net.parameters().begin(), net.parameters().end());
  Adam adam;
  const auto diag = policy_gradient_update(net, adam, PolicyHead{}, batch, TrainerConfig{});
  EXPECT_TRUE(diag.aborted);
  EXPECT_FALSE(diag.error.empty());
  EXPECT_EQ(std::vector<double>(net.parameters().begin(), net.parameters().end()), before);
}

TEST(Update, TwoStateBanditConverges) {
  // State A pays 1 for action 0, state B pays 1 for action 1.
  RngStream r(9, 0);
  auto net = Mlp::random({2, 8, 2}, r);
  Adam adam;
  TrainerConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.epochs = 4;
  PolicyHead head;
  const std::vector<bool> mask{true, true};
  auto prob_best = [&](int state) {
    std::vector<double> obs{state == 0 ? 1.0 : 0.0, state == 1 ? 1.0 : 0.0};
    return masked_softmax(net.forward(obs), mask)[static_cast<std::size_t>(state)];
  };
  for (int it = 0; it < 200; ++it) {
    std::vector<Trajectory> batch;
    for (int e = 0; e < 16; ++e) {
      const int state = e % 2;
      Decision d;
      d.observation = {state == 0 ? 1.0 : 0.0, state == 1 ? 1.0 : 0.0};
      d.mask = mask;
      const auto out = net.forward(d.observation);
      const int a = sample_index(masked_softmax(out, mask), r);
      d.action = a;
      d.log_prob = head.log_prob(out, a, mask).value;
      d.reward = a == state ? 1.0 : 0.0;
      batch.push_back({d});
    }
    policy_gradient_update(net, adam, head, batch, cfg);
  }
  EXPECT_GT(prob_best(0), 0.95);
  EXPECT_GT(prob_best(1), 0.95);
}

TEST(TrainerConfig, Validation) {
  TrainerConfig c;
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.gamma = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.clip = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NO_THROW(TrainerConfig{}.validate());
}

TEST(Train, ToyBinPackingLearns) {
  const auto cfg = *binpack::presets::find("toy");
  const auto res = train([&] { return binpack::BinPackEnv(cfg); }, TrainerConfig{}, {60, {}}, 1, 4);
  ASSERT_EQ(res.curve.size(), 60u);
  for (std::size_t i = 0; i < res.curve.size(); ++i) EXPECT_EQ(res.curve[i].iteration, static_cast<int>(i));
  EXPECT_GE(res.curve.back().mean_reward, -10.0);
}

TEST(Train, WorkerCountInvariant) {
  const auto cfg = *binpack::presets::find("bw9");
  auto make = [&] { return binpack::BinPackEnv(cfg); };
  TrainerConfig tc;
  tc.batch_episodes = 8;
  const auto a = train(make, tc, {3, {}}, 5, 1);
  const auto b = train(make, tc, {3, {}}, 5, 8);
  EXPECT_EQ(std::vector<double>(a.state.net.parameters().begin(), a.state.net.parameters().end()),
            std::vector<double>(b.state.net.parameters().begin(), b.state.net.parameters().end()));
  EXPECT_EQ(a.curve.back().mean_reward, b.curve.back().mean_reward);
}

TEST(Train, ResumeReproducesNextIteration) {
  const auto cfg = *binpack::presets::find("lw9");
  auto make = [&] { return binpack::BinPackEnv(cfg); };
  TrainerConfig tc;
  tc.batch_episodes = 4;
  const auto full = train(make, tc, {4, {}}, 8);
  const auto half = train(make, tc, {2, {}}, 8);
  std::stringstream buf;
  write_checkpoint(buf, half.state);
  const auto resumed = train(make, tc, {2, {}}, 8, 1, read_checkpoint(buf));
  EXPECT_EQ(resumed.state.iteration, 4);
  EXPECT_EQ(resumed.curve.front().iteration, 2);
  EXPECT_EQ(resumed.curve.back().mean_reward, full.curve.back().mean_reward);
  EXPECT_EQ(std::vector<double>(resumed.state.net.parameters().begin(), resumed.state.net.parameters().end()),
            std::vector<double>(full.state.net.parameters().begin(), full.state.net.parameters().end()));
}

TEST(Train, AllEnvironmentsRun) {
  TrainerConfig tc;
  tc.batch_episodes = 2;
  tc.epochs = 1;
  newsvendor::NewsvendorConfig nc;
  EXPECT_EQ(train([&] { return newsvendor::NewsvendorEnv(nc); }, tc, {2, {}}, 1).curve.size(), 2u);
  vrp::CityConfig vc;
  vc.episode_len = 50;
  EXPECT_EQ(train([&] { return vrp::VrpEnv(vc); }, tc, {2, {}}, 1).curve.size(), 2u);
}

TEST(Train, CrossDistributionEvaluation) {
  TrainerConfig tc;
  tc.batch_episodes = 4;
  const auto res = train([] { return binpack::BinPackEnv(*binpack::presets::find("bw9")); }, tc, {3, {}}, 1);
  const auto lw = *binpack::presets::find("lw9");
  const auto rep = run_benchmark([&] { return binpack::BinPackEnv(lw); },
                                 [&](RngStream r) {
                                   return LearnedPolicy<binpack::BinPackEnv>(res.state.net, res.state.head, r);
                                 },
                                 10, 2);
  EXPECT_EQ(rep.n, 10u);
  EXPECT_LE(rep.min, rep.max);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  RngStream r(1, 0);
  Checkpoint ck;
  ck.net = Mlp::random({4, 7, 3}, r, 1.0);
  ck.head = PolicyHead{HeadKind::Gaussian, 0.1};
  ck.iteration = 17;
  std::vector<double> g(ck.net.parameter_count());
  for (auto& v : g) v = r.normal(0, 1e-7);
  ck.adam.step(ck.net.parameters(), g);
  std::stringstream buf;
  write_checkpoint(buf, ck);
  const auto back = read_checkpoint(buf);
  EXPECT_EQ(back.iteration, 17);
  EXPECT_EQ(back.head.kind, HeadKind::Gaussian);
  EXPECT_EQ(back.net.layer_sizes(), ck.net.layer_sizes());
  EXPECT_EQ(std::vector<double>(back.net.parameters().begin(), back.net.parameters().end()),
            std::vector<double>(ck.net.parameters().begin(), ck.net.parameters().end()));
  EXPECT_EQ(back.adam.m, ck.adam.m);
  EXPECT_EQ(back.adam.v, ck.adam.v);
  EXPECT_EQ(back.adam.step_count, 1u);
}

TEST(Checkpoint, RejectsBadInput) {
  std::stringstream a("orl-checkpoint 2\n");
  EXPECT_THROW(read_checkpoint(a), ConfigError);
  std::stringstream b("hello\n");
  EXPECT_THROW(read_checkpoint(b), ConfigError);
  std::stringstream c("orl-checkpoint 1\nhead categorical 0.1\nlayers 2 2 2\niteration 0\nparams 6\n1\n2\n");
  EXPECT_THROW(read_checkpoint(c), ConfigError);
}

TEST(LearnedPolicy, GreedyPicksMostLikelyAllowed) {
  RngStream r(1, 0);
  auto net = Mlp::random({10, 8, 9}, r, 1.0);
  binpack::BinPackEnv env(*binpack::presets::find("bw9"));
  auto s = env.reset(RngStream(1, 1));
  LearnedPolicy<binpack::BinPackEnv> greedy(net, PolicyHead{}, RngStream(1, 2), false);
  while (!s.done) {
    const int a = greedy(env, s);
    const auto p = masked_softmax(net.forward(s.observation), s.action_mask);
    for (double q : p) ASSERT_LE(q, p[static_cast<std::size_t>(a)]);
    s = env.step(a);
  }
}
