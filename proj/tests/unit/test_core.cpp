#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "orl/binpack/env.hpp"
#include "orl/binpack/policies.hpp"
#include "orl/core/rng.hpp"
#include "orl/core/runner.hpp"
#include "orl/core/stats.hpp"
#include "orl/newsvendor/base_stock.hpp"
#include "orl/vrp/env.hpp"

using namespace orl;

namespace {

binpack::BinPackConfig threes(int horizon) {
  return {9, {{3}, {1.0}, binpack::DistributionClass::Custom}, horizon};
}

struct FirstAllowed {
  int operator()(const binpack::BinPackEnv&, const EnvStep& s) const {
    for (std::size_t k = 0; k < s.action_mask.size(); ++k)
      if (s.action_mask[k]) return static_cast<int>(k);
    return 0;
  }
};

struct AlwaysLevel {
  int level;
  int operator()(const binpack::BinPackEnv&, const EnvStep&) const { return level; }
};

EpisodeResult make_result(double r) {
  EpisodeResult e;
  e.total_reward = r;
  return e;
}

}  // namespace

TEST(RngStream, SameKeySameSequence) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(RngStream, DistinctStreamsDiffer) {
  RngStream a(42, 0), b(42, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a() == b();
  EXPECT_EQ(equal, 0);
}

TEST(RngStream, StreamsLookIndependent) {
  // Correlation of uniforms from neighbouring streams stays near zero.
  RngStream a(3, 10), b(3, 11);
  const int n = 100000;
  double sab = 0, sa = 0, sb = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sab += x * y;
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  EXPECT_LT(std::abs(corr), 0.02);
}

TEST(RngStream, ForkIsDeterministicAndDistinct) {
  RngStream a(5, 2);
  RngStream f1 = a.fork(1), f2 = a.fork(1), g = a.fork(2);
  a();
  RngStream f3 = a.fork(1);
  const auto x = f1();
  EXPECT_EQ(x, f2());
  EXPECT_EQ(x, f3());
  EXPECT_NE(x, g());
}

TEST(RngStream, CategoricalSkipsZeroWeights) {
  RngStream r(1, 1);
  const std::vector<double> p{0.0, 1.0, 0.0, 2.0, 0.0};
  for (int i = 0; i < 10000; ++i) {
    const auto j = r.categorical(p);
    ASSERT_TRUE(j == 1 || j == 3);
  }
  EXPECT_THROW(r.categorical(std::vector<double>{0.0, 0.0}), ConfigError);
}

TEST(RunEpisode, SingleItemForcesNewBin) {
  binpack::BinPackEnv env(threes(1));
  FirstAllowed policy;
  const auto r = run_episode(env, policy, RngStream(1, 0));
  EXPECT_EQ(r.total_reward, -6.0);
  EXPECT_EQ(r.steps, 1u);
}

TEST(RunEpisode, BestFitPacksThreesPerfectly) {
  binpack::BinPackEnv env(threes(9));
  binpack::BestFitPolicy policy;
  const auto r = run_episode(env, policy, RngStream(1, 0));
  EXPECT_EQ(r.total_reward, 0.0);
}

TEST(RunEpisode, RepeatIsBitIdentical) {
  const auto cfg = *binpack::presets::find("lw9");
  binpack::BinPackEnv e1(cfg), e2(cfg);
  binpack::SumOfSquaresPolicy p;
  const auto a = run_episode(e1, p, RngStream(9, 3), {true});
  const auto b = run_episode(e2, p, RngStream(9, 3), {true});
  EXPECT_EQ(a.total_reward, b.total_reward);
  EXPECT_EQ(a.per_step_rewards, b.per_step_rewards);
}

TEST(RunEpisode, RecordedRewardsSumToTotal) {
  binpack::BinPackEnv env(*binpack::presets::find("pp9"));
  binpack::BestFitPolicy p;
  const auto r = run_episode(env, p, RngStream(2, 0), {true});
  ASSERT_EQ(r.per_step_rewards.size(), r.steps);
  EXPECT_EQ(std::accumulate(r.per_step_rewards.begin(), r.per_step_rewards.end(), 0.0), r.total_reward);
}

TEST(RunEpisode, MaskedActionIsHardError) {
  binpack::BinPackEnv env(threes(5));
  AlwaysLevel bad{3};  // no bin at level 3 on the first step
  try {
    run_episode(env, bad, RngStream(1, 0));
    FAIL() << "expected InfeasibleAction";
  } catch (const InfeasibleAction& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("action 3"), std::string::npos);
    EXPECT_NE(what.find("step 0"), std::string::npos);
  }
}

TEST(Summarize, TwoValues) {
  const std::vector<EpisodeResult> rs{make_result(-1), make_result(-3)};
  const auto rep = summarize(rs);
  EXPECT_EQ(rep.mean, -2.0);
  EXPECT_EQ(rep.std, 1.0);
  EXPECT_EQ(rep.min, -3.0);
  EXPECT_EQ(rep.max, -1.0);
  EXPECT_EQ(rep.n, 2u);
}

TEST(Summarize, SingleValue) {
  const std::vector<EpisodeResult> rs{make_result(5)};
  const auto rep = summarize(rs);
  EXPECT_EQ(rep.mean, 5.0);
  EXPECT_EQ(rep.std, 0.0);
}

TEST(Summarize, EmptyIsError) {
  EXPECT_THROW(summarize(std::vector<EpisodeResult>{}), std::invalid_argument);
}

TEST(Summarize, MatchesNaiveTwoPass) {
  RngStream r(11, 0);
  std::vector<EpisodeResult> rs;
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) {
    xs.push_back(r.normal(-50.0, 7.0));
    rs.push_back(make_result(xs.back()));
  }
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= 100;
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const auto rep = summarize(rs);
  EXPECT_NEAR(rep.mean, mean, 1e-12);
  EXPECT_NEAR(rep.std, std::sqrt(var / 100), 1e-12);
  EXPECT_LE(rep.min, rep.mean);
  EXPECT_LE(rep.mean, rep.max);
}

TEST(Summarize, ConstantDataKeepsMeanInRange) {
  std::vector<EpisodeResult> rs(7, make_result(0.1));
  const auto rep = summarize(rs);
  EXPECT_GE(rep.mean, rep.min);
  EXPECT_LE(rep.mean, rep.max);
  EXPECT_GE(rep.std, 0.0);
}

TEST(RunBenchmark, SingleEpisodeHasZeroStd) {
  const auto cfg = *binpack::presets::find("bw9");
  const auto rep = run_benchmark([&] { return binpack::BinPackEnv(cfg); },
                                 [](RngStream) { return binpack::BestFitPolicy{}; }, 1, 4);
  binpack::BinPackEnv env(cfg);
  binpack::BestFitPolicy p;
  const auto single = run_episode(env, p, RngStream(4, 0));
  EXPECT_EQ(rep.mean, single.total_reward);
  EXPECT_EQ(rep.std, 0.0);
}

TEST(RunBenchmark, WorkerCountDoesNotChangeResults) {
  const auto cfg = *binpack::presets::find("lw100");
  auto make_env = [&] { return binpack::BinPackEnv(cfg); };
  auto make_policy = [](RngStream) { return binpack::SumOfSquaresPolicy{}; };
  const auto one = run_episodes(make_env, make_policy, 24, 99, {1});
  const auto eight = run_episodes(make_env, make_policy, 24, 99, {8});
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].total_reward, eight[i].total_reward);
    EXPECT_EQ(one[i].stream_index, i);
  }
}

TEST(RunBenchmark, ZeroEpisodesIsError) {
  const auto cfg = *binpack::presets::find("bw9");
  EXPECT_THROW(run_benchmark([&] { return binpack::BinPackEnv(cfg); },
                             [](RngStream) { return binpack::BestFitPolicy{}; }, 0, 1),
               std::invalid_argument);
}

TEST(RunBenchmark, EpisodeErrorCarriesIndex) {
  // Only episode 2 gets a policy that misbehaves.
  const auto cfg = threes(5);
  struct Policy {
    bool bad;
    int operator()(const binpack::BinPackEnv&, const EnvStep&) const { return bad ? 4 : 0; }
  };
  try {
    run_episodes([&] { return binpack::BinPackEnv(cfg); },
                 [](RngStream r) { return Policy{r.stream_index() == 2}; }, 5, 1, {3});
    FAIL() << "expected EpisodeError";
  } catch (const EpisodeError& e) {
    EXPECT_EQ(e.episode(), 2u);
  }
}

// Stepping any allowed action never raises; stepping any forbidden one
// always does. Checked on copies of the environment at random states.
template <class Env, class Pick>
void check_mask_soundness(Env env, RngStream rng, int steps, Pick pick_random) {
  EnvStep s = env.reset(rng.fork(5));
  RngStream choice = rng.fork(6);
  for (int i = 0; i < steps; ++i) {
    if (s.done) s = env.reset(rng.fork(100 + static_cast<std::uint64_t>(i)));
    const auto k = static_cast<int>(choice.uniform_int(0, static_cast<std::int64_t>(s.action_mask.size()) - 1));
    Env probe = env;
    if (s.action_mask[static_cast<std::size_t>(k)]) {
      ASSERT_NO_THROW(probe.step(k));
    } else {
      ASSERT_THROW(probe.step(k), InfeasibleAction);
    }
    s = env.step(pick_random(s, choice));
  }
}

int random_allowed(const EnvStep& s, RngStream& r) {
  std::vector<double> w(s.action_mask.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = s.action_mask[k] ? 1.0 : 0.0;
  return static_cast<int>(r.categorical(w));
}

TEST(MaskSoundness, BinPacking) {
  check_mask_soundness(binpack::BinPackEnv(*binpack::presets::find("bw9")), RngStream(1, 1), 10000, random_allowed);
}

TEST(MaskSoundness, Vrp) {
  check_mask_soundness(vrp::VrpEnv(vrp::CityConfig{}), RngStream(1, 2), 10000, random_allowed);
}

TEST(MaskSoundness, NewsvendorIsUnmasked) {
  newsvendor::NewsvendorEnv env(newsvendor::NewsvendorConfig{});
  RngStream r(1, 3);
  auto s = env.reset(r);
  for (int i = 0; i < 10000; ++i) {
    if (s.done) s = env.reset(r.fork(static_cast<std::uint64_t>(i)));
    ASSERT_EQ(s.action_mask, std::vector<bool>{true});
    s = env.step(r.uniform(0.0, 400.0));
  }
}
