// orl: benchmark, train, evaluate and cross-check the environments.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "orl/binpack/distribution.hpp"
#include "orl/binpack/env.hpp"
#include "orl/binpack/policies.hpp"
#include "orl/core/runner.hpp"
#include "orl/learn/checkpoint.hpp"
#include "orl/learn/gradient_check.hpp"
#include "orl/learn/policy.hpp"
#include "orl/learn/policy_gradient.hpp"
#include "orl/learn/trainer.hpp"
#include "orl/newsvendor/base_stock.hpp"
#include "orl/newsvendor/env.hpp"
#include "orl/oracles/mip_exhaustive.hpp"
#include "orl/oracles/poisson_quantile.hpp"
#include "orl/oracles/ss_potential.hpp"
#include "orl/vrp/city.hpp"
#include "orl/vrp/env.hpp"
#include "orl/vrp_mip/controller.hpp"
#include "orl/vrp_mip/solver.hpp"

namespace fs = std::filesystem;
using namespace orl;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("ORL_SEED")) {
    std::uint64_t v = 0;
    const std::string str(s);
    const auto res = std::from_chars(str.data(), str.data() + str.size(), v);
    if (res.ec != std::errc{} || res.ptr != str.data() + str.size())
      throw UsageError("ORL_SEED must be a non-negative integer, got '" + str + "'");
    return v;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Environment selection

struct EnvOptions {
  std::string id;
  std::optional<int> horizon;
  std::optional<int> bin_size;
  std::vector<int> item_sizes;
  std::vector<double> item_probs;
  std::optional<int> lead_time;
  std::optional<double> discount;
  std::optional<double> max_order;
  std::vector<double> fixed_params;
  std::optional<double> order_prob;
  std::optional<int> mip_cap;

  void add_to(CLI::App* app) {
    app->add_option("--env", id, "Environment: binpack:<preset>, newsvendor:default|fixed, vrp:<preset>")->required();
    app->add_option("--horizon", horizon, "Override episode length")->check(CLI::PositiveNumber);
    app->add_option("--bin-size", bin_size, "binpack: bin size for binpack:custom");
    app->add_option("--item-sizes", item_sizes, "binpack: item sizes for binpack:custom")->delimiter(',');
    app->add_option("--item-probs", item_probs, "binpack: item probabilities for binpack:custom")->delimiter(',');
    app->add_option("--lead-time", lead_time, "newsvendor: lead time");
    app->add_option("--discount", discount, "newsvendor: discount factor");
    app->add_option("--max-order", max_order, "newsvendor: scale of learner actions");
    app->add_option("--fixed-params", fixed_params, "newsvendor: price,cost,holding,penalty,mean")->delimiter(',');
    app->add_option("--order-prob", order_prob, "vrp: order arrival probability per step");
    app->add_option("--mip-cap", mip_cap, "vrp: orders per MIP re-solve")->check(CLI::PositiveNumber);
  }
};

using EnvConfig = std::variant<binpack::BinPackConfig, newsvendor::NewsvendorConfig, vrp::CityConfig>;

EnvConfig resolve_env(const EnvOptions& o) {
  const auto colon = o.id.find(':');
  if (colon == std::string::npos) throw UsageError("--env must look like <problem>:<preset>, got '" + o.id + "'");
  const std::string problem = o.id.substr(0, colon), preset = o.id.substr(colon + 1);
  if (problem == "binpack") {
    binpack::BinPackConfig cfg;
    if (preset == "custom") {
      if (!o.bin_size || o.item_sizes.empty() || o.item_probs.empty())
        throw UsageError("binpack:custom needs --bin-size, --item-sizes and --item-probs");
      cfg.bin_size = *o.bin_size;
      cfg.items = {o.item_sizes, o.item_probs, binpack::DistributionClass::Custom};
    } else if (auto p = binpack::presets::find(preset)) {
      cfg = *p;
    } else {
      throw UsageError("unknown binpack preset '" + preset + "' (see `orl presets`)");
    }
    if (o.horizon) cfg.horizon = *o.horizon;
    cfg.validate();
    return cfg;
  }
  if (problem == "newsvendor") {
    newsvendor::NewsvendorConfig cfg;
    if (preset == "fixed") {
      cfg.fixed = newsvendor::slice_params();
    } else if (preset != "default") {
      throw UsageError("unknown newsvendor preset '" + preset + "' (default or fixed)");
    }
    if (!o.fixed_params.empty()) {
      if (o.fixed_params.size() != 5) throw UsageError("--fixed-params needs 5 values: price,cost,holding,penalty,mean");
      const auto& f = o.fixed_params;
      cfg.fixed = newsvendor::EconomicParams{f[0], f[1], f[2], f[3], f[4]};
    }
    if (o.horizon) cfg.horizon = *o.horizon;
    if (o.lead_time) cfg.lead_time = *o.lead_time;
    if (o.discount) cfg.discount = *o.discount;
    if (o.max_order) cfg.max_order = *o.max_order;
    cfg.validate();
    return cfg;
  }
  if (problem == "vrp") {
    auto p = vrp::presets::find(preset);
    if (!p) throw UsageError("unknown vrp preset '" + preset + "' (see `orl presets`)");
    vrp::CityConfig cfg = *p;
    if (o.horizon) cfg.episode_len = *o.horizon;
    if (o.order_prob) cfg.order_prob = *o.order_prob;
    cfg.validate();
    return cfg;
  }
  throw UsageError("unknown problem '" + problem + "' (binpack, newsvendor or vrp)");
}

// ---------------------------------------------------------------------------
// Policies

template <class Env>
struct RandomPolicy {
  RngStream rng;
  typename Env::Action operator()(const Env& env, const EnvStep& step) {
    if constexpr (DiscreteEnvironment<Env>) {
      std::vector<double> w(step.action_mask.size());
      for (std::size_t k = 0; k < w.size(); ++k) w[k] = step.action_mask[k] ? 1.0 : 0.0;
      return static_cast<int>(rng.categorical(w));
    } else {
      return rng.uniform(0.0, learn::action_scale(env));
    }
  }
};

learn::Checkpoint load_matching(const std::string& path, std::size_t obs_size, std::size_t out_size,
                                learn::HeadKind kind) {
  if (!fs::exists(path)) throw UsageError("checkpoint not found: " + path);
  auto ck = learn::load_checkpoint(path);
  if (ck.net.input_size() != obs_size || ck.net.output_size() != out_size || ck.head.kind != kind)
    throw UsageError("checkpoint " + path + " does not fit this environment (input " +
                     std::to_string(ck.net.input_size()) + " vs " + std::to_string(obs_size) + ", output " +
                     std::to_string(ck.net.output_size()) + " vs " + std::to_string(out_size) + ")");
  return ck;
}

template <class Env>
std::pair<std::size_t, std::size_t> network_shape(const Env& probe_env) {
  Env env = probe_env;
  const auto first = env.reset(RngStream(0, 0));
  return {first.observation.size(), DiscreteEnvironment<Env> ? env.action_count() : 1};
}

template <class Env, class Cfg>
std::vector<EpisodeResult> run_policy(const Cfg& cfg, const std::string& policy, std::size_t episodes,
                                      std::uint64_t seed, unsigned workers, bool greedy,
                                      std::optional<int> mip_cap) {
  auto make_env = [&] { return Env(cfg); };
  const RunOptions opts{workers, false};
  if (policy == "random")
    return run_episodes(make_env, [](RngStream r) { return RandomPolicy<Env>{std::move(r)}; }, episodes, seed, opts);
  if (policy.rfind("learned:", 0) == 0) {
    const auto [obs, out] = network_shape(Env(cfg));
    const auto ck = load_matching(policy.substr(8), obs, out, learn::head_kind_for<Env>());
    return run_episodes(
        make_env, [&](RngStream r) { return learn::LearnedPolicy<Env>(ck.net, ck.head, std::move(r), !greedy); },
        episodes, seed, opts);
  }
  if constexpr (std::is_same_v<Env, binpack::BinPackEnv>) {
    if (policy == "best_fit")
      return run_episodes(make_env, [](RngStream) { return binpack::BestFitPolicy{}; }, episodes, seed, opts);
    if (policy == "sum_of_squares")
      return run_episodes(make_env, [](RngStream) { return binpack::SumOfSquaresPolicy{}; }, episodes, seed, opts);
  }
  if constexpr (std::is_same_v<Env, newsvendor::NewsvendorEnv>) {
    if (policy == "base_stock")
      return run_episodes(make_env, [](RngStream) { return newsvendor::BaseStockPolicy{}; }, episodes, seed, opts);
  }
  if constexpr (std::is_same_v<Env, vrp::VrpEnv>) {
    if (policy == "mip") {
      const auto cap = static_cast<std::size_t>(mip_cap.value_or(6));
      return run_episodes(make_env, [cap](RngStream) { return vrp_mip::MipController(cap); }, episodes, seed, opts);
    }
  }
  throw UsageError("policy '" + policy + "' is not available for this environment");
}

std::vector<EpisodeResult> run_any(const EnvConfig& env, const std::string& policy, std::size_t episodes,
                                   std::uint64_t seed, unsigned workers, bool greedy, std::optional<int> mip_cap) {
  return std::visit(
      [&](const auto& cfg) {
        using Cfg = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<Cfg, binpack::BinPackConfig>)
          return run_policy<binpack::BinPackEnv>(cfg, policy, episodes, seed, workers, greedy, mip_cap);
        else if constexpr (std::is_same_v<Cfg, newsvendor::NewsvendorConfig>)
          return run_policy<newsvendor::NewsvendorEnv>(cfg, policy, episodes, seed, workers, greedy, mip_cap);
        else
          return run_policy<vrp::VrpEnv>(cfg, policy, episodes, seed, workers, greedy, mip_cap);
      },
      env);
}

// ---------------------------------------------------------------------------
// Output

// Writes every file to a temporary name first and renames only once all of
// them are complete, so a failure leaves no partial outputs behind.
void write_all(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> temps;
  try {
    for (const auto& [path, text] : files) {
      const std::string tmp = path + ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + path);
      temps.push_back(tmp);
      out << text;
      if (!out.flush()) throw std::runtime_error("cannot write " + path);
    }
    for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].first);
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
    throw;
  }
}

std::string report_json(const BenchmarkReport& r) {
  nlohmann::ordered_json j;
  j["policy"] = r.policy;
  j["env"] = r.env;
  j["n"] = r.n;
  j["mean"] = r.mean;
  j["std"] = r.std;
  j["min"] = r.min;
  j["max"] = r.max;
  j["seed"] = r.master_seed;
  return j.dump(2) + "\n";
}

std::string episodes_csv(const std::vector<EpisodeResult>& results) {
  std::ostringstream out;
  out << "episode,master_seed,stream_index,total_reward,steps\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out << i << ',' << r.master_seed << ',' << r.stream_index << ',' << num(r.total_reward) << ',' << r.steps << '\n';
  }
  return out.str();
}

void print_row(const BenchmarkReport& r) {
  std::ostringstream row;
  row << std::fixed << std::setprecision(3);
  row << r.env << "  " << r.policy << "  n=" << r.n << "  mean=" << r.mean << "  std=" << r.std << "  min=" << r.min
      << "  max=" << r.max << "  seed=" << r.master_seed;
  std::cout << row.str() << "\n";
}

// ---------------------------------------------------------------------------
// Commands

struct BenchArgs {
  EnvOptions env;
  std::string policy;
  long long episodes = 100;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string json_path, csv_path;
  bool greedy = false;
};

int cmd_bench(const BenchArgs& a) {
  if (a.episodes < 1) throw UsageError("--episodes must be >= 1");
  const auto env = resolve_env(a.env);
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();
  const auto results = run_any(env, a.policy, static_cast<std::size_t>(a.episodes), seed, a.workers, a.greedy,
                               a.env.mip_cap);
  auto report = summarize(results);
  report.policy = a.policy;
  report.env = a.env.id;
  report.master_seed = seed;
  std::vector<std::pair<std::string, std::string>> files;
  if (!a.json_path.empty()) files.emplace_back(a.json_path, report_json(report));
  if (!a.csv_path.empty()) files.emplace_back(a.csv_path, episodes_csv(results));
  write_all(files);
  print_row(report);
  return 0;
}

struct TrainArgs {
  EnvOptions env;
  learn::TrainerConfig trainer;
  int iterations = 500;
  std::optional<double> seconds;
  int checkpoint_every = 50;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string out_dir;
  std::string resume;
};

template <class Env, class Cfg>
int train_env(const Cfg& cfg, const TrainArgs& a, std::uint64_t seed) {
  auto make_env = [&] { return Env(cfg); };
  std::optional<learn::Checkpoint> resume;
  if (!a.resume.empty()) {
    const auto [obs, out] = network_shape(Env(cfg));
    resume = load_matching(a.resume, obs, out, learn::head_kind_for<Env>());
  }
  const fs::path dir(a.out_dir);
  std::vector<learn::CurvePoint> curve;
  auto on_iteration = [&](const learn::Checkpoint& st, const learn::CurvePoint&) {
    if (a.checkpoint_every > 0 && st.iteration % a.checkpoint_every == 0)
      learn::save_checkpoint((dir / ("checkpoint-" + std::to_string(st.iteration) + ".ckpt")).string(), st);
  };
  const auto result =
      learn::train(make_env, a.trainer, learn::TrainBudget{a.iterations, a.seconds}, seed, a.workers, resume, on_iteration);

  std::ostringstream csv;
  csv << "iteration,mean_reward,min,max\n";
  for (const auto& p : result.curve)
    csv << p.iteration << ',' << num(p.mean_reward) << ',' << num(p.min_reward) << ',' << num(p.max_reward) << '\n';
  std::ostringstream final_ck;
  learn::write_checkpoint(final_ck, result.state);
  write_all({{(dir / "curve.csv").string(), csv.str()}, {(dir / "final.ckpt").string(), final_ck.str()}});

  if (!result.curve.empty()) {
    const auto& last = result.curve.back();
    std::cout << "iterations=" << result.state.iteration << "  last_mean=" << num(last.mean_reward)
              << "  last_min=" << num(last.min_reward) << "  last_max=" << num(last.max_reward) << "\n";
  }
  return 0;
}

int cmd_train(const TrainArgs& a) {
  if (a.iterations < 0) throw UsageError("--iterations must be >= 0");
  try {
    a.trainer.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto env = resolve_env(a.env);
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  const fs::path probe = fs::path(a.out_dir) / ".orl-write-test";
  {
    std::ofstream out(probe);
    if (ec || !out) throw std::runtime_error("output directory is not writable: " + a.out_dir);
  }
  fs::remove(probe, ec);
  return std::visit(
      [&](const auto& cfg) {
        using Cfg = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<Cfg, binpack::BinPackConfig>)
          return train_env<binpack::BinPackEnv>(cfg, a, seed);
        else if constexpr (std::is_same_v<Cfg, newsvendor::NewsvendorConfig>)
          return train_env<newsvendor::NewsvendorEnv>(cfg, a, seed);
        else
          return train_env<vrp::VrpEnv>(cfg, a, seed);
      },
      env);
}

// ---------------------------------------------------------------------------
// Oracle suites

int oracle_ss_equivalence(std::uint64_t seed) {
  std::size_t states = 0, mismatches = 0, subset_failures = 0;
  std::optional<std::string> example;
  for (const char* name : {"bw9", "pp9", "lw9", "bw100", "pp100", "lw100"}) {
    for (std::uint64_t ep = 0; ep < 20; ++ep) {
      binpack::BinPackEnv env(*binpack::presets::find(name));
      RngStream pick(seed, 1000 + ep, 1);
      auto step = env.reset(RngStream(seed, ep));
      while (!step.done) {
        const auto& s = env.state();
        const auto diff = oracles::difference_argmin(s);
        const auto pot = oracles::potential_argmin(s);
        ++states;
        for (int h : pot)
          if (std::find(diff.begin(), diff.end(), h) == diff.end()) ++subset_failures;
        if (diff != pot) {
          ++mismatches;
          if (!example) {
            std::ostringstream msg;
            msg << name << " item=" << s.current_item << " counts:";
            for (int h = 1; h < s.bin_size; ++h)
              if (s.count(h)) msg << " N" << h << "=" << s.count(h);
            msg << "  difference-argmin={";
            for (int h : diff) msg << ' ' << h;
            msg << " }  potential-argmin={";
            for (int h : pot) msg << ' ' << h;
            msg << " }";
            example = msg.str();
          }
        }
        std::vector<double> w(step.action_mask.size());
        for (std::size_t k = 0; k < w.size(); ++k) w[k] = step.action_mask[k];
        step = env.step(pick.bernoulli(0.5) ? binpack::sum_of_squares(s) : static_cast<int>(pick.categorical(w)));
      }
    }
  }
  std::cout << "states=" << states << "  set_mismatches=" << mismatches
            << "  potential_not_subset=" << subset_failures << "\n";
  if (example) std::cout << "counterexample: " << *example << "\n";
  return mismatches == 0 && subset_failures == 0 ? 0 : 1;
}

int oracle_mip_exhaustive(std::uint64_t seed, int count) {
  RngStream rng(seed, 0);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto inst = vrp_mip::random_instance(rng);
    const auto a = vrp_mip::solve(inst);
    const auto b = oracles::exhaustive_oracle(inst);
    const auto problems = vrp_mip::verify(inst, a);
    const double gap = std::abs(a.objective - b.objective);
    worst = std::max(worst, gap);
    if (gap > 1e-9 || !problems.empty()) {
      if (failures++ == 0) {
        std::cout << "counterexample (instance " << i << "): solver " << num(a.objective) << " oracle "
                  << num(b.objective) << "\n";
        for (const auto& p : problems) std::cout << "  " << p << "\n";
        vrp_mip::write_instance(std::cout, inst);
      }
    }
  }
  std::cout << "instances=" << count << "  failures=" << failures << "  max_gap=" << num(worst) << "\n";
  return failures == 0 ? 0 : 1;
}

int oracle_poisson_quantile(std::uint64_t seed) {
  struct Pin {
    double mean, q;
  };
  const std::vector<Pin> pins{{2, 0.5}, {500, 30.0 / 30.5}, {500, 0.5}, {1000, 0.99}, {0.5, 0.9}, {100, 0.983607}, {5, 0.999}};
  int failures = 0;
  for (const auto& p : pins) {
    const auto fast = newsvendor::poisson_inv_cdf(p.mean, p.q);
    const auto ref = oracles::poisson_quantile_extended(p.mean, p.q);
    std::cout << "mean=" << num(p.mean) << "  q=" << num(p.q) << "  z*=" << fast << "  oracle=" << ref
              << (fast == ref ? "" : "  MISMATCH") << "\n";
    failures += fast != ref;
  }
  RngStream rng(seed, 0);
  for (int i = 0; i < 500; ++i) {
    const double mean = rng.uniform(0.0, 1000.0), q = rng.uniform(0.0, 0.999);
    const auto fast = newsvendor::poisson_inv_cdf(mean, q);
    const auto ref = oracles::poisson_quantile_extended(mean, q);
    if (fast != ref && failures++ == 0)
      std::cout << "counterexample: mean=" << num(mean) << " q=" << num(q) << " fast=" << fast << " oracle=" << ref << "\n";
  }
  std::cout << "random_checks=500  failures=" << failures << "\n";
  return failures == 0 ? 0 : 1;
}

int oracle_gradient_check(std::uint64_t seed) {
  RngStream rng(seed, 0);
  const double tol = 1e-4;
  int failures = 0;
  auto report = [&](const char* name, const learn::GradientCheckResult& r) {
    std::cout << name << "  max_relative_error=" << num(r.max_relative_error) << "  checked=" << r.checked << "\n";
    failures += !(r.max_relative_error <= tol);
  };

  // Masked cross-entropy on random data.
  auto net = learn::Mlp::random({6, 16, 8, 5}, rng, 1.0);
  std::vector<std::vector<double>> obs;
  std::vector<std::vector<bool>> masks;
  std::vector<int> targets;
  for (int i = 0; i < 32; ++i) {
    std::vector<double> o(6);
    for (auto& v : o) v = rng.normal(0, 1);
    std::vector<bool> m(5);
    for (std::size_t k = 0; k < 5; ++k) m[k] = rng.bernoulli(0.6);
    const auto t = static_cast<std::size_t>(rng.uniform_int(0, 4));
    m[t] = true;
    obs.push_back(o);
    masks.push_back(m);
    targets.push_back(static_cast<int>(t));
  }
  learn::LossFunction ce = [&](std::span<const double> p, std::vector<double>* g) {
    learn::Mlp copy(net.layer_sizes(), std::vector<double>(p.begin(), p.end()));
    return learn::masked_cross_entropy(copy, obs, masks, targets, g);
  };
  report("masked-cross-entropy", learn::gradient_check({net.parameters().begin(), net.parameters().end()}, ce, rng, 256));

  // Clipped surrogate on a batch recorded from bin packing.
  binpack::BinPackConfig cfg = *binpack::presets::find("bw9");
  cfg.horizon = 12;
  const auto [obs_size, n_actions] = network_shape(binpack::BinPackEnv(cfg));
  auto pnet = learn::Mlp::random({static_cast<int>(obs_size), 16, 8, static_cast<int>(n_actions)}, rng, 1.0);
  learn::PolicyHead head;
  std::vector<learn::Trajectory> batch;
  for (std::uint64_t e = 0; e < 6; ++e) {
    binpack::BinPackEnv env(cfg);
    RngStream er(seed, 100 + e);
    batch.push_back(learn::collect_episode(env, pnet, head, er, er.fork(1)));
  }
  const auto samples = learn::make_samples(batch, 0.995);
  std::vector<double> shifted(pnet.parameters().begin(), pnet.parameters().end());
  for (auto& v : shifted) v += rng.normal(0, 0.01);
  learn::LossFunction sur = [&](std::span<const double> p, std::vector<double>* g) {
    learn::Mlp copy(pnet.layer_sizes(), std::vector<double>(p.begin(), p.end()));
    return learn::surrogate(copy, head, samples, 0.3, 0.01, g);
  };
  report("clipped-surrogate", learn::gradient_check(shifted, sur, rng, 256));
  return failures == 0 ? 0 : 1;
}

int cmd_presets() {
  std::cout << "binpack:\n";
  for (const auto& p : binpack::presets::all())
    std::cout << "  binpack:" << p.name << "  T=" << p.config.horizon << "  " << p.description << "\n";
  std::cout << "  binpack:custom  (--bin-size, --item-sizes, --item-probs)\n";
  std::cout << "newsvendor:\n  newsvendor:default  parameters sampled per episode\n"
               "  newsvendor:fixed  price 50, cost 25, holding 0.5, penalty 5, mean demand 100\n";
  std::cout << "vrp:\n";
  for (const auto& p : vrp::presets::all())
    std::cout << "  vrp:" << p.name << "  " << p.config.width << "x" << p.config.height << ", " << p.config.max_orders
              << " order slots, " << p.config.n_pickup << " restaurants\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online stochastic optimisation benchmarks: bin packing, newsvendor, vehicle routing"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file with one [section] per subcommand; flags override it");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.footer(
      "Master seed defaults to $ORL_SEED, else 0.\n"
      "bench/eval CSV columns: episode,master_seed,stream_index,total_reward,steps\n"
      "train curve.csv columns: iteration,mean_reward,min,max (per-iteration batch statistics)\n"
      "Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a policy for N episodes and summarise");
  bench.env.add_to(b);
  b->add_option("--policy", bench.policy,
                "best_fit | sum_of_squares | base_stock | mip | random | learned:<checkpoint>")
      ->required();
  b->add_option("--episodes", bench.episodes, "Number of episodes")->capture_default_str();
  b->add_option("--seed", bench.seed, "Master seed");
  b->add_option("--workers", bench.workers, "Worker threads (results do not depend on it)")->capture_default_str();
  b->add_option("--json", bench.json_path, "Write the summary report as JSON");
  b->add_option("--csv", bench.csv_path, "Write per-episode results as CSV");
  b->add_flag("--greedy", bench.greedy, "Learned policies act greedily");

  BenchArgs eval;
  std::string eval_ckpt;
  auto* e = app.add_subcommand("eval", "Evaluate a trained checkpoint (bench with a learned policy)");
  eval.env.add_to(e);
  e->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  e->add_option("--episodes", eval.episodes, "Number of episodes")->capture_default_str();
  e->add_option("--seed", eval.seed, "Master seed");
  e->add_option("--workers", eval.workers, "Worker threads")->capture_default_str();
  e->add_option("--json", eval.json_path, "Write the summary report as JSON");
  e->add_option("--csv", eval.csv_path, "Write per-episode results as CSV");
  e->add_flag("--greedy", eval.greedy, "Act greedily instead of sampling");

  TrainArgs train;
  std::string hidden = "64,32";
  auto* t = app.add_subcommand("train", "Train a masked policy-gradient agent");
  train.env.add_to(t);
  t->add_option("--out-dir", train.out_dir, "Directory for checkpoints and curve.csv")->required();
  t->add_option("--iterations", train.iterations, "Collect/update iterations")->capture_default_str();
  t->add_option("--seconds", train.seconds, "Wall-clock budget (makes output timing dependent)");
  t->add_option("--checkpoint-every", train.checkpoint_every, "Checkpoint interval in iterations (0: final only)")
      ->capture_default_str();
  t->add_option("--resume", train.resume, "Continue from a checkpoint");
  t->add_option("--seed", train.seed, "Master seed");
  t->add_option("--workers", train.workers, "Worker threads for collection")->capture_default_str();
  t->add_option("--lr", train.trainer.learning_rate, "Adam learning rate")->capture_default_str();
  t->add_option("--gamma", train.trainer.gamma, "Discount factor")->capture_default_str();
  t->add_option("--batch", train.trainer.batch_episodes, "Episodes per update")->capture_default_str();
  t->add_option("--clip", train.trainer.clip, "Surrogate clip parameter")->capture_default_str();
  t->add_option("--epochs", train.trainer.epochs, "Passes over each batch")->capture_default_str();
  t->add_option("--entropy", train.trainer.entropy_coef, "Entropy bonus coefficient")->capture_default_str();
  t->add_option("--sigma", train.trainer.sigma, "Gaussian head standard deviation")->capture_default_str();
  t->add_option("--hidden", hidden, "Hidden layer sizes, comma separated")->capture_default_str();

  std::string suite;
  std::optional<std::uint64_t> oracle_seed;
  int oracle_count = 100;
  auto* o = app.add_subcommand("oracle", "Cross-check implementations against independent oracles");
  o->add_option("suite", suite, "ss-equivalence | mip-exhaustive | poisson-quantile | gradient-check")
      ->required()
      ->check(CLI::IsMember({"ss-equivalence", "mip-exhaustive", "poisson-quantile", "gradient-check"}));
  o->add_option("--seed", oracle_seed, "Master seed");
  o->add_option("--count", oracle_count, "Instances for mip-exhaustive")->capture_default_str()->check(CLI::PositiveNumber);

  app.add_subcommand("presets", "List built-in environment presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (b->parsed()) return cmd_bench(bench);
    if (e->parsed()) {
      eval.policy = "learned:" + eval_ckpt;
      return cmd_bench(eval);
    }
    if (t->parsed()) {
      train.trainer.hidden.clear();
      std::stringstream ss(hidden);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        int v = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || v < 1)
          throw UsageError("--hidden must be positive integers separated by commas");
        train.trainer.hidden.push_back(v);
      }
      return cmd_train(train);
    }
    if (o->parsed()) {
      const std::uint64_t seed = oracle_seed ? *oracle_seed : default_seed();
      if (suite == "ss-equivalence") return oracle_ss_equivalence(seed);
      if (suite == "mip-exhaustive") return oracle_mip_exhaustive(seed, oracle_count);
      if (suite == "poisson-quantile") return oracle_poisson_quantile(seed);
      return oracle_gradient_check(seed);
    }
    return cmd_presets();
  } catch (const UsageError& err) {
    std::cerr << "orl: " << err.what() << "\n";
    return 2;
  } catch (const ConfigError& err) {
    std::cerr << "orl: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "orl: " << err.what() << "\n";
    return 1;
  }
}
