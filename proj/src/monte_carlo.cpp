#include <algorithm>
#include <cmath>
#include <vector>

#include "ckpt/error.hpp"
#include "ckpt/simulator.hpp"
#include "superstep.hpp"

namespace ckpt {

namespace {

struct TrialPlan {
  bool explicit_attempts;
  double log_one_minus_q;  // for geometric sampling
};

TrialPlan plan_trials(const SimConfig& config, std::uint64_t trials,
                      const MonteCarloOptions& options) {
  if (trials < 1) throw Error(ErrorKind::InvalidConfig, "trials must be >= 1");
  if (!(config.tc > 0.0)) throw Error(ErrorKind::NonPositiveInterval, "tc must be > 0");
  if (!(config.ts >= 0.0)) throw Error(ErrorKind::InvalidConfig, "ts must be >= 0");
  config.spec.validate();
  // The success probability only decides which sampler is affordable and
  // parameterises the geometric shortcut.
  const double log_q = log_success_prob_all(config.failure_model.rate() * config.tc, config.spec);
  const double expected_attempts = std::exp(-log_q);
  if (expected_attempts <= options.explicit_attempt_cap) return {true, 0.0};
  const double q = std::exp(log_q);
  if (q == 0.0) {
    throw Error(ErrorKind::BudgetExceeded, "super-step success probability underflows");
  }
  return {false, std::log1p(-q)};
}

// Sum of attempt counts over one block of trials.
double attempts_for_block(const SimConfig& config, const TrialPlan& plan, std::uint64_t block,
                          std::uint64_t trials, std::uint64_t seed) {
  Engine engine(derive_seed(seed, block));
  const std::uint64_t begin = block * kBlockSize;
  const std::uint64_t end = std::min(trials, begin + kBlockSize);
  double sum = 0.0;
  for (std::uint64_t t = begin; t < end; ++t) {
    if (plan.explicit_attempts) {
      std::uint64_t attempts = 1;
      while (!detail::superstep_survives(config.spec, config.failure_model, config.tc, engine)) {
        ++attempts;
      }
      sum += static_cast<double>(attempts);
    } else {
      // Geometric number of attempts up to and including the first success.
      const double u = uniform_open01(engine);
      sum += 1.0 + std::floor(std::log(u) / plan.log_one_minus_q);
    }
  }
  return sum;
}

double finish(const SimConfig& config, double attempt_sum, std::uint64_t trials) {
  return config.tc * (attempt_sum / static_cast<double>(trials)) + config.ts;
}

}  // namespace

double monte_carlo_overhead_serial(const SimConfig& config, std::uint64_t trials,
                                   std::uint64_t seed, const MonteCarloOptions& options) {
  const TrialPlan plan = plan_trials(config, trials, options);
  const std::uint64_t blocks = (trials + kBlockSize - 1) / kBlockSize;
  double sum = 0.0;
  for (std::uint64_t b = 0; b < blocks; ++b) sum += attempts_for_block(config, plan, b, trials, seed);
  return finish(config, sum, trials);
}

double monte_carlo_overhead(const SimConfig& config, std::uint64_t trials, std::uint64_t seed,
                            const MonteCarloOptions& options) {
  const TrialPlan plan = plan_trials(config, trials, options);
  const auto blocks = static_cast<std::int64_t>((trials + kBlockSize - 1) / kBlockSize);
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < blocks; ++b) {
    partial[static_cast<std::size_t>(b)] =
        attempts_for_block(config, plan, static_cast<std::uint64_t>(b), trials, seed);
  }
  double sum = 0.0;
  for (double p : partial) sum += p;
  return finish(config, sum, trials);
}

}  // namespace ckpt
