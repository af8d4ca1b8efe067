#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ckpt/error.hpp"
#include "ckpt/overhead_model.hpp"
#include "ckpt/simulator.hpp"

namespace ckpt {
namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidConfig;
}

std::vector<TraceEvent> events_of(const SimResult& res, TraceKind kind, int process = -2) {
  std::vector<TraceEvent> out;
  for (const auto& ev : res.trace) {
    if (ev.kind == kind && (process == -2 || ev.process == process)) out.push_back(ev);
  }
  return out;
}

TEST(AcceptCheckpoint, TruthTable) {
  const double tc = 100.0;
  ServerCheckpointState server(2);
  EXPECT_FALSE(server.last_saved(0).has_value());
  EXPECT_EQ(server.last_saved_number(0), 0);
  EXPECT_EQ(accept_checkpoint(server, 0, 5, 0.0, tc), Decision::Save);
  // Stale replica: same number long after.
  EXPECT_EQ(accept_checkpoint(server, 0, 5, 10 * tc, tc), Decision::Ignore);
  EXPECT_EQ(accept_checkpoint(server, 0, 4, 10 * tc, tc), Decision::Ignore);
  // Newer but too soon, then after the interval.
  EXPECT_EQ(accept_checkpoint(server, 0, 6, 0.5 * tc, tc), Decision::Ignore);
  EXPECT_EQ(accept_checkpoint(server, 0, 6, tc, tc), Decision::Ignore);  // strict
  EXPECT_EQ(accept_checkpoint(server, 0, 6, 1.5 * tc, tc), Decision::Save);
  EXPECT_EQ(server.last_saved(0)->number, 6);
  EXPECT_EQ(server.last_saved(0)->time, 1.5 * tc);
  // Processes are independent.
  EXPECT_EQ(accept_checkpoint(server, 1, 1, 1.5 * tc, tc), Decision::Save);
}

SimConfig model_config(int n, int r, double tc, double ts, double rate, std::int64_t work) {
  SimConfig c;
  c.spec = {n, r};
  c.tc = tc;
  c.ts = ts;
  c.failure_model = ExponentialFailureModel::from_rate(rate);
  c.total_work = work;
  c.quantum_time = 1.0;
  c.mode = SimMode::model;
  return c;
}

TEST(ModelMode, FailureFreeIsExact) {
  const auto res = run(model_config(16, 2, 100.0, 1.0, 0.0, 1000), 5);
  EXPECT_EQ(res.completion_time, 1010.0);
  EXPECT_EQ(res.failures, 0);
  EXPECT_EQ(res.checkpoints_saved, 160);
  EXPECT_EQ(res.useful_work, 16 * 1000);
}

TEST(ModelMode, WorkMustDivideIntoIntervals) {
  EXPECT_EQ(kind_of([] { run(model_config(1, 1, 300.0, 1.0, 0.0, 1000), 1); }),
            ErrorKind::WorkNotDivisible);
}

TEST(ModelMode, MeanMatchesExpectedOverhead) {
  // lambda * tc = 0.5, single process.
  const auto config = model_config(1, 1, 100.0, 2.0, 0.005, 1000);
  const auto k = static_cast<double>(config.model_intervals());
  double sum = 0.0;
  constexpr int kSeeds = 10'000;
  for (int s = 0; s < kSeeds; ++s) sum += run(config, static_cast<std::uint64_t>(s)).completion_time;
  const double g = expected_overhead(config.tc, config.ts, config.failure_model, config.spec);
  EXPECT_NEAR(sum / kSeeds / k / g, 1.0, 0.02);
}

TEST(ModelMode, BudgetExceeded) {
  auto config = model_config(32, 1, 100.0, 1.0, 0.05, 1000);
  config.budget_factor = 2.0;
  EXPECT_EQ(kind_of([&] { run(config, 1); }), ErrorKind::BudgetExceeded);
}

TEST(ModelMode, Deterministic) {
  auto config = model_config(16, 2, 50.0, 1.0, 1e-3, 1000);
  config.record_trace = true;
  EXPECT_EQ(run(config, 77), run(config, 77));
  EXPECT_NE(run(config, 77).completion_time, run(config, 78).completion_time);
}

SimConfig volpex_config(int n, int r) {
  SimConfig c;
  c.spec = {n, r};
  c.tc = 25.0;
  c.ts = 0.0;
  c.total_work = 20;
  c.quantum_time = 10.0;
  c.heartbeat_timeout = 5.0;
  c.mode = SimMode::volpex;
  c.record_trace = true;
  return c;
}

TEST(VolpexMode, FailureFreeSaveSpacing) {
  for (double tc : {5.0, 25.0, 30.0, 95.0}) {
    for (int r : {1, 2}) {
      auto config = volpex_config(2, r);
      config.tc = tc;
      const auto res = run(config, 1);
      EXPECT_EQ(res.completion_time, 200.0);
      for (int p = 0; p < 2; ++p) {
        const auto saves = events_of(res, TraceKind::save, p);
        ASSERT_GE(saves.size(), 2u);
        for (std::size_t i = 1; i < saves.size(); ++i) {
          const double gap = saves[i].time - saves[i - 1].time;
          EXPECT_GT(gap, tc);
          EXPECT_GE(gap, config.quantum_time);
          EXPECT_LE(gap, std::max(tc, config.quantum_time) + config.quantum_time);
        }
      }
    }
  }
}

TEST(VolpexMode, SaveBlocksTheSaver) {
  auto config = volpex_config(1, 1);
  config.ts = 3.0;
  config.total_work = 4;
  config.tc = 1.0;
  const auto res = run(config, 1);
  // Units at 10, then each save adds 3 s before the next unit starts.
  EXPECT_EQ(res.completion_time, 4 * 10.0 + 3 * 3.0);
  EXPECT_EQ(res.checkpoints_saved, 3);
}

TEST(VolpexMode, LoneReplicaRestartsFromLastSave) {
  auto config = volpex_config(1, 1);
  config.scripted_failures = {{0, 0, 95.0}};
  const auto res = run(config, 1);
  auto saves = events_of(res, TraceKind::save);
  std::erase_if(saves, [](const TraceEvent& ev) { return ev.time > 95.0; });
  ASSERT_EQ(saves.size(), 3u);  // units 1, 4, 7 before the failure
  EXPECT_EQ(saves.back().detail, 7);
  const auto restarts = events_of(res, TraceKind::restart);
  ASSERT_EQ(restarts.size(), 1u);
  EXPECT_EQ(restarts[0].time, 100.0);  // failure + heartbeat timeout
  EXPECT_EQ(restarts[0].detail, 7);
  EXPECT_EQ(restarts[0].replica, 1);
  EXPECT_EQ(res.work_lost, 2);
  EXPECT_EQ(res.failures, 1);
  // 13 remaining units from t = 100.
  EXPECT_EQ(res.completion_time, 230.0);
}

TEST(VolpexMode, SurvivorTriggersReplacementAtNextSave) {
  auto config = volpex_config(1, 2);
  config.scripted_failures = {{0, 1, 95.0}};
  const auto res = run(config, 1);
  EXPECT_TRUE(events_of(res, TraceKind::restart).empty());
  const auto spawns = events_of(res, TraceKind::spawn);
  ASSERT_EQ(spawns.size(), 1u);
  EXPECT_EQ(spawns[0].time, 100.0);
  EXPECT_EQ(spawns[0].detail, 10);
  EXPECT_EQ(spawns[0].replica, 2);
  EXPECT_EQ(res.work_lost, 0);
  EXPECT_EQ(res.completion_time, 200.0);
}

TEST(VolpexMode, BothReplicasLostRestartsOneThenSpawnsTheOther) {
  auto config = volpex_config(1, 2);
  config.scripted_failures = {{0, 0, 91.0}, {0, 1, 95.0}};
  const auto res = run(config, 1);
  const auto restarts = events_of(res, TraceKind::restart);
  ASSERT_EQ(restarts.size(), 1u);
  EXPECT_EQ(restarts[0].time, 100.0);
  EXPECT_EQ(restarts[0].detail, 7);
  EXPECT_EQ(restarts[0].replica, 2);
  const auto spawns = events_of(res, TraceKind::spawn);
  ASSERT_EQ(spawns.size(), 1u);
  EXPECT_EQ(spawns[0].replica, 3);
  EXPECT_EQ(spawns[0].time, 110.0);  // restarted replica's unit 8
  EXPECT_EQ(spawns[0].detail, 8);
  EXPECT_EQ(res.work_lost, 2);
}

TEST(VolpexMode, ProcessesWaitForEachOther) {
  auto config = volpex_config(2, 1);
  config.scripted_failures = {{1, 0, 95.0}};
  const auto res = run(config, 1);
  const auto finishes = events_of(res, TraceKind::finish);
  ASSERT_EQ(finishes.size(), 2u);
  // The healthy process cannot get more than one unit ahead of the
  // restarted one.
  for (const auto& f : finishes) EXPECT_GT(f.time, 200.0);
  EXPECT_EQ(res.completion_time, 230.0);
}

SimConfig random_volpex(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SimConfig c;
  c.mode = SimMode::volpex;
  c.spec = {1 + static_cast<int>(6 * u(gen)), 1 + static_cast<int>(3 * u(gen))};
  c.quantum_time = 1.0 + 9.0 * u(gen);
  c.tc = c.quantum_time * (0.5 + 6.0 * u(gen));
  c.ts = 3.0 * u(gen);
  c.total_work = 20 + static_cast<std::int64_t>(60 * u(gen));
  c.heartbeat_timeout = 30.0 * u(gen);
  c.speed_spread = 0.5 * u(gen);
  c.failure_model = ExponentialFailureModel::from_rate((0.005 + 0.2 * u(gen)) / c.tc);
  c.record_trace = true;
  return c;
}

TEST(VolpexMode, RandomTracesKeepInvariants) {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 200; ++i) {
    const auto config = random_volpex(gen);
    const auto res = run(config, static_cast<std::uint64_t>(i));
    EXPECT_EQ(count_server_rule_violations(res.trace, config.tc), 0);
    EXPECT_EQ(res.useful_work, config.spec.n * config.total_work);
    for (const auto& ev : res.trace) EXPECT_LE(ev.detail, config.total_work);
    EXPECT_GT(res.completion_time, 0.0);
    EXPECT_EQ(static_cast<std::int64_t>(events_of(res, TraceKind::save).size()),
              res.checkpoints_saved);
  }
}

TEST(VolpexMode, Deterministic) {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 20; ++i) {
    const auto config = random_volpex(gen);
    EXPECT_EQ(run(config, 1234), run(config, 1234));
  }
}

// Replication pays off once failures are frequent relative to the interval.
TEST(VolpexMode, ReplicationBeatsRestartAtHighFailureRate) {
  SimConfig c;
  c.mode = SimMode::volpex;
  c.quantum_time = 10.0;
  c.tc = 100.0;
  c.ts = 2.0;
  c.total_work = 100;
  c.heartbeat_timeout = 60.0;
  c.failure_model = ExponentialFailureModel::from_rate(0.2 / c.tc);
  constexpr int kSeeds = 1000;
  auto stats = [&](int r) {
    c.spec = {4, r};
    double sum = 0.0;
    double sq = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
      const double t = run(c, static_cast<std::uint64_t>(s)).completion_time;
      sum += t;
      sq += t * t;
    }
    const double mean = sum / kSeeds;
    return std::pair{mean, (sq / kSeeds - mean * mean) / kSeeds};
  };
  const auto [m1, v1] = stats(1);
  const auto [m2, v2] = stats(2);
  EXPECT_LT(m2 + 3 * std::sqrt(v1 + v2), m1);
}

TEST(Trace, CsvHeaderAndRows) {
  auto config = volpex_config(1, 1);
  config.total_work = 2;
  const auto res = run(config, 1);
  std::ostringstream out;
  write_trace_csv(out, res.trace);
  EXPECT_EQ(out.str(), "time_s,event,process,replica,detail\n10,save,0,0,1\n20,finish,0,0,2\n");
}

TEST(Config, Validation) {
  auto config = volpex_config(1, 1);
  config.tc = 0.0;
  EXPECT_EQ(kind_of([&] { run(config, 1); }), ErrorKind::InvalidConfig);
  config = volpex_config(1, 1);
  config.speed_spread = 1.0;
  EXPECT_EQ(kind_of([&] { run(config, 1); }), ErrorKind::InvalidConfig);
  config = volpex_config(1, 1);
  config.total_work = 0;
  EXPECT_EQ(kind_of([&] { run(config, 1); }), ErrorKind::InvalidConfig);
}

}  // namespace
}  // namespace ckpt
