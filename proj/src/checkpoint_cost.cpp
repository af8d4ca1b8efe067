#include "ckpt/checkpoint_cost.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ckpt/csv.hpp"
#include "ckpt/error.hpp"
#include "ckpt/random.hpp"

namespace ckpt {

void CheckpointCost::validate() const {
  for (double part : {client_time, latency, upload, ack}) {
    if (!(part >= 0.0) || !std::isfinite(part)) {
      throw Error(ErrorKind::InvalidConfig, "checkpoint cost components must be >= 0");
    }
  }
}

double total_cost(const CheckpointCost& cost) {
  cost.validate();
  return cost.client_time + cost.latency + cost.upload + cost.ack;
}

namespace {

void check_ts_inputs(std::span<const double> samples, int n, int r, std::uint64_t iterations) {
  if (samples.empty()) throw Error(ErrorKind::EmptyLog, "cost sample log is empty");
  if (n < 1 || r < 1) throw Error(ErrorKind::InvalidConfig, "n and r must be >= 1");
  if (iterations < 1) throw Error(ErrorKind::InvalidConfig, "iterations must be >= 1");
}

// Sum of per-iteration maxima for one block of iterations.
double max_sum_for_block(std::span<const double> samples, std::uint64_t draws,
                         std::uint64_t block, std::uint64_t iterations, std::uint64_t seed) {
  Engine engine(derive_seed(seed, block));
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  const std::uint64_t begin = block * kBlockSize;
  const std::uint64_t end = std::min(iterations, begin + kBlockSize);
  double sum = 0.0;
  for (std::uint64_t it = begin; it < end; ++it) {
    double worst = samples[pick(engine)];
    for (std::uint64_t d = 1; d < draws; ++d) worst = std::max(worst, samples[pick(engine)]);
    sum += worst;
  }
  return sum;
}

std::uint64_t block_count(std::uint64_t iterations) {
  return (iterations + kBlockSize - 1) / kBlockSize;
}

}  // namespace

double estimate_ts_serial(std::span<const double> samples, int n, int r,
                          std::uint64_t iterations, std::uint64_t seed) {
  check_ts_inputs(samples, n, r, iterations);
  const auto draws = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(r);
  double total = 0.0;
  for (std::uint64_t b = 0; b < block_count(iterations); ++b) {
    total += max_sum_for_block(samples, draws, b, iterations, seed);
  }
  return total / static_cast<double>(iterations);
}

double estimate_ts(std::span<const double> samples, int n, int r, std::uint64_t iterations,
                   std::uint64_t seed) {
  check_ts_inputs(samples, n, r, iterations);
  const auto draws = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(r);
  const auto blocks = static_cast<std::int64_t>(block_count(iterations));
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < blocks; ++b) {
    partial[static_cast<std::size_t>(b)] =
        max_sum_for_block(samples, draws, static_cast<std::uint64_t>(b), iterations, seed);
  }
  // Ordered reduction keeps the result identical to the serial path.
  double total = 0.0;
  for (double p : partial) total += p;
  return total / static_cast<double>(iterations);
}

std::vector<double> read_cost_samples(std::istream& in) {
  const auto rows = csv::read_table(in, {"save_time_seconds"});
  std::vector<double> samples;
  samples.reserve(rows.size());
  for (const auto& row : rows) {
    const double v = csv::parse_double(row.fields[0], row.line, "save_time_seconds");
    if (!(v > 0.0)) throw ParseError(row.line, "save_time_seconds must be > 0");
    samples.push_back(v);
  }
  return samples;
}

std::vector<double> read_cost_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return read_cost_samples(in);
}

}  // namespace ckpt
