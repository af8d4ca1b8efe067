#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <vector>

namespace ckpt {

/// The four additive parts of the time it takes to record one checkpoint.
struct CheckpointCost {
  double client_time = 0.0;  // create the checkpoint on the client
  double latency = 0.0;      // ship it to the server
  double upload = 0.0;       // store it on the server
  double ack = 0.0;          // acknowledge back to the client

  /// Throws InvalidConfig if any component is negative or not finite.
  void validate() const;
};

double total_cost(const CheckpointCost& cost);

inline constexpr std::uint64_t kDefaultTsIterations = 100'000;

/// Mean over `iterations` rounds of the maximum of n*r save times drawn with
/// replacement from `samples`. The largest of n*r concurrent saves is what
/// stalls the whole computation.
///
/// Both variants return bit-identical results for the same seed.
double estimate_ts(std::span<const double> samples, int n, int r,
                   std::uint64_t iterations, std::uint64_t seed);
double estimate_ts_serial(std::span<const double> samples, int n, int r,
                          std::uint64_t iterations, std::uint64_t seed);

/// Cost-sample CSV: header `save_time_seconds`, one positive value per row.
std::vector<double> read_cost_samples(std::istream& in);
std::vector<double> read_cost_samples(const std::filesystem::path& path);

}  // namespace ckpt
