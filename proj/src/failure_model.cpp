#include "ckpt/failure_model.hpp"

#include <fstream>

#include "ckpt/csv.hpp"
#include "ckpt/error.hpp"

namespace ckpt {

ExponentialFailureModel ExponentialFailureModel::from_mttf(double mttf_seconds) {
  if (!(mttf_seconds > 0.0) || !std::isfinite(mttf_seconds)) {
    throw Error(ErrorKind::NonPositiveMttf, "mttf must be finite and > 0");
  }
  return ExponentialFailureModel(1.0 / mttf_seconds);
}

ExponentialFailureModel ExponentialFailureModel::from_rate(double per_second) {
  if (!(per_second >= 0.0) || !std::isfinite(per_second)) {
    throw Error(ErrorKind::InvalidConfig, "lambda must be finite and >= 0");
  }
  return ExponentialFailureModel(per_second);
}

double ExponentialFailureModel::survival(double t) const {
  if (t < 0.0 || std::isnan(t)) throw Error(ErrorKind::NegativeTime, "t must be >= 0");
  return std::exp(-rate_ * t);
}

double estimate_mttf(std::span<const NodeUptimeRecord> records) {
  if (records.empty()) throw Error(ErrorKind::EmptyLog, "failure log has no records");
  double operation = 0.0;
  std::uint64_t failures = 0;
  for (const auto& rec : records) {
    operation += rec.operation_time;
    failures += rec.failure_count;
  }
  if (failures == 0) {
    throw Error(ErrorKind::NoFailures,
                "no failures recorded; MTTF is undefined, supply lambda directly");
  }
  return operation / static_cast<double>(failures);
}

std::vector<NodeUptimeRecord> read_failure_log(std::istream& in) {
  const auto rows = csv::read_table(in, {"node_id", "operation_hours", "failures"});
  std::vector<NodeUptimeRecord> records;
  records.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.fields[0].empty()) throw ParseError(row.line, "empty node_id");
    const double hours = csv::parse_double(row.fields[1], row.line, "operation_hours");
    if (!(hours > 0.0)) throw ParseError(row.line, "operation_hours must be > 0");
    const long long failures = csv::parse_integer(row.fields[2], row.line, "failures");
    if (failures < 0) throw ParseError(row.line, "failures must be >= 0");
    records.push_back({row.fields[0], hours * 3600.0, static_cast<std::uint64_t>(failures)});
  }
  return records;
}

std::vector<NodeUptimeRecord> read_failure_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return read_failure_log(in);
}

}  // namespace ckpt
