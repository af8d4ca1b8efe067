#include "ckpt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ckpt/error.hpp"

namespace ckpt {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form_single: return "closed_form_single";
    case Method::closed_form_r1: return "closed_form_r1";
    case Method::first_order: return "first_order";
    case Method::general_root: return "general_root";
    case Method::young: return "young";
    case Method::daly: return "daly";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::closed_form_single, Method::closed_form_r1, Method::first_order,
                   Method::general_root, Method::young, Method::daly}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

void require_interior_optimum(const ExponentialFailureModel& model, double ts) {
  if (!(model.rate() > 0.0)) {
    throw Error(ErrorKind::DegenerateInput, "lambda must be > 0 (no interior optimum)");
  }
  if (!(ts > 0.0) || !std::isfinite(ts)) {
    throw Error(ErrorKind::DegenerateInput, "ts must be > 0 (no interior optimum)");
  }
}

}  // namespace

PredictionResult predict_single(const ExponentialFailureModel& model, double ts) {
  require_interior_optimum(model, ts);
  const double rate = model.rate();
  const double tc = 2.0 * lambert_w0(std::sqrt(rate * ts) / 2.0) / rate;
  const double residual =
      std::abs(rate * tc + 2.0 * std::log(tc) - std::log(ts) + std::log(rate));
  return {tc, Method::closed_form_single, residual, 0};
}

PredictionResult predict_first_order(const ExponentialFailureModel& model, double ts) {
  require_interior_optimum(model, ts);
  return {std::sqrt(ts / model.rate()), Method::first_order, 0.0, 0};
}

PredictionResult predict_r1(const ExponentialFailureModel& model, double ts, int n) {
  require_interior_optimum(model, ts);
  if (n < 1) throw Error(ErrorKind::DegenerateInput, "n must be >= 1");
  // n processes without replicas fail like one process with rate n*lambda.
  const double rate = n * model.rate();
  const double tc = 2.0 * lambert_w0(std::sqrt(rate * ts) / 2.0) / rate;
  const double residual =
      std::abs(std::expm1(std::log(rate) + rate * tc + 2.0 * std::log(tc) - std::log(ts)));
  return {tc, Method::closed_form_r1, residual, 0};
}

double stationarity_log_gap(double tc, double ts, const ExponentialFailureModel& model,
                            const JobSpec& spec) {
  const double x = model.rate() * tc;
  const double log_replica_fails = std::log(-std::expm1(-x));
  const double log_process_survives = std::log1p(-std::exp(spec.r * log_replica_fails));
  double log_d = std::log(static_cast<double>(spec.n)) + std::log(static_cast<double>(spec.r)) +
                 std::log(model.rate()) - x - (spec.n + 1) * log_process_survives;
  if (spec.r > 1) log_d += (spec.r - 1) * log_replica_fails;
  return log_d + 2.0 * std::log(tc) - std::log(ts);
}

double stationarity_residual(double tc, double ts, const ExponentialFailureModel& model,
                             const JobSpec& spec) {
  return std::abs(std::expm1(stationarity_log_gap(tc, ts, model, spec)));
}

namespace {

struct Bracket {
  double lo;
  double hi;
};

// Golden-section search for the minimum of f(exp(u)) on [lo, hi] (log space).
template <class F>
double golden_section_log(F&& f, Bracket b, double rel_width, int max_iterations,
                          int& iterations) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::log(b.lo);
  double c = std::log(b.hi);
  double x1 = c - kInvPhi * (c - a);
  double x2 = a + kInvPhi * (c - a);
  double f1 = f(std::exp(x1));
  double f2 = f(std::exp(x2));
  while (iterations < max_iterations) {
    const double lo = std::exp(a);
    const double hi = std::exp(c);
    if ((hi - lo) / (0.5 * (hi + lo)) < rel_width) break;
    ++iterations;
    if (f1 <= f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - kInvPhi * (c - a);
      f1 = f(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (c - a);
      f2 = f(std::exp(x2));
    }
  }
  return 0.5 * (std::exp(a) + std::exp(c));
}

}  // namespace

PredictionResult predict_general(const ExponentialFailureModel& model, double ts,
                                 const JobSpec& spec, const GeneralSolverOptions& options) {
  require_interior_optimum(model, ts);
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::DegenerateInput, e.what());
  }

  const double lower = options.lower;
  const double upper = std::max(options.upper_mttf_multiple * model.mttf(), 10.0 * lower);
  auto objective = [&](double tc) { return normalized_overhead_excess(tc, ts, model, spec); };

  // Coarse log-grid scan; the overhead is unimodal on the range but the scan
  // also protects against a poor initial bracket.
  const int points = std::max(options.scan_points, 8);
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double log_lo = std::log(lower);
  const double log_step = (std::log(upper) - log_lo) / (points - 1);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = std::exp(log_lo + log_step * static_cast<double>(i));
    const double v = objective(grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 == grid.size()) {
    throw Error(ErrorKind::NoConvergence,
                fmt::format("normalized overhead minimum at search boundary tc={:.6g} s", grid[best]));
  }
  Bracket bracket{grid[best - 1], grid[best + 1]};

  int iterations = 0;
  const double tc_min = golden_section_log(objective, bracket, options.bracket_rel_width,
                                           options.max_iterations, iterations);

  // Polish the stationarity root in u = ln tc. gap(u) increases through zero
  // at the optimum.
  auto gap = [&](double u) { return stationarity_log_gap(std::exp(u), ts, model, spec); };
  double ua = std::log(bracket.lo);
  double ub = std::log(bracket.hi);
  double ga = gap(ua);
  double gb = gap(ub);
  if (!(ga < 0.0 && gb > 0.0)) {
    throw Error(ErrorKind::NoConvergence,
                fmt::format("stationarity condition not bracketed on [{:.6g}, {:.6g}] s",
                            bracket.lo, bracket.hi));
  }
  double u = std::log(tc_min);
  double g = gap(u);
  for (int it = 0; it < options.max_iterations && g != 0.0; ++it) {
    ++iterations;
    if (g < 0.0) {
      ua = u;
    } else {
      ub = u;
    }
    const double h = 1e-6 * std::max(1.0, std::abs(u));
    const double slope = (gap(u + h) - gap(u - h)) / (2.0 * h);
    double next = u - g / slope;
    if (!(next > ua && next < ub)) next = 0.5 * (ua + ub);
    if (next == u || ub - ua <= 4 * std::numeric_limits<double>::epsilon() * std::abs(u)) {
      break;
    }
    u = next;
    g = gap(u);
    if (std::abs(g) < 1e-15) break;
  }

  const double tc = std::exp(u);
  const double residual = std::abs(std::expm1(g));
  if (!(residual <= options.residual_tolerance)) {
    throw Error(ErrorKind::NoConvergence,
                fmt::format("stationarity residual {:.3g} above tolerance at tc={:.6g} s after "
                            "{} iterations",
                            residual, tc, iterations));
  }
  if (std::abs(tc - tc_min) > options.agreement_tolerance * tc) {
    throw Error(ErrorKind::NoConvergence,
                fmt::format("root tc={:.6g} s and minimiser tc={:.6g} s disagree", tc, tc_min));
  }
  return {tc, Method::general_root, residual, iterations};
}

PredictionResult baseline_young(double ts, double tf) {
  if (!(ts > 0.0) || !(tf > 0.0) || !std::isfinite(ts) || !std::isfinite(tf)) {
    throw Error(ErrorKind::DegenerateInput, "young: ts and tf must be > 0");
  }
  return {std::sqrt(2.0 * ts * tf), Method::young, 0.0, 0};
}

PredictionResult baseline_daly(double delta, double m, double rr) {
  if (!(delta > 0.0) || !(m > 0.0) || !(rr >= 0.0) || !std::isfinite(m + rr + delta)) {
    throw Error(ErrorKind::DegenerateInput, "daly: need delta > 0, m > 0, rr >= 0");
  }
  const double tc = std::sqrt(2.0 * delta * (m + rr)) - delta;
  if (!(tc > 0.0)) {
    throw Error(ErrorKind::NonPositiveResult,
                "daly estimate is <= 0; outside its validity regime");
  }
  return {tc, Method::daly, 0.0, 0};
}

PredictionResult predict(Method method, const ExponentialFailureModel& model, double ts,
                         const JobSpec& spec) {
  switch (method) {
    case Method::closed_form_single:
      if (spec.n != 1 || spec.r != 1) {
        throw Error(ErrorKind::DegenerateInput, "closed_form_single needs n = 1 and r = 1");
      }
      return predict_single(model, ts);
    case Method::closed_form_r1:
      if (spec.r != 1) throw Error(ErrorKind::DegenerateInput, "closed_form_r1 needs r = 1");
      return predict_r1(model, ts, spec.n);
    case Method::first_order:
      return predict_first_order(model, ts);
    case Method::general_root:
      return predict_general(model, ts, spec);
    case Method::young:
      require_interior_optimum(model, ts);
      return baseline_young(ts, model.mttf());
    case Method::daly:
      require_interior_optimum(model, ts);
      return baseline_daly(ts, model.mttf(), 0.0);
  }
  throw Error(ErrorKind::DegenerateInput, "unknown method");
}

}  // namespace ckpt
