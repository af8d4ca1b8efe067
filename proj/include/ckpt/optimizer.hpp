#pragma once

#include <optional>
#include <string_view>

#include "ckpt/failure_model.hpp"
#include "ckpt/overhead_model.hpp"

namespace ckpt {

enum class Method {
  closed_form_single,
  closed_form_r1,
  first_order,
  general_root,
  young,
  daly,
};

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct PredictionResult {
  double tc_opt = 0.0;
  Method method = Method::general_root;
  /// Residual of the stationarity condition the method targets; 0 for the
  /// literature baselines, which have none.
  double residual = 0.0;
  int iterations = 0;
};

/// Principal branch of the Lambert W function, z >= -1/e.
/// Throws BelowBranchPoint below the branch point.
double lambert_w0(double z);

/// Single un-replicated process: 2 W(sqrt(rate*ts)/2) / rate.
/// residual = |rate*tc + 2 ln tc - ln ts + ln rate|.
PredictionResult predict_single(const ExponentialFailureModel& model, double ts);

/// sqrt(ts / rate), from linearising exp.
PredictionResult predict_first_order(const ExponentialFailureModel& model, double ts);

/// n un-replicated processes: 2 W(sqrt(n*rate*ts)/2) / (n*rate).
/// residual = |1 - n*rate*exp(n*rate*tc)*tc^2/ts|.
PredictionResult predict_r1(const ExponentialFailureModel& model, double ts, int n);

struct GeneralSolverOptions {
  double lower = 1e-3;           // seconds
  double upper_mttf_multiple = 100.0;
  int scan_points = 512;
  double bracket_rel_width = 1e-6;
  double residual_tolerance = 1e-9;
  double agreement_tolerance = 1e-3;
  int max_iterations = 200;
};

/// General n x r case. Minimises the normalised overhead over
/// [lower, upper_mttf_multiple * MTTF] (log-grid scan, then golden section),
/// polishes the root of the stationarity condition with a safeguarded
/// Newton iteration, and checks that the two agree.
///
/// Throws DegenerateInput for rate == 0 or ts <= 0, NoConvergence if the
/// residual or the agreement check fails.
PredictionResult predict_general(const ExponentialFailureModel& model, double ts,
                                 const JobSpec& spec,
                                 const GeneralSolverOptions& options = {});

/// Relative residual |1 - D(tc) * tc^2 / ts| of the stationarity condition,
/// where D is the derivative of the conjunction term of the normalised
/// overhead. Evaluated in log space.
double stationarity_residual(double tc, double ts, const ExponentialFailureModel& model,
                             const JobSpec& spec);

/// Signed log form of the same condition: ln D + 2 ln tc - ln ts.
double stationarity_log_gap(double tc, double ts, const ExponentialFailureModel& model,
                            const JobSpec& spec);

/// sqrt(2 * ts * tf).
PredictionResult baseline_young(double ts, double tf);

/// sqrt(2 * delta * (m + rr)) - delta. Throws NonPositiveResult when the
/// formula leaves its validity regime and yields <= 0.
PredictionResult baseline_daly(double delta, double m, double rr);

/// Dispatches on method; general_root uses `spec`, closed_form_r1 uses
/// spec.n and requires spec.r == 1, young/daly use the model's MTTF.
PredictionResult predict(Method method, const ExponentialFailureModel& model, double ts,
                         const JobSpec& spec);

}  // namespace ckpt
