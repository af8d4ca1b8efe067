#include <cmath>
#include <limits>
#include <numbers>

#include "ckpt/error.hpp"
#include "ckpt/optimizer.hpp"

namespace ckpt {

namespace {

constexpr double kBranchPoint = -1.0 / std::numbers::e;

double initial_guess(double z) {
  if (z < -0.25) {
    // Series in p around the branch point w = -1.
    const double p = std::sqrt(2.0 * (std::numbers::e * z + 1.0));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (z < 3.0) {
    const double l = std::log1p(z);
    return l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  const double l1 = std::log(z);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double z) {
  if (std::isnan(z) || z < kBranchPoint) {
    // The double nearest -1/e can sit a rounding step below the true value.
    if (!(z >= kBranchPoint - 4 * std::numeric_limits<double>::epsilon())) {
      throw Error(ErrorKind::BelowBranchPoint, "lambert_w0 needs z >= -1/e");
    }
    return -1.0;
  }
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;
  if (z == kBranchPoint) return -1.0;

  double w = initial_guess(z);
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    // Halley step.
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace ckpt
