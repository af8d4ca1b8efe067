#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ckpt/error.hpp"
#include "ckpt/optimizer.hpp"
#include "oracles.hpp"

namespace ckpt {
namespace {

constexpr double kPoolRate = 0.0000348074;  // 1 / 28730 s

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidConfig;
}

TEST(LambertW, KnownPoints) {
  EXPECT_EQ(lambert_w0(0.0), 0.0);
  EXPECT_NEAR(lambert_w0(std::numbers::e), 1.0, 1e-15);
  EXPECT_NEAR(lambert_w0(1.0), oracle::lambert_w0_bisect(1.0), 1e-15);
  EXPECT_NEAR(lambert_w0(1.0), 0.5671432904, 1e-10);
  EXPECT_NEAR(lambert_w0(-1.0 / std::numbers::e), -1.0, 1e-7);
  EXPECT_EQ(kind_of([] { lambert_w0(-0.5); }), ErrorKind::BelowBranchPoint);
}

TEST(LambertW, DefiningIdentityOnLogGrid) {
  const double zmin = -1.0 / std::numbers::e + 1e-6;
  // negative side, linear in distance from the branch point
  for (int i = 0; i <= 2000; ++i) {
    const double z = zmin * std::pow(1e-12, i / 2000.0);
    const double w = lambert_w0(z);
    EXPECT_LE(std::abs(w * std::exp(w) - z), 1e-12 * std::max(1.0, std::abs(z))) << z;
  }
  for (int i = 0; i <= 2000; ++i) {
    const double z = std::pow(10.0, -12.0 + 18.0 * i / 2000.0);
    const double w = lambert_w0(z);
    EXPECT_LE(std::abs(w * std::exp(w) - z), 1e-12 * std::max(1.0, std::abs(z))) << z;
    EXPECT_NEAR(w, oracle::lambert_w0_bisect(z), 1e-12 * std::max(1.0, std::abs(w))) << z;
  }
}

TEST(PredictSingle, PoolRateValue) {
  const auto model = ExponentialFailureModel::from_rate(kPoolRate);
  const auto res = predict_single(model, 1.0);
  EXPECT_NEAR(res.tc_opt, 169.0, 1.0);
  EXPECT_NEAR(res.tc_opt, 169.00005642075576, 1e-9);
  EXPECT_EQ(res.method, Method::closed_form_single);
  EXPECT_LT(res.residual, 1e-12);
}

TEST(PredictSingle, UnitRateUnitCost) {
  const auto res = predict_single(ExponentialFailureModel::from_rate(1.0), 1.0);
  EXPECT_NEAR(res.tc_opt, 2.0 * oracle::lambert_w0_bisect(0.5), 1e-14);
  EXPECT_NEAR(res.tc_opt, 0.70346742249839165, 1e-14);
  EXPECT_LT(res.residual, 1e-14);
}

TEST(PredictSingle, BelowFirstOrderAndCloseForSmallRateCost) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> exponent(-9.0, 0.0);
  for (int i = 0; i < 200; ++i) {
    const double rate = std::pow(10.0, exponent(gen) - 2.0);
    const double ts = std::pow(10.0, exponent(gen) + 3.0);
    const auto model = ExponentialFailureModel::from_rate(rate);
    const double closed = predict_single(model, ts).tc_opt;
    const double first = predict_first_order(model, ts).tc_opt;
    EXPECT_LE(closed, first * (1 + 1e-15));
    if (rate * ts <= 1e-4) {
      EXPECT_NEAR(closed / first, 1.0, 0.01);
    }
  }
}

TEST(PredictFirstOrder, Values) {
  EXPECT_NEAR(predict_first_order(ExponentialFailureModel::from_rate(kPoolRate), 1.0).tc_opt,
              169.5, 0.05);
  EXPECT_DOUBLE_EQ(predict_first_order(ExponentialFailureModel::from_rate(1.0), 1.0).tc_opt, 1.0);
  EXPECT_DOUBLE_EQ(predict_first_order(ExponentialFailureModel::from_rate(4.0), 1.0).tc_opt, 0.5);
}

TEST(PredictR1, PoolRateValues) {
  const auto model = ExponentialFailureModel::from_rate(kPoolRate);
  const auto n16 = predict_r1(model, 1.0, 16);
  const auto n32 = predict_r1(model, 1.0, 32);
  EXPECT_NEAR(n16.tc_opt, 42.0, 0.5);
  EXPECT_NEAR(n32.tc_opt, 29.0, 0.5);
  EXPECT_NEAR(n16.tc_opt, 41.883132091043877, 1e-9);
  EXPECT_NEAR(n32.tc_opt, 29.475426502364284, 1e-9);
  EXPECT_LT(n16.residual, 1e-9);
  EXPECT_LT(n32.residual, 1e-9);
  const double single = predict_single(model, 1.0).tc_opt;
  EXPECT_NEAR(predict_r1(model, 1.0, 1).tc_opt / single, 1.0, 1e-9);
  EXPECT_GT(single, n16.tc_opt);
  EXPECT_GT(n16.tc_opt, n32.tc_opt);
}

TEST(PredictGeneral, ReducesToClosedFormForR1) {
  for (double rate : {1e-6, kPoolRate, 1e-3}) {
    for (int n : {1, 2, 16, 32, 64}) {
      const auto model = ExponentialFailureModel::from_rate(rate);
      const double closed = predict_r1(model, 1.0, n).tc_opt;
      const double general = predict_general(model, 1.0, {n, 1}).tc_opt;
      EXPECT_NEAR(general / closed, 1.0, 1e-6) << rate << " " << n;
    }
  }
}

TEST(PredictGeneral, MatchesGridMinimiser) {
  const auto model = ExponentialFailureModel::from_rate(kPoolRate);
  for (int n : {16, 32}) {
    for (int r : {2, 3}) {
      auto f = [&](double tc) { return oracle::direct_overhead(tc, 1.0, kPoolRate, n, r) / tc; };
      const double brute = oracle::grid_argmin(f, 1.0, 1e6);
      const auto res = predict_general(model, 1.0, {n, r});
      EXPECT_NEAR(res.tc_opt / brute, 1.0, 1e-3) << n << " " << r;
      EXPECT_LE(res.residual, 1e-9);
    }
  }
}

TEST(PredictGeneral, ReplicatedReferenceIntervals) {
  const auto model = ExponentialFailureModel::from_rate(kPoolRate);
  EXPECT_NEAR(predict_general(model, 1.0, {16, 2}).tc_opt, 297.0, 297.0 * 0.02);
  EXPECT_NEAR(predict_general(model, 1.0, {32, 3}).tc_opt, 714.0, 714.0 * 0.02);
}

TEST(PredictGeneral, LocalMinimumAndMonotoneTrends) {
  const auto model = ExponentialFailureModel::from_rate(kPoolRate);
  double prev_n = std::numeric_limits<double>::infinity();
  for (int n : {1, 2, 4, 8, 16, 32, 64}) {
    const double tc = predict_general(model, 1.0, {n, 1}).tc_opt;
    EXPECT_LT(tc, prev_n);
    prev_n = tc;
  }
  for (int n : {16, 32}) {
    double prev_r = 0.0;
    for (int r : {1, 2, 3, 4}) {
      const JobSpec spec{n, r};
      const double tc = predict_general(model, 1.0, spec).tc_opt;
      EXPECT_GT(tc, prev_r);
      prev_r = tc;
      const double at = normalized_overhead(tc, 1.0, model, spec);
      EXPECT_GT(normalized_overhead(tc * 1.01, 1.0, model, spec), at);
      EXPECT_GT(normalized_overhead(tc * 0.99, 1.0, model, spec), at);
    }
  }
}

TEST(PredictGeneral, ResidualAgreesWithFiniteDifference) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double rate = std::pow(10.0, -6.0 + 3.0 * unit(gen));
    const double ts = std::pow(10.0, -1.0 + 3.0 * unit(gen));
    const JobSpec spec{1 + static_cast<int>(64 * unit(gen)), 1 + static_cast<int>(4 * unit(gen))};
    const auto model = ExponentialFailureModel::from_rate(rate);
    const auto res = predict_general(model, ts, spec);
    EXPECT_LE(stationarity_residual(res.tc_opt, ts, model, spec), 1e-9);
    const double h = 1e-4 * res.tc_opt;
    const double fd = (normalized_overhead_excess(res.tc_opt + h, ts, model, spec) -
                       normalized_overhead_excess(res.tc_opt - h, ts, model, spec)) /
                      (2 * h);
    EXPECT_LE(std::abs(fd) / (ts / (res.tc_opt * res.tc_opt)), 1e-6);
  }
}

TEST(PredictGeneral, Degenerate) {
  EXPECT_EQ(kind_of([] { predict_general(ExponentialFailureModel::from_rate(0.0), 1.0, {1, 1}); }),
            ErrorKind::DegenerateInput);
  EXPECT_EQ(kind_of([] { predict_general(ExponentialFailureModel::from_rate(1e-4), 0.0, {1, 1}); }),
            ErrorKind::DegenerateInput);
  EXPECT_EQ(kind_of([] { predict_single(ExponentialFailureModel::from_rate(0.0), 1.0); }),
            ErrorKind::DegenerateInput);
  EXPECT_EQ(kind_of([] { predict_r1(ExponentialFailureModel::from_rate(1.0), 0.0, 4); }),
            ErrorKind::DegenerateInput);
}

TEST(Baselines, Young) {
  EXPECT_NEAR(baseline_young(1.0, 28730.0).tc_opt, 239.70815588961507, 1e-9);
  EXPECT_DOUBLE_EQ(baseline_young(0.5, 1.0).tc_opt, 1.0);
  EXPECT_NEAR(baseline_young(2.0, 2.0).tc_opt, std::sqrt(8.0), 1e-15);
  EXPECT_EQ(kind_of([] { baseline_young(0.0, 1.0); }), ErrorKind::DegenerateInput);
}

TEST(Baselines, Daly) {
  EXPECT_NEAR(baseline_daly(1.0, 28730.0, 0.0).tc_opt, 238.70815588961507, 1e-9);
  EXPECT_DOUBLE_EQ(baseline_daly(1.0, 49.5, 0.5).tc_opt, 9.0);
  EXPECT_EQ(kind_of([] { baseline_daly(2.0, 1.0, 0.0); }), ErrorKind::NonPositiveResult);
  EXPECT_EQ(kind_of([] { baseline_daly(0.0, 1.0, 0.0); }), ErrorKind::DegenerateInput);
}

TEST(Dispatch, MethodNamesRoundTrip) {
  for (Method m : {Method::closed_form_single, Method::closed_form_r1, Method::first_order,
                   Method::general_root, Method::young, Method::daly}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_FALSE(parse_method("newton").has_value());
  const auto model = ExponentialFailureModel::from_mttf(28730.0);
  EXPECT_EQ(predict(Method::closed_form_r1, model, 1.0, {16, 1}).method, Method::closed_form_r1);
  EXPECT_THROW(predict(Method::closed_form_r1, model, 1.0, {16, 2}), Error);
}

}  // namespace
}  // namespace ckpt
