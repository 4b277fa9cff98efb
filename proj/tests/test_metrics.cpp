#include <doctest.h>

#include <cmath>

#include "dmlrn/metrics.hpp"
#include "dmlrn/oracles.hpp"
#include "test_util.hpp"

using namespace dmlrn;

namespace {

DepthMap pair_map(double a, double b) {
  DepthMap d(1, 2);
  d.v = {a, b};
  return d;
}

bool reports_equal_except_ssim(const MetricReport& a, const MetricReport& b) {
  if (a.rmse != b.rmse || a.mae != b.mae || a.rel != b.rel) return false;
  if (a.delta != b.delta) return false;
  if (a.irmse != b.irmse || a.imae != b.imae) return false;
  return a.valid_pixel_count == b.valid_pixel_count &&
         a.inverse_excluded == b.inverse_excluded;
}

}  // namespace

TEST_CASE("perfect prediction scores perfectly") {
  Rng rng(2);
  const DepthMap gt = test::random_depth(rng, 16, 16, 0.5, 9.5);
  const MetricReport r = evaluate(gt, gt);
  CHECK(r.rmse == 0.0);
  CHECK(r.mae == 0.0);
  CHECK(r.rel == 0.0);
  for (double d : r.delta) CHECK(d == 1.0);
  CHECK(r.ssim == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.irmse == 0.0);
  CHECK(r.valid_pixel_count == 16 * 16);
}

TEST_CASE("worked example pred=(1,3) gt=(1,1)") {
  const MetricReport r = evaluate(pair_map(1.0, 3.0), pair_map(1.0, 1.0));
  CHECK(r.rmse == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.mae == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.rel == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.delta[2] == doctest::Approx(0.5).epsilon(1e-12));  // delta_1.25
}

TEST_CASE("delta thresholds separate at the documented ratios") {
  // pred = (1.0, 1.2): ratio 1.2 fails 1.05 and 1.10, passes 1.25
  const MetricReport r = evaluate(pair_map(1.0, 1.2), pair_map(1.0, 1.0));
  CHECK(r.delta[0] == doctest::Approx(0.5));
  CHECK(r.delta[1] == doctest::Approx(0.5));
  CHECK(r.delta[2] == doctest::Approx(1.0));
}

TEST_CASE("delta is monotone and symmetric; rmse dominates mae") {
  Rng rng(4);
  for (int iter = 0; iter < 40; ++iter) {
    const DepthMap gt = test::random_depth(rng, 12, 12, 0.5, 9.5, 0.2);
    DepthMap pred = test::random_depth(rng, 12, 12, 0.5, 9.5);
    bool has_valid = false;
    for (double g : gt.v) has_valid |= g > 0.0;
    if (!has_valid) continue;

    const MetricReport r = evaluate(pred, gt);
    for (size_t t = 1; t < r.delta.size(); ++t) CHECK(r.delta[t] >= r.delta[t - 1]);
    CHECK(r.rmse >= r.mae);

    // max-ratio deltas are symmetric in pred/gt; compare over the same
    // pixel set by zeroing pred where gt is missing before the swap
    DepthMap pred_masked = pred;
    for (size_t i = 0; i < gt.v.size(); ++i)
      if (gt.v[i] <= 0.0) pred_masked.v[i] = 0.0;
    const MetricReport fwd = evaluate(pred_masked, gt);
    const MetricReport swp = evaluate(gt, pred_masked);
    for (size_t t = 0; t < fwd.delta.size(); ++t)
      CHECK(fwd.delta[t] == doctest::Approx(swp.delta[t]).epsilon(1e-12));
  }
}

TEST_CASE("pixels without ground truth do not affect anything except ssim") {
  Rng rng(6);
  const DepthMap gt = test::random_depth(rng, 16, 16, 0.5, 9.5, 0.3);
  const DepthMap pred = test::random_depth(rng, 16, 16, 0.5, 9.5);
  DepthMap perturbed = pred;
  for (size_t i = 0; i < gt.v.size(); ++i)
    if (gt.v[i] <= 0.0) perturbed.v[i] = 9.9 * rng.uniform();
  CHECK(reports_equal_except_ssim(evaluate(pred, gt), evaluate(perturbed, gt)));
}

TEST_CASE("inverse metrics skip nonpositive predictions and count them") {
  DepthMap gt(1, 3);
  gt.v = {2.0, 4.0, 5.0};
  DepthMap pred(1, 3);
  pred.v = {2.0, 0.0, 5.0};
  const MetricReport r = evaluate(pred, gt);
  CHECK(r.inverse_excluded == 1);
  CHECK(r.irmse == doctest::Approx(0.0));
  // the zero prediction counts as a miss for every delta
  CHECK(r.delta[4] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("ssim of identical maps is exactly one") {
  Rng rng(8);
  const DepthMap d = test::random_depth(rng, 24, 24, 0.5, 9.5);
  CHECK(ssim(d, d) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("small constant shift keeps ssim high but below one") {
  DepthMap gt(24, 24);
  for (int y = 0; y < 24; ++y)
    for (int x = 0; x < 24; ++x) gt.at(y, x) = 5.0 + 0.5 * std::sin(0.3 * x) * std::cos(0.2 * y);
  DepthMap pred = gt;
  for (double& v : pred.v) v += 0.1;  // 0.01 of the 10 m range
  const double s = ssim(pred, gt, 11, 1.5, 10.0);
  CHECK(s < 1.0);
  CHECK(s > 0.9);
  CHECK(std::abs(s - oracles::oracle_ssim(pred, gt, 11, 1.5, 10.0)) <= 1e-9);
}

TEST_CASE("negated smooth map scores below one half") {
  DepthMap gt(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) gt.at(y, x) = 2.0 + 0.05 * std::sin(0.5 * x + 0.3 * y);
  DepthMap pred = gt;
  for (double& v : pred.v) v = -v;  // raw grid check, not a valid DepthMap
  const double s = ssim(pred, gt, 11, 1.5, 10.0);
  CHECK(s < 0.5);
  CHECK(std::abs(s - oracles::oracle_ssim(pred, gt, 11, 1.5, 10.0)) <= 1e-9);
}

TEST_CASE("evaluate agrees with the brute force oracle") {
  Rng rng(10);
  for (int iter = 0; iter < 25; ++iter) {
    const DepthMap gt = test::random_depth(rng, 32, 32, 0.5, 9.5, 0.25);
    DepthMap pred = test::random_depth(rng, 32, 32, 0.5, 9.5, 0.05);
    bool has_valid = false;
    for (double g : gt.v) has_valid |= g > 0.0;
    if (!has_valid) continue;
    const MetricReport a = evaluate(pred, gt);
    const MetricReport b = oracles::oracle_metrics(pred, gt);
    CHECK(std::abs(a.rmse - b.rmse) <= 1e-9);
    CHECK(std::abs(a.mae - b.mae) <= 1e-9);
    CHECK(std::abs(a.rel - b.rel) <= 1e-9);
    for (size_t t = 0; t < a.delta.size(); ++t)
      CHECK(std::abs(a.delta[t] - b.delta[t]) <= 1e-9);
    CHECK(std::abs(a.ssim - b.ssim) <= 1e-9);
    CHECK(std::abs(a.irmse - b.irmse) <= 1e-9);
    CHECK(std::abs(a.imae - b.imae) <= 1e-9);
    CHECK(a.valid_pixel_count == b.valid_pixel_count);
    CHECK(a.inverse_excluded == b.inverse_excluded);
  }
}

TEST_CASE("empty valid set is an error") {
  DepthMap gt(2, 2, 0.0);
  DepthMap pred(2, 2, 1.0);
  CHECK_THROWS(evaluate(pred, gt));
}

TEST_CASE("mean report averages element-wise") {
  MetricReport a, b;
  a.rmse = 1.0;
  b.rmse = 3.0;
  a.delta[0] = 0.2;
  b.delta[0] = 0.6;
  const MetricReport m = mean_report({a, b});
  CHECK(m.rmse == doctest::Approx(2.0));
  CHECK(m.delta[0] == doctest::Approx(0.4));
}
