#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "acceptance.hpp"
#include "dmlrn/corruption.hpp"
#include "dmlrn/losses.hpp"
#include "dmlrn/metrics.hpp"
#include "dmlrn/net/model.hpp"
#include "dmlrn/oracles.hpp"
#include "dmlrn/scene.hpp"
#include "dmlrn/segmentation.hpp"

namespace dmlrn::acceptance {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ValidSet random_valid_set(Rng& rng, int n) {
  LogDepthMap pl(1, n);
  DepthMap gt(1, n);
  for (int i = 0; i < n; ++i) {
    pl.v[i] = -1.0 + 3.0 * rng.uniform();
    gt.v[i] = 0.5 + 9.0 * rng.uniform();
  }
  return build_valid_set(pl, gt);
}

RgbImage random_rgb(Rng& rng, int h, int w) {
  RgbImage img(h, w);
  for (double& x : img.v) x = rng.uniform();
  return img;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

}  // namespace

Result criterion1_pairwise_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const int n = 1 + static_cast<int>(rng.uniform_below(256));
    const ValidSet vs = random_valid_set(rng, n);
    worst = std::max(worst, std::abs(pairwise_log_l1(vs) -
                                     oracles::oracle_pairwise(vs, LossKind::PAIRWISE_LOG_L1)));
    worst = std::max(worst, std::abs(pairwise_log_l2(vs) -
                                     oracles::oracle_pairwise(vs, LossKind::PAIRWISE_LOG_L2)));
  }
  const double secs = elapsed_since(t0);
  Result r;
  r.pass = worst <= 1e-9 && secs < 5.0;
  r.detail = fmt("max |fast - oracle| %.2e, %.2f s", worst, secs);
  return r;
}

Result criterion2_scale_invariance() {
  Rng rng(102);
  double worst = 0.0;
  for (int iter = 0; iter < 50; ++iter) {
    const int n = 2 + static_cast<int>(rng.uniform_below(128));
    const ValidSet vs = random_valid_set(rng, n);
    const double base = pairwise_log_l1(vs);
    for (double c : {0.1, 2.0, 10.0}) {
      ValidSet scaled = vs;
      for (size_t i = 0; i < scaled.size(); ++i) {
        scaled.pred_log[i] += std::log(c);
        scaled.residual[i] += std::log(c);
      }
      worst = std::max(worst, std::abs(pairwise_log_l1(scaled) - base) /
                                  std::max(1e-300, std::abs(base)));
    }
  }
  Result r;
  r.pass = worst <= 1e-12;
  r.detail = fmt("max relative drift %.2e", worst);
  return r;
}

Result criterion3_spade_bn_reduction() {
  Rng rng(103);
  double worst = 0.0;
  for (int iter = 0; iter < 20; ++iter) {
    const int n = 1 + static_cast<int>(rng.uniform_below(3));
    const int c = 1 + static_cast<int>(rng.uniform_below(8));
    const int h = 2 + static_cast<int>(rng.uniform_below(12));
    const int w = 2 + static_cast<int>(rng.uniform_below(12));
    Tensor f(n, c, h, w);
    for (double& x : f.v) x = 3.0 * rng.normal() + rng.uniform();
    Tensor mf(n, 4, std::max(1, h / 4), std::max(1, w / 4));
    for (double& x : mf.v) x = rng.uniform();

    Spade spade("a.spade", c, 4, 1e-5, 0.1);  // zero heads: gamma=1, beta=0
    Norm2d bn("a.bn", c, false, 1e-5, 0.1);
    const Tensor a = spade.forward(f, mf, {true, false});
    const Tensor b = bn.forward(f, {true, false});
    for (size_t i = 0; i < a.v.size(); ++i)
      worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
  }
  Result r;
  r.pass = worst <= 1e-6;
  r.detail = fmt("max |spade - bn| %.2e", worst);
  return r;
}

namespace {

// finite differences for the six losses over pred_log entries
double loss_fd_worst(LossKind kind, Rng& rng) {
  double worst = 0.0;
  const ValidSet vs = random_valid_set(rng, 64);
  const std::vector<double> g = loss_grad(kind, vs);
  for (int probe = 0; probe < 20; ++probe) {
    const size_t i = rng.uniform_below(vs.size());
    const double h = 1e-6;
    ValidSet plus = vs, minus = vs;
    plus.pred_log[i] += h;
    plus.residual[i] += h;
    minus.pred_log[i] -= h;
    minus.residual[i] -= h;
    const double fd = (loss_value(kind, plus) - loss_value(kind, minus)) / (2.0 * h);
    if (std::abs(fd) < 1e-12 && std::abs(g[i]) < 1e-12) continue;
    worst = std::max(worst,
                     std::abs(fd - g[i]) / std::max({1e-10, std::abs(fd), std::abs(g[i])}));
  }
  return worst;
}

}  // namespace

Result criterion4_gradient_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(104);
  double worst_losses = 0.0;
  for (LossKind kind : {LossKind::L1, LossKind::L2, LossKind::LOG_L1, LossKind::LOG_L2,
                        LossKind::PAIRWISE_LOG_L1, LossKind::PAIRWISE_LOG_L2})
    worst_losses = std::max(worst_losses, loss_fd_worst(kind, rng));

  // spade_block: residual unit with modulated normalization
  double worst_block = 0.0;
  {
    ModelConfig cfg;
    ResBlock block("a.block", 4, 4, /*modulated=*/true, cfg);
    std::vector<Param*> params;
    std::vector<std::pair<std::string, Tensor*>> buffers;
    std::vector<Norm2d*> norms;
    block.collect(params, buffers, norms);
    Rng brng(41);
    block.init(brng);
    for (Param* p : params)
      for (double& x : p->value.v) x += 0.05 * brng.normal();

    Tensor x(2, 4, 8, 8), mf(2, cfg.mask_channels, 2, 2), r(2, 4, 8, 8);
    for (double& v : x.v) v = brng.normal();
    for (double& v : mf.v) v = brng.normal();
    for (double& v : r.v) v = brng.normal();
    auto J = [&]() {
      const Tensor out = block.forward(x, mf, {true, false});
      double acc = 0.0;
      for (size_t i = 0; i < out.v.size(); ++i) acc += out.v[i] * r.v[i];
      return acc;
    };
    (void)J();
    for (Param* p : params) p->grad.zero();
    Tensor dmf(2, cfg.mask_channels, 2, 2);
    block.backward(r, dmf);
    double gscale = 0.0;
    for (Param* p : params)
      for (double g : p->grad.v) gscale = std::max(gscale, std::abs(g));
    int checked = 0, guard = 0;
    while (checked < 20 && ++guard < 500) {
      Param* p = params[brng.uniform_below(params.size())];
      const size_t j = brng.uniform_below(p->value.size());
      const double h = 1e-6, saved = p->value.v[j];
      p->value.v[j] = saved + h;
      const double plus = J();
      p->value.v[j] = saved - h;
      const double minus = J();
      p->value.v[j] = saved;
      const double fd = (plus - minus) / (2.0 * h);
      const double an = p->grad.v[j];
      // a bias directly followed by batch-statistic normalization is a
      // null direction of the block; both sides vanish there
      if (std::max(std::abs(fd), std::abs(an)) < 1e-6 * gscale) continue;
      worst_block = std::max(
          worst_block, std::abs(fd - an) / std::max(std::abs(fd), std::abs(an)));
      ++checked;
    }
  }

  // full T0 DM-LRN under the pairwise log-L1 objective
  double worst_model = 0.0;
  {
    ModelConfig cfg;
    cfg.variant = Variant::DM_LRN;
    Model model(cfg, 3);
    Rng mrng(8);
    for (Param* p : model.params())
      if (p->name.find(".spade") != std::string::npos)
        for (double& x : p->value.v) x += 0.05 * mrng.normal();

    const int N = 2, H = 32, W = 32;
    Tensor in(N, 4, H, W);
    for (double& v : in.v) v = mrng.normal();
    Tensor mask(N, 1, H, W);
    for (double& v : mask.v) v = mrng.uniform() < 0.7 ? 1.0 : 0.0;
    std::vector<DepthMap> gts;
    for (int n = 0; n < N; ++n) {
      DepthMap g(H, W);
      for (double& v : g.v) v = mrng.uniform() < 0.12 ? 0.5 + 9.0 * mrng.uniform() : 0.0;
      gts.push_back(g);
    }
    auto J = [&]() {
      const Tensor pred = model.forward(in, mask, true);
      double total = 0.0;
      for (int n = 0; n < N; ++n) {
        LogDepthMap pl(H, W);
        std::copy(pred.sample(n), pred.sample(n) + pl.v.size(), pl.v.begin());
        total += pairwise_log_l1(build_valid_set(pl, gts[n]));
      }
      return total / N;
    };
    const Tensor pred = model.forward(in, mask, true);
    Tensor dpred(N, 1, H, W);
    for (int n = 0; n < N; ++n) {
      LogDepthMap pl(H, W);
      std::copy(pred.sample(n), pred.sample(n) + pl.v.size(), pl.v.begin());
      const ValidSet vs = build_valid_set(pl, gts[n]);
      const std::vector<double> g = loss_grad(LossKind::PAIRWISE_LOG_L1, vs);
      for (size_t i = 0; i < vs.indices.size(); ++i)
        dpred.sample(n)[vs.indices[i]] = g[i] / N;
    }
    model.zero_grad();
    model.backward(dpred);

    double gscale = 0.0;
    for (Param* p : model.params())
      for (double g : p->grad.v) gscale = std::max(gscale, std::abs(g));

    auto params = model.params();
    Rng pick(87);
    int checked = 0, guard = 0;
    while (checked < 20 && ++guard < 500) {
      Param* p = params[pick.uniform_below(params.size())];
      const size_t j = pick.uniform_below(p->value.size());
      const double h = 1e-6, saved = p->value.v[j];
      p->value.v[j] = saved + h;
      const double plus = J();
      p->value.v[j] = saved - h;
      const double minus = J();
      p->value.v[j] = saved;
      const double fd = (plus - minus) / (2.0 * h);
      const double an = p->grad.v[j];
      if (std::max(std::abs(fd), std::abs(an)) < 1e-6 * gscale) continue;
      worst_model =
          std::max(worst_model, std::abs(fd - an) / std::max(std::abs(fd), std::abs(an)));
      ++checked;
    }
  }

  const double secs = elapsed_since(t0);
  Result r;
  const double worst = std::max({worst_losses, worst_block, worst_model});
  r.pass = worst < 1e-3 && secs < 120.0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "rel err: losses %.2e, block %.2e, model %.2e; %.1f s", worst_losses,
                worst_block, worst_model, secs);
  r.detail = buf;
  return r;
}

Result criterion5_segmentation() {
  Rng rng(105);
  int mismatches = 0;
  for (int iter = 0; iter < 50; ++iter) {
    const RgbImage img = random_rgb(rng, 16, 16);
    const double k = 30.0 + 600.0 * rng.uniform();
    const int min_size = 1 + static_cast<int>(rng.uniform_below(10));
    const SegmentLabeling ours = segment_graph_based(img, k, min_size, 0.0);
    if (!oracles::same_partition(ours, oracles::oracle_segment(img, k, min_size)))
      ++mismatches;
  }
  const SegmentLabeling flat = segment_graph_based(RgbImage(8, 8, 0.5), 300.0, 1, 0.8);
  const bool flat_ok = flat.segment_count == 1;
  Rng rng2(106);
  const SegmentLabeling forced =
      segment_graph_based(random_rgb(rng2, 12, 12), 100.0, 12 * 12, 0.0);
  const bool forced_ok = forced.segment_count == 1;

  Result r;
  r.pass = mismatches == 0 && flat_ok && forced_ok;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d/50 partition mismatches, constant->%d, min_size=HW->%d",
                mismatches, flat.segment_count, forced.segment_count);
  r.detail = buf;
  return r;
}

Result criterion6_corruption_contracts() {
  Rng rng(107);
  bool ok = true;
  std::string why;

  for (int iter = 0; iter < 100 && ok; ++iter) {
    SceneConfig sc;
    sc.height = 32;
    sc.width = 32;
    sc.rng_seed = 5000 + iter;
    sc.primitive_count = 4;
    const RGBDSample sample = generate_scene(sc);
    CorruptionConfig cfg;
    cfg.k = 200.0 + 600.0 * rng.uniform();
    cfg.min_size = 4;
    cfg.area_threshold = static_cast<int64_t>(rng.uniform_below(200));
    cfg.spatter_prob = 0.1 * rng.uniform();
    cfg.rng_seed = iter;

    const DepthMap out = corrupt(sample, cfg);
    for (size_t i = 0; i < out.v.size(); ++i)
      if (out.v[i] != 0.0 && out.v[i] != sample.gt->v[i]) {
        ok = false;
        why = "value preservation violated";
      }

    // tau-monotonicity on a shared segmentation
    const SegmentLabeling seg =
        segment_graph_based(sample.rgb, cfg.k, cfg.min_size, cfg.gaussian_presmooth_sigma);
    const DepthMap lo = zero_small_segments(*sample.gt, seg, cfg.area_threshold);
    const DepthMap hi = zero_small_segments(*sample.gt, seg, cfg.area_threshold + 64);
    for (size_t i = 0; i < lo.v.size(); ++i)
      if (hi.v[i] > 0.0 && lo.v[i] <= 0.0) {
        ok = false;
        why = "tau monotonicity violated";
      }

    // endpoint identities
    CorruptionConfig id = cfg;
    id.area_threshold = 0;
    id.spatter_prob = 0.0;
    if (corrupt(sample, id).v != sample.gt->v) {
      ok = false;
      why = "tau=0,p=0 identity violated";
    }
    CorruptionConfig full = cfg;
    full.spatter_prob = 1.0;
    const DepthMap dead = corrupt(sample, full);
    for (double x : dead.v)
      if (x != 0.0) {
        ok = false;
        why = "p=1 identity violated";
      }
  }

  double worst_gap = 0.0;
  const DepthMap dense(128, 128, 3.0);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng srng(seed);
    const DepthMap out = spatter(dense, 0.3, srng);
    worst_gap = std::max(worst_gap, std::abs(zeroed_fraction(dense, out) - 0.3));
  }
  if (worst_gap > 0.05) {
    ok = false;
    why = "spatter fraction drift";
  }

  Result r;
  r.pass = ok;
  r.detail = ok ? fmt("spatter fraction gap %.3f", worst_gap) : why;
  return r;
}

Result criterion7_metric_oracles() {
  Rng rng(108);
  double worst = 0.0;
  bool structure_ok = true;
  for (int iter = 0; iter < 100; ++iter) {
    DepthMap gt(32, 32), pred(32, 32);
    for (double& x : gt.v) x = rng.uniform() < 0.25 ? 0.0 : 0.5 + 9.0 * rng.uniform();
    for (double& x : pred.v) x = rng.uniform() < 0.03 ? 0.0 : 0.5 + 9.0 * rng.uniform();
    bool any = false;
    for (double g : gt.v) any |= g > 0.0;
    if (!any) continue;

    const MetricReport a = evaluate(pred, gt);
    const MetricReport b = oracles::oracle_metrics(pred, gt);
    worst = std::max({worst, std::abs(a.rmse - b.rmse), std::abs(a.mae - b.mae),
                      std::abs(a.rel - b.rel), std::abs(a.ssim - b.ssim),
                      std::abs(a.irmse - b.irmse), std::abs(a.imae - b.imae)});
    for (size_t t = 0; t < a.delta.size(); ++t)
      worst = std::max(worst, std::abs(a.delta[t] - b.delta[t]));
    for (size_t t = 1; t < a.delta.size(); ++t)
      if (a.delta[t] < a.delta[t - 1]) structure_ok = false;
    if (a.rmse < a.mae) structure_ok = false;
  }

  // worked example, exact values
  DepthMap p2(1, 2), g2(1, 2);
  p2.v = {1.0, 3.0};
  g2.v = {1.0, 1.0};
  const MetricReport ex = evaluate(p2, g2);
  const bool example_ok = std::abs(ex.rmse - std::sqrt(2.0)) < 1e-12 &&
                          std::abs(ex.mae - 1.0) < 1e-12 &&
                          std::abs(ex.delta[2] - 0.5) < 1e-12;

  Result r;
  r.pass = worst <= 1e-9 && structure_ok && example_ok;
  r.detail = fmt("max |fast - oracle| %.2e", worst) +
             (structure_ok ? "" : ", structure violated") +
             (example_ok ? "" : ", worked example wrong");
  return r;
}

}  // namespace dmlrn::acceptance
