#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "acceptance.hpp"

namespace {

struct Criterion {
  int number;
  const char* title;
  dmlrn::acceptance::Result (*run)();
};

const Criterion kCriteria[] = {
    {1, "pairwise-loss exactness", dmlrn::acceptance::criterion1_pairwise_exactness},
    {2, "pairwise scale invariance", dmlrn::acceptance::criterion2_scale_invariance},
    {3, "SPADE reduces to batch normalization", dmlrn::acceptance::criterion3_spade_bn_reduction},
    {4, "gradient correctness", dmlrn::acceptance::criterion4_gradient_correctness},
    {5, "segmentation matches the oracle", dmlrn::acceptance::criterion5_segmentation},
    {6, "corruption contracts", dmlrn::acceptance::criterion6_corruption_contracts},
    {7, "metric oracle equivalence", dmlrn::acceptance::criterion7_metric_oracles},
    {8, "DM-LRN vs LRN vs mean-fill trend", dmlrn::acceptance::criterion8_table1_trend},
    {9, "encoder-size trend", dmlrn::acceptance::criterion9_backbone_trend},
    {10, "corruption vs sparse training value", dmlrn::acceptance::criterion10_strategy_value},
    {11, "determinism and resume", dmlrn::acceptance::criterion11_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const Criterion& c : kCriteria) selected.push_back(c.number);

  int failures = 0;
  for (int number : selected) {
    const Criterion* found = nullptr;
    for (const Criterion& c : kCriteria)
      if (c.number == number) found = &c;
    if (!found) {
      std::fprintf(stderr, "unknown criterion %d\n", number);
      return 2;
    }
    dmlrn::acceptance::Result r;
    try {
      r = found->run();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s%s%s\n", r.pass ? "PASS" : "FAIL", found->number,
                found->title, r.detail.empty() ? "" : " -- ", r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
