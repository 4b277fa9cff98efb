#include "dmlrn/net/tensor.hpp"

namespace dmlrn {

// Each output row is produced by exactly one thread in a fixed order, so
// results are bit-identical for any thread count.

void gemm_nn(int m, int n, int k, const double* a, const double* b, double* c,
             bool accumulate) {
#pragma omp parallel for schedule(static) if (m > 1 && static_cast<long>(m) * n * k > 16384)
  for (int i = 0; i < m; ++i) {
    double* ci = c + static_cast<size_t>(i) * n;
    if (!accumulate)
      for (int j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = a + static_cast<size_t>(i) * k;
    for (int p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      const double* bp = b + static_cast<size_t>(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

void gemm_tn(int m, int n, int k, const double* a, const double* b, double* c,
             bool accumulate) {
#pragma omp parallel for schedule(static) if (m > 1 && static_cast<long>(m) * n * k > 16384)
  for (int i = 0; i < m; ++i) {
    double* ci = c + static_cast<size_t>(i) * n;
    if (!accumulate)
      for (int j = 0; j < n; ++j) ci[j] = 0.0;
    for (int p = 0; p < k; ++p) {
      const double av = a[static_cast<size_t>(p) * m + i];
      if (av == 0.0) continue;
      const double* bp = b + static_cast<size_t>(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

void gemm_nt(int m, int n, int k, const double* a, const double* b, double* c,
             bool accumulate) {
#pragma omp parallel for schedule(static) if (m > 1 && static_cast<long>(m) * n * k > 16384)
  for (int i = 0; i < m; ++i) {
    double* ci = c + static_cast<size_t>(i) * n;
    const double* ai = a + static_cast<size_t>(i) * k;
    for (int j = 0; j < n; ++j) {
      const double* bj = b + static_cast<size_t>(j) * k;
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += ai[p] * bj[p];
      ci[j] = accumulate ? ci[j] + acc : acc;
    }
  }
}

}  // namespace dmlrn
