#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dmlrn {

/// Dense NCHW activation/parameter storage, double precision throughout so
/// finite-difference checks are meaningful.
struct Tensor {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int n_, int c_, int h_, int w_, double fill = 0.0)
      : n(n_), c(c_), h(h_), w(w_),
        v(static_cast<size_t>(n_) * c_ * h_ * w_, fill) {}

  size_t size() const { return v.size(); }

  double& at(int i, int j, int y, int x) {
    return v[((static_cast<size_t>(i) * c + j) * h + y) * w + x];
  }
  double at(int i, int j, int y, int x) const {
    return v[((static_cast<size_t>(i) * c + j) * h + y) * w + x];
  }

  double* sample(int i) { return v.data() + static_cast<size_t>(i) * c * h * w; }
  const double* sample(int i) const {
    return v.data() + static_cast<size_t>(i) * c * h * w;
  }

  bool same_shape(const Tensor& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }

  void zero() { std::fill(v.begin(), v.end(), 0.0); }

  bool all_finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

inline Tensor& operator+=(Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("Tensor +=: shape mismatch");
  for (size_t i = 0; i < a.v.size(); ++i) a.v[i] += b.v[i];
  return a;
}

// C[MxN] (+)= A[MxK] * B[KxN]; row-major, parallel over rows of C.
void gemm_nn(int m, int n, int k, const double* a, const double* b, double* c,
             bool accumulate);
// C[MxN] (+)= A^T * B where A is [KxM]
void gemm_tn(int m, int n, int k, const double* a, const double* b, double* c,
             bool accumulate);
// C[MxN] (+)= A * B^T where B is [NxK]
void gemm_nt(int m, int n, int k, const double* a, const double* b, double* c,
             bool accumulate);

}  // namespace dmlrn
