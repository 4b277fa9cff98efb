#include "dmlrn/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dmlrn/image_ops.hpp"

namespace dmlrn {

namespace {

struct Edge {
  double w;
  int32_t a;
  int32_t b;
};

class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n), rank_(n, 0), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      int next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  int join(int a, int b) {
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    if (rank_[a] == rank_[b]) ++rank_[a];
    return a;
  }

  int size(int x) const { return size_[x]; }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  std::vector<int> size_;
};

}  // namespace

SegmentLabeling segment_graph_based(const RgbImage& rgb, double k, int min_size,
                                    double presmooth_sigma) {
  if (k <= 0.0) throw std::invalid_argument("segment_graph_based: k must be > 0");
  if (min_size < 1) throw std::invalid_argument("segment_graph_based: min_size must be >= 1");
  validate(rgb);

  const RgbImage img = gaussian_smooth(rgb, presmooth_sigma);
  const int h = img.height, w = img.width;
  const int n = h * w;

  auto weight = [&](int y0, int x0, int y1, int x1) {
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = 255.0 * (img.at(c, y0, x0) - img.at(c, y1, x1));
      acc += d * d;
    }
    return std::sqrt(acc);
  };

  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(4) * n);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int32_t p = y * w + x;
      if (x + 1 < w) edges.push_back({weight(y, x, y, x + 1), p, p + 1});
      if (y + 1 < h) edges.push_back({weight(y, x, y + 1, x), p, p + w});
      if (x + 1 < w && y + 1 < h)
        edges.push_back({weight(y, x, y + 1, x + 1), p, p + w + 1});
      if (x - 1 >= 0 && y + 1 < h)
        edges.push_back({weight(y, x, y + 1, x - 1), p, p + w - 1});
    }

  std::sort(edges.begin(), edges.end(), [](const Edge& lhs, const Edge& rhs) {
    if (lhs.w != rhs.w) return lhs.w < rhs.w;
    if (lhs.a != rhs.a) return lhs.a < rhs.a;
    return lhs.b < rhs.b;
  });

  DisjointSet ds(n);
  std::vector<double> threshold(n, k);  // Int(C) + k/|C|, with Int({p}) = 0
  for (const Edge& e : edges) {
    const int a = ds.find(e.a);
    const int b = ds.find(e.b);
    if (a == b) continue;
    if (e.w <= threshold[a] && e.w <= threshold[b]) {
      const int root = ds.join(a, b);
      threshold[root] = e.w + k / ds.size(root);
    }
  }

  // Enforce the minimum segment size along the lowest-weight boundary edges.
  for (const Edge& e : edges) {
    const int a = ds.find(e.a);
    const int b = ds.find(e.b);
    if (a != b && (ds.size(a) < min_size || ds.size(b) < min_size)) ds.join(a, b);
  }

  SegmentLabeling seg;
  seg.height = h;
  seg.width = w;
  seg.labels.assign(n, -1);
  std::vector<int32_t> root_label(n, -1);
  int32_t next = 0;
  for (int p = 0; p < n; ++p) {
    const int root = ds.find(p);
    if (root_label[root] < 0) {
      root_label[root] = next++;
      seg.areas.push_back(0);
    }
    seg.labels[p] = root_label[root];
    ++seg.areas[root_label[root]];
  }
  seg.segment_count = next;
  return seg;
}

void validate(const SegmentLabeling& seg) {
  if (seg.height < 1 || seg.width < 1)
    throw std::invalid_argument("SegmentLabeling: empty grid");
  const size_t n = static_cast<size_t>(seg.height) * seg.width;
  if (seg.labels.size() != n)
    throw std::invalid_argument("SegmentLabeling: label storage mismatch");
  if (seg.segment_count < 1 ||
      seg.areas.size() != static_cast<size_t>(seg.segment_count))
    throw std::invalid_argument("SegmentLabeling: bad segment count");
  std::vector<int64_t> counted(seg.segment_count, 0);
  for (int32_t l : seg.labels) {
    if (l < 0 || l >= seg.segment_count)
      throw std::invalid_argument("SegmentLabeling: label out of range");
    ++counted[l];
  }
  int64_t total = 0;
  for (int32_t s = 0; s < seg.segment_count; ++s) {
    if (counted[s] != seg.areas[s] || seg.areas[s] < 1)
      throw std::invalid_argument("SegmentLabeling: area bookkeeping mismatch");
    total += seg.areas[s];
  }
  if (total != static_cast<int64_t>(n))
    throw std::invalid_argument("SegmentLabeling: areas do not cover the image");
}

}  // namespace dmlrn
