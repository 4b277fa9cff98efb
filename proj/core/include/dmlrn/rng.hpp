#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace dmlrn {

// splitmix64, used to derive independent stream seeds from a base seed.
inline uint64_t mix_seed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
  return mix_seed(mix_seed(mix_seed(base ^ mix_seed(a)) ^ mix_seed(b)) ^ mix_seed(c));
}

/// Deterministic random source. All draws are hand-rolled on top of
/// mt19937_64 so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), rejection sampled (n > 0).
  uint64_t uniform_below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via the polar method.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  std::string state() const {
    std::ostringstream os;
    os << engine_ << ' ' << (have_spare_ ? 1 : 0) << ' ' << spare_;
    return os.str();
  }

  void restore(const std::string& s) {
    std::istringstream is(s);
    int flag = 0;
    is >> engine_ >> flag >> spare_;
    have_spare_ = flag != 0;
    if (!is) throw std::invalid_argument("Rng::restore: malformed state string");
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dmlrn
