#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rasim {

// Exact rational for spread parameters like 1/75: keeps thresholds
// integer-valued whenever den divides num*c, which double division preserves.
struct Fraction {
  int64_t num = 0;
  int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  double times(double c) const { return static_cast<double>(num) * c / static_cast<double>(den); }

  bool operator==(const Fraction&) const = default;
};

// splitmix64, used to derive independent seeds from (seed, salt...) tuples.
inline uint64_t hash_mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t salt) { return hash_mix(seed ^ hash_mix(salt)); }
inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

// Deterministic PRNG with self-contained samplers. All draws are defined in
// terms of the raw 64-bit stream, so traces reproduce bit-for-bit across
// platforms (std::*_distribution makes no such promise).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed == 0 ? 0x853c49e6748fea9bULL : seed) {
    // warm up so nearby seeds decorrelate
    for (int i = 0; i < 4; ++i) next();
  }

  uint64_t next() {
    state_ = hash_mix(state_ + 0x632be59bd9b4e019ULL);
    return state_;
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    return static_cast<int>(static_cast<uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64));
  }

  // Knuth multiplication method; adequate for the small arrival rates here.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  // Box-Muller, one value per call.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Draws an index from non-negative weights summing to roughly 1.
  int categorical(const std::vector<double>& weights) {
    double r = uniform();
    for (size_t i = 0; i < weights.size(); ++i) {
      r -= weights[i];
      if (r < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  uint64_t state_;
};

// Row-major rectangular array; just enough for demand and request matrices.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  T& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace rasim
