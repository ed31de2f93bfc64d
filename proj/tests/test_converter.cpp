#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "rasim/converter.hpp"

using namespace rasim;
using rasim::testfix::tiny_region;

TEST_CASE("softmax matches the closed form and sums to one") {
  const std::vector<double> f = softmax_fractions({1.0, 0.0, 0.0}, 1.0);
  const double e = std::exp(1.0);
  CHECK(f[0] == doctest::Approx(e / (e + 2.0)).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(1.0 / (e + 2.0)).epsilon(1e-12));
  CHECK(f[2] == f[1]);
  CHECK(f[0] + f[1] + f[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f[0] == doctest::Approx(0.5761168847658291).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(0.21194155761708544).epsilon(1e-12));
}

TEST_CASE("softmax properties over random inputs") {
  Rng rng(77);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + rng.uniform_int(14);
    std::vector<double> a(n);
    for (double& v : a) v = rng.uniform(-40.0, 40.0);
    const double zeta = rng.uniform(0.0, 3.0);
    const std::vector<double> f = softmax_fractions(a, zeta);

    double sum = 0.0;
    for (double v : f) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);

    if (zeta > 0.0) {
      // argmax preserved
      const int ai = static_cast<int>(std::max_element(a.begin(), a.end()) - a.begin());
      const int fi = static_cast<int>(std::max_element(f.begin(), f.end()) - f.begin());
      CHECK(f[ai] == f[fi]);
    }
  }
}

TEST_CASE("zeta zero collapses to uniform") {
  const std::vector<double> f = softmax_fractions({5.0, -3.0, 0.7, 12.0}, 0.0);
  for (double v : f) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("softmax is shift-invariant (max subtraction)") {
  const std::vector<double> a = softmax_fractions({700.0, 699.0, 698.0}, 1.0);
  const std::vector<double> b = softmax_fractions({2.0, 1.0, 0.0}, 1.0);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("over-provision factor clamps the logit") {
  const ConverterParams p;
  CHECK(over_provision(0.0, p) == 1.0);
  CHECK(over_provision(5.0, p) == 1.0);                                       // clamped high
  CHECK(over_provision(-3.0, p) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  CHECK(over_provision(-50.0, p) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  CHECK(over_provision(-1.0, p) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  ConverterParams base2 = p;
  base2.omega = 2.0;
  CHECK(over_provision(-2.0, base2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("server counts ceil the rru target") {
  const RegionTopology one = tiny_region(1, 1, 4, 1, 5.0, Fraction{1, 1}, Fraction{1, 1});
  // y = 600 on a 150-rru type: exactly 4 servers
  const MsbRequestVector r = to_server_counts({1.0}, 0.0, 600.0, 0, one);
  CHECK(r.y[0] == 600.0);
  CHECK(r.n[0] == 4);
  // 601 rounds up
  CHECK(to_server_counts({1.0}, 0.0, 601.0, 0, one).n[0] == 5);
}

TEST_CASE("uniform fractions on fifteen msbs request one server each") {
  // the uniform baseline's shape: 1/(F-1) per msb, z = 0, the sum over 1
  // being the built-in buffer
  const RegionTopology topo = tiny_region(15, 1, 150, 1);
  std::vector<double> fractions(15, 1.0 / 14.0);
  const MsbRequestVector r = to_server_counts(fractions, 0.0, 1500.0, 0, topo);
  for (int f = 0; f < 15; ++f) {
    CHECK(r.y[f] == doctest::Approx(1500.0 / 14.0).epsilon(1e-12));
    CHECK(r.n[f] == 1);  // ceil(107.14 / 150)
  }
  CHECK(r.z == 0.0);
}

TEST_CASE("zero demand requests nothing") {
  const RegionTopology topo = tiny_region(3, 1, 6, 1);
  const MsbRequestVector r = to_server_counts({0.5, 0.5, 0.5}, 1.0, 0.0, 0, topo);
  for (int f = 0; f < 3; ++f) {
    CHECK(r.n[f] == 0);
    CHECK(r.y[f] == 0.0);
  }
}

TEST_CASE("raw path softmaxes the head and clamps the tail") {
  const RegionTopology topo = tiny_region(3, 1, 30, 1);
  ConverterParams p;
  const std::vector<double> raw = {1.0, 0.0, 0.0, 0.0};  // last entry: z = omega^0 = 1
  const MsbRequestVector r = convert(raw, p, 1500.0, 0, topo);
  const std::vector<double> f = softmax_fractions({1.0, 0.0, 0.0}, p.zeta);
  for (int i = 0; i < 3; ++i) {
    CHECK(r.y[i] == doctest::Approx(f[i] * 2.0 * 1500.0).epsilon(1e-12));
    CHECK(r.n[i] == static_cast<int>(std::ceil(r.y[i] / 150.0)));
  }
  CHECK(r.z == 1.0);
}

TEST_CASE("ceiling never under-provisions the target") {
  Rng rng(4242);
  for (int trial = 0; trial < 10000; ++trial) {
    const int msbs = 2 + rng.uniform_int(14);
    const int per_msb = 1 + rng.uniform_int(20);
    const RegionTopology topo = tiny_region(msbs, 1, msbs * per_msb, 1);
    std::vector<double> raw(msbs + 1);
    for (double& v : raw) v = rng.uniform(-4.0, 4.0);
    const double c = 150.0 * rng.uniform_int(40);
    const ConverterParams p;
    const MsbRequestVector r = convert(raw, p, c, 0, topo);

    double total_target = 0.0;
    for (int f = 0; f < msbs; ++f) {
      CHECK(150.0 * r.n[f] >= r.y[f] - 1e-9);  // per-msb ceiling
      CHECK(r.n[f] >= 0);
      if (c > 0.0) CHECK(r.n[f] >= 1);  // softmax fractions are strictly positive
      total_target += r.y[f];
    }
    CHECK(150.0 * std::accumulate(r.n.begin(), r.n.end(), 0) >= total_target - 1e-9);
    CHECK(r.z >= std::exp(-3.0) - 1e-12);
    CHECK(r.z <= 1.0 + 1e-12);
  }
}

TEST_CASE("converter parameter validation") {
  ConverterParams p;
  CHECK_NOTHROW(validate_converter(p));
  p.zeta = -1.0;
  CHECK_THROWS_AS(validate_converter(p), std::invalid_argument);
  p = ConverterParams{};
  p.omega = 0.0;
  CHECK_THROWS_AS(validate_converter(p), std::invalid_argument);
  p = ConverterParams{};
  p.clamp_lo = 1.0;  // above clamp_hi
  CHECK_THROWS_AS(validate_converter(p), std::invalid_argument);
}
