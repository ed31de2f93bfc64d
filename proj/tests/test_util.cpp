#include <set>

#include "doctest.h"
#include "rasim/util.hpp"

using namespace rasim;

TEST_CASE("rng streams are deterministic and seed-sensitive") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  bool differs = false;
  Rng a2(42);
  for (int i = 0; i < 100; ++i) differs = differs || a2.next() != c.next();
  CHECK(differs);
}

TEST_CASE("uniform_int stays in range and covers it") {
  Rng rng(7);
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) {
    const int v = rng.uniform_int(5);
    CHECK(v >= 0);
    CHECK(v < 5);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
  CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("uniform real bounds") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform(-1.0, 1.0);
    CHECK(v >= -1.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("poisson mean roughly matches over many draws") {
  Rng rng(3);
  const double mean = 1.8;
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.poisson(mean);
  // se = sqrt(mean/n) ~ 0.0095; allow 4 sigma
  CHECK(sum / n == doctest::Approx(mean).epsilon(0.03));
  CHECK(rng.poisson(0.0) == 0);
  CHECK(rng.poisson(-1.0) == 0);
}

TEST_CASE("normal moments") {
  Rng rng(5);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(1).scale(0.05));
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("derive_seed separates salts and chains") {
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(1, 2, 3) == derive_seed(derive_seed(1, 2), 3));
}

TEST_CASE("fraction keeps integral thresholds exact") {
  const Fraction f{1, 75};
  CHECK(f.times(1500.0) == 20.0);
  CHECK(f.times(150.0) == 2.0);
  CHECK(Fraction{1, 15}.times(1500.0) == 100.0);
  CHECK(f.value() == doctest::Approx(1.0 / 75.0).epsilon(1e-15));
}

TEST_CASE("grid is row-major and comparable") {
  Grid<int> g(2, 3, 0);
  g(1, 2) = 7;
  CHECK(g.data()[5] == 7);
  CHECK(g.rows() == 2);
  CHECK(g.cols() == 3);
  Grid<int> h(2, 3, 0);
  CHECK(g != h);
  h(1, 2) = 7;
  CHECK(g == h);
}

TEST_CASE("median of odd, even, and singleton sets") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(median({9.0}) == 9.0);
  CHECK_THROWS_AS(median({}), std::invalid_argument);
}
