#include <doctest.h>

#include <cmath>
#include <vector>

#include "kacmix/rng.hpp"

using kacmix::RngStream;

TEST_CASE("equal seeds and streams reproduce bit-identical sequences") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int k = 0; k < 1000; ++k) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different streams decorrelate") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  int equal = 0;
  for (int k = 0; k < 1000; ++k)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("uniform doubles stay in [0,1) with the right mean") {
  RngStream rng(1, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // mean 1/2, sd of the mean = 1/sqrt(12 n)
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("index sampling is unbiased across the range") {
  RngStream rng(3, 0);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int k = 0; k < n; ++k) ++counts[rng.next_index(10)];
  for (int c : counts) CHECK(std::abs(c - n / 10) < 5 * std::sqrt(n / 10.0));
}

TEST_CASE("pair sampling covers exactly the i<j pairs") {
  RngStream rng(4, 0);
  const int n = 5;
  std::vector<int> counts(n * n, 0);
  for (int k = 0; k < 50000; ++k) {
    const auto [i, j] = rng.next_pair(n);
    REQUIRE(i >= 0);
    REQUIRE(i < j);
    REQUIRE(j < n);
    ++counts[i * n + j];
  }
  const double expected = 50000.0 / 10.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      CHECK(std::abs(counts[i * n + j] - expected) < 5 * std::sqrt(expected));
}

TEST_CASE("gaussians have unit variance") {
  RngStream rng(5, 0);
  double sum = 0.0;
  double sum2 = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double g = rng.next_gaussian();
    sum += g;
    sum2 += g * g;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}
