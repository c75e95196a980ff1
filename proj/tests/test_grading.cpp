#include <doctest.h>

#include <complex>
#include <random>

#include "fellq/grading.hpp"

using namespace fellq;
using cplx = std::complex<double>;

TEST_CASE("pairing reference values") {
  CHECK(std::abs(pairing(TorusPoint{0.0}, GroupIndex{5}) - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(pairing(TorusPoint{0.37, 0.11}, GroupIndex{0, 0}) - cplx(1.0, 0.0)) < 1e-15);
  // d = 2, x = (0.25, 0), t = (1, 2): e^{2 pi i / 4} = i
  CHECK(std::abs(pairing(TorusPoint{0.25, 0.0}, GroupIndex{1, 2}) - cplx(0.0, 1.0)) < 1e-15);
}

TEST_CASE("pairing is unit modulus") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    const double x0 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const int t0 = static_cast<int>(rng() % 17) - 8;
    CHECK(std::abs(std::abs(pairing(TorusPoint{x0}, GroupIndex{t0})) - 1.0) < 1e-15);
  }
}

TEST_CASE("bicharacter law and conjugation") {
  std::mt19937_64 rng(12);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int n = 0; n < 100; ++n) {
    const TorusPoint x{u01(), u01()};
    const GroupIndex t{static_cast<int>(rng() % 9) - 4, static_cast<int>(rng() % 9) - 4};
    const GroupIndex s{static_cast<int>(rng() % 9) - 4, static_cast<int>(rng() % 9) - 4};
    CHECK(std::abs(pairing(x, t + s) - pairing(x, t) * pairing(x, s)) < 1e-14);
    CHECK(std::abs(pairing(x, -t) - std::conj(pairing(x, t))) < 1e-15);
  }
}

TEST_CASE("torus points reduce mod 1, negatives included") {
  const TorusPoint x{-0.25, 1.75, 3.0};
  CHECK(x[0] == doctest::Approx(0.75));
  CHECK(x[1] == doctest::Approx(0.75));
  CHECK(x[2] == doctest::Approx(0.0));
  for (int j = 0; j < 3; ++j) {
    CHECK(x[j] >= 0.0);
    CHECK(x[j] < 1.0);
  }
}

TEST_CASE("rank mismatch is rejected") {
  const TorusPoint x1{0.1};
  const GroupIndex t2{1, 2};
  const GroupIndex t1{1};
  CHECK_THROWS_AS(pairing(x1, t2), std::invalid_argument);
  CHECK_THROWS_AS(t1 + t2, std::invalid_argument);
}

TEST_CASE("group index arithmetic") {
  const GroupIndex a{2, -3};
  const GroupIndex b{-2, 3};
  CHECK((a + b).is_zero());
  CHECK(-a == b);
  CHECK(a.max_abs() == 3);
  CHECK(GroupIndex::zero(2).is_zero());
}
