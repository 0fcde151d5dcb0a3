#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <symlab/rng.hpp>
#include <symlab/young.hpp>

using namespace symlab;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("power integrands") {
  const YoungFunction p2 = young_power(2.0);
  CHECK(yeval(p2, 0) == 0.0);
  CHECK(yeval(p2, 3) == doctest::Approx(9.0));
  CHECK(yright_deriv(p2, 3) == doctest::Approx(6.0));
  CHECK(zero_end(p2) == 0.0);

  const YoungFunction scaled = young_power(1.0, 2.0);
  CHECK(yeval(scaled, 3) == doctest::Approx(6.0));
  CHECK(yright_deriv(scaled, 0.5) == doctest::Approx(2.0));

  CHECK_THROWS_AS(young_power(0.5), std::invalid_argument);
  CHECK_THROWS_AS(yeval(p2, -1.0), std::invalid_argument);
}

TEST_CASE("sqrt shift integrand") {
  const YoungFunction s = young_sqrt_shift();
  CHECK(yeval(s, 0) == 0.0);
  CHECK(yeval(s, 1) == doctest::Approx(std::sqrt(2.0) - 1));
  CHECK(yright_deriv(s, 1) == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("minimal and maximal integrands") {
  const YoungFunction lo = young_phi_min();
  CHECK(yeval(lo, 0.5) == 0.0);
  CHECK(yeval(lo, 1.0) == 0.0);
  CHECK(yeval(lo, 2.0) == doctest::Approx(1.0));
  CHECK(zero_end(lo) == doctest::Approx(1.0));

  const YoungFunction hi = young_phi_max();
  CHECK(yeval(hi, 0.5) == doctest::Approx(0.5));
  CHECK(yeval(hi, 1.0) == doctest::Approx(1.0));
  CHECK(yeval(hi, 1.5) == kInf);
  CHECK(zero_end(hi) == 0.0);
}

TEST_CASE("piecewise linear integrands") {
  const YoungFunction pw = young_piecewise({{0, 0}, {1, 0}, {2, 1}}, 3.0);
  CHECK(yeval(pw, 0.5) == 0.0);
  CHECK(yeval(pw, 1.5) == doctest::Approx(0.5));
  CHECK(yeval(pw, 2.0) == doctest::Approx(1.0));
  CHECK(yeval(pw, 3.0) == doctest::Approx(4.0));
  CHECK(yright_deriv(pw, 1.25) == doctest::Approx(1.0));
  CHECK(yright_deriv(pw, 2.0) == doctest::Approx(3.0));
  CHECK(zero_end(pw) == doctest::Approx(1.0));

  const YoungFunction wall = young_piecewise({{0, 0}, {1, 0.5}}, kInf);
  CHECK(yeval(wall, 1.0) == doctest::Approx(0.5));
  CHECK(yeval(wall, 1.01) == kInf);

  // Slopes must be nondecreasing and the curve starts at (0, 0).
  CHECK_THROWS_AS(young_piecewise({{0, 0}, {1, 2}, {2, 2.5}}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(young_piecewise({{0.5, 0}, {1, 1}}, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(young_piecewise({{0, 0}, {1, 1}}, 0.5), std::invalid_argument);
}

TEST_CASE("conjugates in closed form") {
  // (t^2)* = s^2/4.
  const YoungFunction c2 = young_conjugate(young_power(2.0));
  CHECK(yeval(c2, 2.0) == doctest::Approx(1.0));
  CHECK(yeval(c2, 1.0) == doctest::Approx(0.25));

  // (3 t^2)* = s^2/12.
  const YoungFunction cs = young_conjugate(young_power(2.0, 3.0));
  CHECK(yeval(cs, 6.0) == doctest::Approx(3.0));

  // (t)* is the 0/infinity wall at 1.
  const YoungFunction c1 = young_conjugate(young_power(1.0));
  CHECK(yeval(c1, 0.5) == 0.0);
  CHECK(yeval(c1, 1.0) == 0.0);
  CHECK(yeval(c1, 2.0) == kInf);
}

TEST_CASE("minimal and maximal integrands are conjugate duals") {
  const YoungFunction cmin = young_conjugate(young_phi_min());
  CHECK(yeval(cmin, 0.3) == doctest::Approx(0.3));
  CHECK(yeval(cmin, 1.0) == doctest::Approx(1.0));
  CHECK(yeval(cmin, 1.2) == kInf);

  const YoungFunction cmax = young_conjugate(young_phi_max());
  CHECK(yeval(cmax, 0.5) == 0.0);
  CHECK(yeval(cmax, 1.0) == 0.0);
  CHECK(yeval(cmax, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("numeric conjugate obeys the pairing inequality") {
  const YoungFunction phi = young_sqrt_shift();
  const YoungFunction conj = young_conjugate(phi);
  // Closed form of the conjugate: 1 - sqrt(1 - t^2) below 1.
  CHECK(yeval(conj, 0.5) == doctest::Approx(1 - std::sqrt(0.75)).epsilon(1e-3));
  Rng rng{5};
  for (int i = 0; i < 50; ++i) {
    const double s = rng.uniform(0, 3), t = rng.uniform(0, 0.99);
    CHECK(s * t <= yeval(phi, s) + yeval(conj, t) + 1e-6);
  }
}

TEST_CASE("affine truncation") {
  const YoungFunction tr = young_truncate(young_power(2.0), 1.0);
  CHECK(yeval(tr, 0.5) == 0.0);
  CHECK(yeval(tr, 1.0) == 0.0);
  CHECK(yeval(tr, 1.5) == doctest::Approx(1.0));  // (2t - 1) - 1
  CHECK(yeval(tr, 2.0) == doctest::Approx(2.0));
  // The truncation point must lie beyond the zero set, with a finite value.
  CHECK_THROWS_AS(young_truncate(young_phi_min(), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(young_truncate(young_phi_max(), 2.0), std::invalid_argument);
}

TEST_CASE("luxemburg norm of indicators") {
  const Grid g = make_grid(2, 0.5, {0, 0}, {5, 5});
  GridFunction f(g);
  for (int i = 0; i < 6; ++i) f.at(2 + i % 3, 3 + i / 3) = 2.0;
  const double area = 6 * 0.25;  // 1.5

  for (double p : {1.0, 2.0, 4.0}) {
    const double want = 2.0 * std::pow(area, 1.0 / p);
    CHECK(luxemburg_norm(young_power(p), f) == doctest::Approx(want).epsilon(1e-8));
  }

  GridFunction unit(g);
  for (int i = 0; i < 6; ++i) unit.at(2 + i % 3, 3 + i / 3) = 1.0;
  CHECK(luxemburg_norm(young_phi_max(), unit) == doctest::Approx(std::max(1.0, area)));
  CHECK(luxemburg_norm(young_phi_min(), unit) ==
        doctest::Approx(area / (area + 1)).epsilon(1e-8));

  CHECK(luxemburg_norm(young_power(2.0), GridFunction(g)) == 0.0);
}
