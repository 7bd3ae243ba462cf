#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsl/grid.hpp"
#include "nsl/initial_data.hpp"
#include "test_oracles.hpp"

using namespace nsl;
using std::numbers::pi;

TEST_SUITE_BEGIN("grid");

TEST_CASE("grid invariants are enforced") {
  CHECK_THROWS_AS(Grid(4, 16, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2, 12, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2, 16, -1.0), std::invalid_argument);
  Grid g(2, 16, 2.0);
  CHECK(g.cell_volume() == doctest::Approx(std::pow(2.0 / 16, 2)));
  CHECK(g.freq_index(0) == 0);
  CHECK(g.freq_index(8) == -8);
  CHECK(g.freq_index(15) == -1);
}

TEST_CASE("zero field transforms to zero coefficients") {
  Grid g(2, 16, 1.0);
  ScalarField f(g);
  auto F = transform(f);
  for (const auto& c : F.c) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("single cosine mode has exactly two coefficients") {
  Grid g(2, 32, 3.0);
  ScalarField f(g);
  for_each_cell(g, [&](std::size_t i, const std::array<double, 3>& x) {
    f.v[i] = std::cos(2.0 * pi * x[0] / g.box_length());
  });
  auto F = transform(f);
  int nonzero = 0;
  for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& k) {
    if (std::abs(F.c[idx]) > 1e-12) {
      ++nonzero;
      CHECK(std::abs(k[0]) == 1);
      CHECK(k[1] == 0);
      CHECK(F.c[idx].real() == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(std::abs(F.c[idx].imag()) < 1e-14);
    }
  });
  CHECK(nonzero == 2);
}

TEST_CASE("round-trip and Parseval over 1000 random fields") {
  Grid g(2, 32, 2.5);
  double worst_rt = 0.0, worst_pv = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    ScalarField f = random_band_limited(g, 10, 1000 + trial);
    double fmax = 0.0;
    for (double v : f.v) fmax = std::max(fmax, std::abs(v));
    auto F = transform(f);
    auto back = inverse_transform(F);
    double diff = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i)
      diff = std::max(diff, std::abs(back.v[i] - f.v[i]));
    worst_rt = std::max(worst_rt, diff / fmax);
    worst_pv = std::max(worst_pv,
                        oracle::rel_err(spectral_energy(F), inner_product(f, f)));
  }
  CHECK(worst_rt <= 1e-12);
  CHECK(worst_pv <= 1e-12);
}

TEST_CASE("3d round-trip") {
  Grid g(3, 16, 1.0);
  ScalarField f = random_band_limited(g, 5, 99);
  auto back = inverse_transform(transform(f));
  double diff = 0.0, fmax = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    diff = std::max(diff, std::abs(back.v[i] - f.v[i]));
    fmax = std::max(fmax, std::abs(f.v[i]));
  }
  CHECK(diff <= 1e-12 * fmax);
}

TEST_CASE("gradient of a constant vanishes") {
  Grid g(2, 16, 1.0);
  ScalarField f(g);
  for (auto& v : f.v) v = 3.25;
  auto grad = gradient(f);
  for (int a = 0; a < 2; ++a)
    for (double v : grad.comp[a].v) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("spectral derivative matches the closed form") {
  Grid g(2, 64, 5.0);
  const double k = 2.0 * pi / g.box_length();
  ScalarField f(g);
  for_each_cell(g, [&](std::size_t i, const std::array<double, 3>& x) {
    f.v[i] = std::sin(k * x[0]);
  });
  auto grad = gradient(f);
  double worst = 0.0;
  for_each_cell(g, [&](std::size_t i, const std::array<double, 3>& x) {
    worst = std::max(worst, std::abs(grad.comp[0].v[i] - k * std::cos(k * x[0])));
    worst = std::max(worst, std::abs(grad.comp[1].v[i]));
  });
  CHECK(worst <= 1e-12);
}

TEST_CASE("divergence of gradient equals the laplacian") {
  Grid g(2, 32, 2.0);
  ScalarField f = random_band_limited(g, 10, 7);
  auto lhs = divergence(gradient(f));
  auto rhs = laplacian(f);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    worst = std::max(worst, std::abs(lhs.v[i] - rhs.v[i]));
    scale = std::max(scale, std::abs(rhs.v[i]));
  }
  CHECK(worst <= 1e-12 * scale);
}

TEST_CASE("inner products: trivial and closed-form values") {
  Grid g(2, 32, 3.0);
  ScalarField zero(g), one(g), cosx(g);
  for (auto& v : one.v) v = 1.0;
  for_each_cell(g, [&](std::size_t i, const std::array<double, 3>& x) {
    cosx.v[i] = std::cos(2.0 * pi * x[0] / g.box_length());
  });
  CHECK(inner_product(cosx, zero) == 0.0);
  CHECK(inner_product(one, one) == doctest::Approx(std::pow(3.0, 2)).epsilon(1e-13));
  CHECK(inner_product(cosx, cosx) ==
        doctest::Approx(0.5 * std::pow(3.0, 2)).epsilon(1e-13));
}

TEST_CASE("grid mismatch is a structural error") {
  Grid a(2, 16, 1.0), b(2, 32, 1.0);
  ScalarField f(a), h(b);
  CHECK_THROWS_AS((void)inner_product(f, h), std::invalid_argument);
}

TEST_CASE("integration by parts is exact to round-off") {
  Grid g(2, 32, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    ScalarField f = random_band_limited(g, 10, 40 + trial);
    VectorField u(g);
    u.comp[0] = random_band_limited(g, 10, 140 + trial);
    u.comp[1] = random_band_limited(g, 10, 240 + trial);
    const double lhs = inner_product(gradient(f), u);
    const double rhs = -inner_product(f, divergence(u));
    worst = std::max(worst, oracle::rel_err(lhs, rhs));
  }
  CHECK(worst <= 1e-10);
}

TEST_SUITE_END();
