#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsl/initial_data.hpp"
#include "nsl/rearrangement.hpp"
#include "test_oracles.hpp"

using namespace nsl;
using std::numbers::pi;

TEST_SUITE_BEGIN("rearrangement");

TEST_CASE("distribution function of a disc indicator approximates its area") {
  Grid g(2, 128, 4.0);
  InitialDataSpec spec;
  spec.kind = InitialDataSpec::Kind::Indicator;
  spec.radius = 1.0;
  ScalarField f = make_scalar_field(spec, g, 0);

  // One cell layer around the circumference bounds the counting error.
  const double layer = 2.0 * pi * spec.radius * g.spacing() * 2.0;
  CHECK(std::abs(distribution_function(f, 0.5) - pi) <= layer);
  CHECK(distribution_function(f, 1.5) == 0.0);
  CHECK_THROWS_AS((void)distribution_function(f, 0.0), std::domain_error);
}

TEST_CASE("distribution function of a windowed |x|^-1 profile") {
  Grid g(2, 256, 4.0);
  InitialDataSpec spec;
  spec.kind = InitialDataSpec::Kind::RadialPower;
  spec.exponent = -1.0;
  spec.window = 1.9;
  ScalarField f = make_scalar_field(spec, g, 0);
  // Superlevel sets {|x|^-1 > y} have area pi/y^2 in the resolved range
  // (1/y well inside the window plateau and far above the grid scale).
  for (double y : {1.2, 1.6, 2.0}) {
    const double want = pi / (y * y);
    const double got = distribution_function(f, y);
    CHECK(std::abs(got - want) <= 2.0 * pi * (1.0 / y) * g.spacing() * 2.0);
  }
}

TEST_CASE("indicator rearranges to a single step") {
  Grid g(2, 32, 2.0);
  ScalarField f(g);
  int cells = 0;
  for_each_cell(g, [&](std::size_t i, const std::array<double, 3>& x) {
    if (x[0] > 0.3 && x[1] < -0.2) {
      f.v[i] = 1.0;
      ++cells;
    }
  });
  auto r = rearrangement(f);
  REQUIRE(r.steps.size() == 1);
  CHECK(r.steps[0].value == 1.0);
  CHECK(r.steps[0].measure == doctest::Approx(cells * g.cell_volume()));
}

TEST_CASE("two-level function rearranges to two steps") {
  Grid g(2, 16, 1.0);
  ScalarField f(g);
  f.v[0] = f.v[1] = f.v[2] = 3.0;
  f.v[10] = f.v[11] = -1.5;  // |f| matters
  auto r = rearrangement(f);
  REQUIRE(r.steps.size() == 2);
  CHECK(r.steps[0].value == 3.0);
  CHECK(r.steps[0].measure == doctest::Approx(3 * g.cell_volume()));
  CHECK(r.steps[1].value == 1.5);
  CHECK(r.steps[1].measure == doctest::Approx(2 * g.cell_volume()));
}

TEST_CASE("rearrangement agrees with the sup-definition oracle") {
  Grid g(2, 16, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField f = random_band_limited(g, 5, 500 + trial);
    auto r = rearrangement(f);
    const double total = r.total_measure();
    for (int i = 1; i <= 40; ++i) {
      const double tau = total * i / 41.0;
      CHECK(r.value_at(tau) ==
            doctest::Approx(oracle::rearrangement_sup_definition(f, tau))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("double star of a single step") {
  StepRearrangement r{{{1.0, 0.5}}};
  CHECK(double_star(r, 0.25) == doctest::Approx(1.0));
  CHECK(double_star(r, 0.5) == doctest::Approx(1.0));
  CHECK(double_star(r, 2.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS((void)double_star(r, 0.0), std::domain_error);
}

TEST_CASE("f* <= f** pointwise") {
  Grid g(2, 16, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    ScalarField f = random_band_limited(g, 5, 700 + trial);
    auto r = rearrangement(f);
    const double total = r.total_measure();
    for (int i = 1; i <= 30; ++i) {
      const double tau = 1.5 * total * i / 30.0;
      CHECK(r.value_at(tau) <= double_star(r, tau) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("permutation invariance: shuffled cells give identical steps") {
  Grid g(2, 16, 1.0);
  ScalarField f = random_band_limited(g, 5, 901);
  ScalarField shuffled(g);
  // Deterministic permutation: reverse order.
  for (std::size_t i = 0; i < f.v.size(); ++i)
    shuffled.v[i] = f.v[f.v.size() - 1 - i];
  auto a = rearrangement(f);
  auto b = rearrangement(shuffled);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].value == b.steps[i].value);
    CHECK(a.steps[i].measure == b.steps[i].measure);
  }
}

TEST_CASE("zero field rearranges to nothing") {
  Grid g(2, 16, 1.0);
  auto r = rearrangement(ScalarField(g));
  CHECK(r.steps.empty());
  CHECK(double_star(r, 1.0) == 0.0);
}

TEST_SUITE_END();
