#include "nsl/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nsl/singular.hpp"

namespace nsl {

namespace {

// 1 for s <= 1/2, 0 for s >= 1, C^3 monotone in between.
double window_profile(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double u = 2.0 * s - 1.0;
  const double u4 = u * u * u * u;
  return 1.0 - u4 * (35.0 - 84.0 * u + 70.0 * u * u - 20.0 * u * u * u);
}

bool positive_half(const std::array<int, 3>& k, int n) {
  for (int a = 0; a < n; ++a) {
    if (k[a] > 0) return true;
    if (k[a] < 0) return false;
  }
  return false;  // zero mode
}

}  // namespace

InitialDataSpec InitialDataSpec::parse_kind(const std::string& name) {
  InitialDataSpec spec;
  if (name == "taylor_green") {
    spec.kind = Kind::TaylorGreen;
  } else if (name == "random_solenoidal") {
    spec.kind = Kind::RandomSolenoidal;
    spec.band = 4;
    spec.amplitude = 0.1;
  } else if (name == "radial_power") {
    spec.kind = Kind::RadialPower;
  } else if (name == "indicator") {
    spec.kind = Kind::Indicator;
  } else if (name == "spike") {
    spec.kind = Kind::Spike;
    spec.height = 1.0;
  } else {
    throw std::invalid_argument("unknown initial data family: " + name);
  }
  return spec;
}

ScalarField random_band_limited(const Grid& g, int band, std::uint64_t seed) {
  if (band < 1 || band > g.points_per_axis() / 3)
    throw std::invalid_argument("band must lie in [1, N/3]");
  SplitMix64 rng(seed);
  SpectralField F(g);
  const int n = g.dim();
  const int N = g.points_per_axis();
  auto mode_index = [&](const std::array<int, 3>& k) {
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a) {
      const int j = k[a] >= 0 ? k[a] : k[a] + N;
      idx = idx * N + static_cast<std::size_t>(j);
    }
    return idx;
  };
  std::array<int, 3> k{0, 0, 0};
  const double scale = std::pow(2.0 * band + 1.0, -0.5 * n);
  auto assign = [&](const std::array<int, 3>& kk) {
    if (!positive_half(kk, n)) return;
    const std::complex<double> c(scale * rng.symmetric(), scale * rng.symmetric());
    std::array<int, 3> neg{0, 0, 0};
    for (int a = 0; a < n; ++a) neg[a] = -kk[a];
    F.c[mode_index(kk)] = c;
    F.c[mode_index(neg)] = std::conj(c);
  };
  if (n == 2) {
    for (k[0] = -band; k[0] <= band; ++k[0])
      for (k[1] = -band; k[1] <= band; ++k[1]) assign(k);
  } else {
    for (k[0] = -band; k[0] <= band; ++k[0])
      for (k[1] = -band; k[1] <= band; ++k[1])
        for (k[2] = -band; k[2] <= band; ++k[2]) assign(k);
  }
  return inverse_transform(F);
}

VectorField random_solenoidal(const Grid& g, int band, double amplitude,
                              std::uint64_t seed) {
  VectorField u(g);
  for (int a = 0; a < g.dim(); ++a)
    u.comp[a] = random_band_limited(g, band, seed + 0x100ull * (a + 1));
  u = leray_project(u);
  const double norm = l2_norm(u);
  if (norm == 0.0) throw std::runtime_error("degenerate random draw");
  const double s = amplitude / norm;
  for (auto& c : u.comp)
    for (auto& v : c.v) v *= s;
  return u;
}

VectorField taylor_green(const Grid& g, double amplitude) {
  if (g.dim() != 2)
    throw std::invalid_argument("taylor_green is a planar flow; use n = 2");
  VectorField u(g);
  const double kappa = 2.0 * std::numbers::pi / g.box_length();
  for_each_cell(g, [&](std::size_t idx, const std::array<double, 3>& x) {
    u.comp[0].v[idx] = amplitude * std::sin(kappa * x[0]) * std::cos(kappa * x[1]);
    u.comp[1].v[idx] = -amplitude * std::cos(kappa * x[0]) * std::sin(kappa * x[1]);
  });
  return u;
}

VectorField make_velocity_field(const InitialDataSpec& spec, const Grid& g,
                                std::uint64_t seed) {
  switch (spec.kind) {
    case InitialDataSpec::Kind::TaylorGreen:
      return taylor_green(g, spec.amplitude);
    case InitialDataSpec::Kind::RandomSolenoidal:
      return random_solenoidal(g, spec.band, spec.amplitude, seed);
    default:
      throw std::invalid_argument("initial data family does not define a velocity");
  }
}

ScalarField make_scalar_field(const InitialDataSpec& spec, const Grid& g,
                              std::uint64_t seed) {
  const double L = g.box_length();
  switch (spec.kind) {
    case InitialDataSpec::Kind::RadialPower: {
      if (!(spec.window > 0.0 && spec.window <= 0.5 * L))
        throw std::invalid_argument("radial_power window must lie in (0, L/2]");
      ScalarField f(g);
      const double floor_r = 0.5 * g.spacing();
      for_each_cell(g, [&](std::size_t idx, const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) r2 += x[a] * x[a];
        const double r = std::max(std::sqrt(r2), floor_r);
        f.v[idx] = spec.amplitude * std::pow(r, spec.exponent) *
                   window_profile(r / spec.window);
      });
      return f;
    }
    case InitialDataSpec::Kind::Indicator: {
      if (!(spec.radius > 0.0 && spec.radius < 0.5 * L))
        throw std::invalid_argument("indicator radius must lie in (0, L/2)");
      ScalarField f(g);
      for_each_cell(g, [&](std::size_t idx, const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) r2 += x[a] * x[a];
        if (r2 <= spec.radius * spec.radius) f.v[idx] = spec.amplitude;
      });
      return f;
    }
    case InitialDataSpec::Kind::Spike: {
      ScalarField f(g);
      std::array<int, 3> m{0, 0, 0};
      for (int a = 0; a < g.dim(); ++a) {
        const double pos = spec.position[a];
        if (pos < -0.5 * L || pos >= 0.5 * L)
          throw std::invalid_argument("spike position outside the box");
        m[a] = static_cast<int>(std::lround((pos + 0.5 * L) / g.spacing())) %
               g.points_per_axis();
      }
      f.v[g.flatten(m)] = spec.height;
      return f;
    }
    case InitialDataSpec::Kind::TaylorGreen:
    case InitialDataSpec::Kind::RandomSolenoidal:
      return magnitude(make_velocity_field(spec, g, seed));
  }
  throw std::invalid_argument("unknown initial data family");
}

}  // namespace nsl
