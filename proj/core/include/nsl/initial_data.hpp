#pragma once

#include <cstdint>
#include <string>

#include "nsl/grid.hpp"

namespace nsl {

/// Counter-based deterministic generator (splitmix64): the output is a hash
/// of an advancing counter, so streams are reproducible across platforms.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Symmetric uniform in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

private:
  std::uint64_t state_;
};

struct InitialDataSpec {
  enum class Kind { TaylorGreen, RandomSolenoidal, RadialPower, Indicator, Spike };

  Kind kind = Kind::TaylorGreen;
  double amplitude = 1.0;
  int band = 0;           // random_solenoidal: retain modes with |k|_inf <= band
  double exponent = 0.0;  // radial_power
  double window = 0.0;    // radial_power: support radius (absolute length)
  double radius = 0.0;    // indicator: disc radius
  std::array<double, 3> position{0.0, 0.0, 0.0};  // spike location
  double height = 0.0;                            // spike value

  static InitialDataSpec parse_kind(const std::string& name);
};

/// Velocity initial data; supports taylor_green and random_solenoidal.
/// Solenoidal outputs are exactly Leray-projected and zero-mean.
VectorField make_velocity_field(const InitialDataSpec& spec, const Grid& g,
                                std::uint64_t seed);

/// Scalar data families: radial_power, indicator, spike (plus the magnitude
/// of the velocity families for convenience).
ScalarField make_scalar_field(const InitialDataSpec& spec, const Grid& g,
                              std::uint64_t seed);

/// Zero-mean random trigonometric polynomial with |k|_inf <= band.
ScalarField random_band_limited(const Grid& g, int band, std::uint64_t seed);

/// Random divergence-free band-limited velocity normalized to |u|_2 = amplitude.
VectorField random_solenoidal(const Grid& g, int band, double amplitude,
                              std::uint64_t seed);

/// Classic vortex array (sin kx cos ky, -cos kx sin ky); an exact
/// Navier-Stokes solution decaying like exp(-2 (2pi/L)^2 t).
VectorField taylor_green(const Grid& g, double amplitude = 1.0);

}  // namespace nsl
