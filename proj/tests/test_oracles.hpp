// Shared test oracles, kept independent of the implementation paths they
// check: brute-force rearrangements, fine quadrature, and closed forms.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "nsl/grid.hpp"
#include "nsl/rearrangement.hpp"

namespace oracle {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// f*(tau) straight from the sup definition: sup{ y : lambda_f(y) > tau },
// scanning candidate levels taken from the sample values themselves.
inline double rearrangement_sup_definition(const nsl::ScalarField& f, double tau) {
  std::vector<double> levels;
  levels.reserve(f.v.size());
  for (double v : f.v) levels.push_back(std::abs(v));
  std::sort(levels.begin(), levels.end());
  const double cell = f.grid.cell_volume();
  auto lambda = [&](double y) {
    // #{|f| > y} via binary search in the sorted magnitudes.
    const auto it = std::upper_bound(levels.begin(), levels.end(), y);
    return static_cast<double>(levels.end() - it) * cell;
  };
  double best = 0.0;
  for (double y : levels) {
    if (y > 0.0 && lambda(y * (1.0 - 1e-15)) > tau) best = std::max(best, y);
  }
  return best;
}

// Composite Simpson on [a,b].
inline double simpson(const std::function<double(double)>& g, double a, double b,
                      int panels) {
  const double h = (b - a) / (2 * panels);
  double acc = g(a) + g(b);
  for (int i = 1; i < 2 * panels; ++i) acc += g(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Fine-quadrature evaluation of both Hardy inequality sides for a step
// function given as (lo, hi, value) pieces; integrates on a log-spaced
// envelope of the support.
struct HardyOracle {
  double lhs1, rhs1, lhs2, rhs2;
};

inline HardyOracle hardy_fine_quadrature(
    const std::vector<std::array<double, 3>>& pieces, double p, double q) {
  // Everything is integrated piece by piece so Simpson never straddles a
  // jump or kink of the integrand.
  auto inner_lo = [&](double t) {  // Int_0^t phi(s) ds/s, fine quadrature
    double acc = 0.0;
    for (const auto& pc : pieces) {
      if (t <= pc[0]) break;
      const double hi = std::min(t, pc[1]);
      acc += simpson([&](double s) { return pc[2] / s; }, pc[0], hi, 200);
    }
    return acc;
  };
  const double lo = pieces.front()[0];
  const double hi = pieces.back()[1];
  const double total = inner_lo(hi);
  auto inner_hi = [&](double t) { return total - inner_lo(t); };

  double j1 = 0.0, r1 = 0.0, j2 = 0.0, r2 = 0.0;
  for (const auto& pc : pieces) {
    j1 += simpson([&](double t) { return std::pow(t, -q / p - 1.0) *
                                          std::pow(inner_lo(t), q); },
                  pc[0], pc[1], 200);
    j2 += simpson([&](double t) { return std::pow(t, q / p - 1.0) *
                                          std::pow(inner_hi(t), q); },
                  pc[0], pc[1], 200);
    r1 += simpson([&](double s) { return std::pow(std::pow(s, -1.0 / p) * pc[2], q) / s; },
                  pc[0], pc[1], 200);
    r2 += simpson([&](double s) { return std::pow(std::pow(s, 1.0 / p) * pc[2], q) / s; },
                  pc[0], pc[1], 200);
  }
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    const double a = pieces[i - 1][1], b = pieces[i][0];
    if (b > a) {  // gap: the inner integrals are constant across it
      j1 += std::pow(inner_lo(a), q) * (p / q) *
            (std::pow(a, -q / p) - std::pow(b, -q / p));
      j2 += std::pow(inner_hi(b), q) * (p / q) *
            (std::pow(b, q / p) - std::pow(a, q / p));
    }
  }
  j1 += std::pow(total, q) * (p / q) * std::pow(hi, -q / p);
  j2 += std::pow(total, q) * (p / q) * std::pow(lo, q / p);
  return {std::pow(j1, 1.0 / q), std::pow(r1, 1.0 / q), std::pow(j2, 1.0 / q),
          std::pow(r2, 1.0 / q)};
}

}  // namespace oracle
