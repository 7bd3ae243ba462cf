#pragma once

#include "nsl/grid.hpp"

namespace nsl {

/// Exact piecewise-constant representation of the decreasing rearrangement
/// f* of a grid field. Values are strictly decreasing and positive (zero
/// samples are dropped: f* vanishes beyond the support measure anyway),
/// measures are positive multiples of the cell volume.
struct StepRearrangement {
  struct Step {
    double value;
    double measure;
  };
  std::vector<Step> steps;

  double total_measure() const;

  /// f*(tau) for tau > 0 (right-continuous decreasing).
  double value_at(double tau) const;

  /// Exact integral of the step function f* over (0, tau).
  double integral_to(double tau) const;
};

/// lambda_f(y) = cell_volume * #{cells : |f| > y}. Requires y > 0.
double distribution_function(const ScalarField& f, double y);

/// Sort |f| descending, attach cell_volume per cell, merge equal values.
StepRearrangement rearrangement(const ScalarField& f);

/// f**(tau) = (1/tau) * integral of f* over (0,tau). Requires tau > 0.
double double_star(const StepRearrangement& r, double tau);

}  // namespace nsl
