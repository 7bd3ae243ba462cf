#include "nsl/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsl {

double StepRearrangement::total_measure() const {
  double m = 0.0;
  for (const auto& s : steps) m += s.measure;
  return m;
}

double StepRearrangement::value_at(double tau) const {
  if (tau < 0.0) throw std::domain_error("tau must be positive");
  double t = 0.0;
  for (const auto& s : steps) {
    t += s.measure;
    if (tau < t) return s.value;
  }
  return 0.0;
}

double StepRearrangement::integral_to(double tau) const {
  if (tau <= 0.0) return 0.0;
  double acc = 0.0;
  double t = 0.0;
  for (const auto& s : steps) {
    if (tau <= t + s.measure) return acc + s.value * (tau - t);
    acc += s.value * s.measure;
    t += s.measure;
  }
  return acc;
}

double distribution_function(const ScalarField& f, double y) {
  if (!(y > 0.0)) throw std::domain_error("level y must be positive");
  std::size_t count = 0;
  for (double v : f.v) {
    if (std::abs(v) > y) ++count;
  }
  return static_cast<double>(count) * f.grid.cell_volume();
}

StepRearrangement rearrangement(const ScalarField& f) {
  std::vector<double> mags;
  mags.reserve(f.v.size());
  for (double v : f.v) {
    const double m = std::abs(v);
    if (m > 0.0) mags.push_back(m);
  }
  std::sort(mags.begin(), mags.end(), std::greater<double>());

  StepRearrangement r;
  const double cell = f.grid.cell_volume();
  for (std::size_t i = 0; i < mags.size();) {
    std::size_t j = i;
    while (j < mags.size() && mags[j] == mags[i]) ++j;
    r.steps.push_back({mags[i], static_cast<double>(j - i) * cell});
    i = j;
  }
  return r;
}

double double_star(const StepRearrangement& r, double tau) {
  if (!(tau > 0.0)) throw std::domain_error("tau must be positive");
  return r.integral_to(tau) / tau;
}

}  // namespace nsl
