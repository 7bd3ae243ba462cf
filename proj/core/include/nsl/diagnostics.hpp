#pragma once

#include "nsl/mild.hpp"

namespace nsl {

/// Per-time energy bookkeeping: kinetic |u(t)|_2^2, running dissipation
/// 2 Int_0^t |grad u|_2^2, and the defect
/// delta(t) = |f|_2^2 - |u(t)|_2^2 - 2 Int_0^t |grad u|_2^2.
struct EnergyReport {
  std::vector<double> times;
  std::vector<double> kinetic;
  std::vector<double> dissipation;
  std::vector<double> defect;

  double max_abs_defect() const;
};

EnergyReport energy_report(const Trajectory& traj);

/// Defect of the four-term cross-energy identity
/// <u(t),v(t)> = |f|^2 - 2 Int <grad u, grad v> - Int <(u.grad)u, v>
///             - Int <u, (v.grad)v>,
/// convective terms in advective form. Requires identical grids, time grids
/// and initial data.
std::vector<double> cross_energy_defect(const Trajectory& u, const Trajectory& v);

/// Prodi-Serrin accumulator A(t) = Int_0^t |u(s)|_{L^{p,inf}}^{2p/(p-n)} ds
/// (trapezoidal; p = inf uses the sup norm with exponent 2). Requires p > n.
std::vector<double> prodi_serrin_accumulator(const Trajectory& traj, double p);

struct WSReport {
  std::vector<double> times;
  std::vector<double> gap_sq;       // |w(t)|_2^2 for w = u - v
  std::vector<double> accumulator;  // A(t)
  std::vector<double> bound;        // B(t) = |w(0)|_2^2 exp(C A(t))
  std::vector<bool> within_bound;
  double constant;  // the C used
};

/// Gronwall comparison of two trajectories on the same grids.
WSReport gronwall_bound(const Trajectory& u, const Trajectory& v, double p, double C);

/// Smallest C such that |w(t)|^2 <= |w(0)|^2 exp(C A(t)) across the grid;
/// 0 when the initial gap vanishes.
double calibrate_gronwall_constant(const Trajectory& u, const Trajectory& v, double p);

struct EnergyInequalityReport {
  std::vector<double> defect;  // |f|^2 - |v(t)|^2 - 2 Int |grad v|^2
  std::vector<bool> holds;     // defect >= -tol with tol = 1e-8 |f|^2
};

EnergyInequalityReport energy_inequality_check(const Trajectory& traj);

}  // namespace nsl
