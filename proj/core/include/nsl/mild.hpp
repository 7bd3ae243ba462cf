#pragma once

#include <cstdint>

#include "nsl/grid.hpp"

namespace nsl {

struct SolverConfig {
  double dt = 1e-3;
  double T = 1.0;
  bool dealias = true;        // 2/3 rule on nonlinear products
  double picard_tol = 1e-12;  // relative fixed-point tolerance per step
  int picard_max = 50;
  int store_every = 1;
  bool linear = false;  // F = 0: pure projected heat flow
};

/// Time-indexed velocity states with cached L^2 norms. States share one grid
/// and are divergence-free; `linear` records whether the trajectory solves
/// the F = 0 system (residual evaluation then drops the flux terms).
struct Trajectory {
  Grid grid;
  std::vector<double> times;
  std::vector<VectorField> states;
  std::vector<double> energy;     // |u(t)|_2^2
  std::vector<double> enstrophy;  // |grad u(t)|_2^2
  bool dealias = true;
  bool linear = false;

  explicit Trajectory(const Grid& g) : grid(g) {}

  const VectorField& initial() const { return states.front(); }
  std::size_t steps() const { return times.size(); }
};

/// Smooth temporal profile theta with theta(T) = 0: either a C^3 interior
/// bump on (t0, t1) or a C^3 decay from theta(0) = 1 to zero at t1.
class TimeProfile {
public:
  static TimeProfile bump(double t0, double t1);
  static TimeProfile decay(double t1);

  double value(double t) const;
  double derivative(double t) const;
  double start() const { return t0_; }
  double end() const { return t1_; }

private:
  enum class Kind { Bump, Decay };
  TimeProfile(Kind k, double t0, double t1) : kind_(k), t0_(t0), t1_(t1) {}
  Kind kind_;
  double t0_;
  double t1_;
};

/// Space-time test pair theta(t) phi(x) for the formulation pairings.
struct TestFunction {
  VectorField phi;
  TimeProfile theta;
  bool solenoidal = false;
};

/// F_jk = u_j u_k, products dealiased when requested.
TensorField nonlinear_flux(const VectorField& u, bool dealias = true);

/// P = R_j R_k F_jk (zero mode 0).
ScalarField pressure_from_flux(const TensorField& F);

/// Associated pressure series of a trajectory (empty profile for linear runs).
std::vector<ScalarField> pressure_series(const Trajectory& traj);

/// Advective derivative (a . grad) b with pointwise products.
VectorField convect(const VectorField& a, const VectorField& b);

/// Duhamel evaluation e^{t Lap} f - Int_0^t grad . e^{(t-s) Lap} P F(s) ds
/// with the integral by trapezoidal quadrature on the stored time grid;
/// t must be a stored time.
VectorField mild_rhs(const VectorField& f, const std::vector<TensorField>& flux,
                     const std::vector<double>& times, double t);

/// Exponential integrator with trapezoidal Duhamel closure per step, fixed
/// point closed by Picard iteration. Initial data must be divergence-free
/// and band-limited; the zero mode must vanish.
Trajectory solve_mild(const VectorField& f, const SolverConfig& config);

struct Residual {
  double defect;
  double scale;  // sum of the absolute pairing terms
};

enum class Formulation { Weak, Projected, VeryWeak };

/// Space-time defect of one formulation pairing for a battery of tests.
/// Time integrals use the trapezoidal rule on the trajectory grid.
std::vector<Residual> residual_suite(const Trajectory& traj,
                                     const std::vector<ScalarField>* pressure,
                                     const std::vector<TestFunction>& tests,
                                     Formulation which);

Residual weak_residual(const Trajectory& traj, const std::vector<ScalarField>& pressure,
                       const TestFunction& test);
Residual projected_residual(const Trajectory& traj, const TestFunction& test);
Residual very_weak_residual(const Trajectory& traj, const TestFunction& test);

/// Reproducible residual battery: tensor products of low trigonometric modes
/// (alternately Leray-projected to solenoidal) with bump/decay time profiles.
std::vector<TestFunction> test_battery(const Grid& g, double T, int count,
                                       std::uint64_t seed);

}  // namespace nsl
