#pragma once

#include <limits>

#include "nsl/rearrangement.hpp"

namespace nsl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Admissible Lorentz index pair: p in (1,inf], q in [1,inf], p=inf => q=inf.
struct LorentzIndex {
  double p;
  double q;

  LorentzIndex(double p_, double q_);

  bool p_infinite() const { return p == kInf; }
  bool q_infinite() const { return q == kInf; }

  /// Holder conjugate p' = p/(p-1); 1 for p = inf.
  double conjugate_p() const { return p_infinite() ? 1.0 : p / (p - 1.0); }
};

/// Lorentz quasinorm, integrated exactly over the step structure of f*.
double quasinorm(const StepRearrangement& r, const LorentzIndex& idx);
double quasinorm(const ScalarField& f, const LorentzIndex& idx);

/// Lorentz norm (f**-based). The first f** segment and the tail are exact;
/// interior segments use adaptive Gauss-Kronrod quadrature with relative
/// tolerance 1e-13 per segment, which bounds the total relative error for
/// the positive integrand.
double lorentz_norm(const StepRearrangement& r, const LorentzIndex& idx);
double lorentz_norm(const ScalarField& f, const LorentzIndex& idx);

/// Plain Lebesgue norm (cell_volume * sum |f|^p)^(1/p); p = inf gives max|f|.
/// Independent of the rearrangement path; p in [1, inf].
double lp_norm(const ScalarField& f, double p);

/// Non-negative piecewise-constant function on (0, infinity) with compact
/// support away from 0: disjoint increasing pieces, zero elsewhere.
struct StepFunction {
  struct Piece {
    double lo;
    double hi;
    double value;
  };
  std::vector<Piece> pieces;
};

/// Both sides of both Hardy inequalities; the contract is lhs <= p * rhs.
struct HardyResult {
  double lhs1;
  double rhs1;
  double lhs2;
  double rhs2;
};
HardyResult hardy_check(const StepFunction& phi, double p, double q);

/// Weak-norm interpolation: lhs = |f|_{L^{p,inf}} for 1/p=(1-theta)/p0+theta/p1,
/// rhs = |f|_{L^{p0,inf}}^{1-theta} * |f|_{L^{p1,inf}}^{theta} (f**-based norms).
struct InterpolationResult {
  double lhs;
  double rhs;
};
InterpolationResult interpolation_check(const ScalarField& f, double p0, double p1,
                                        double theta);

/// |u|_{L^{2p/(p-2),2}} / (|u|_2^{1-n/p} |grad u|_2^{n/p}) for p in (n, inf].
/// Scale-invariant by homogeneity; throws std::domain_error for u = 0.
double sobolev_ratio(const ScalarField& u, double p);

}  // namespace nsl
