#pragma once

#include "nsl/grid.hpp"

namespace nsl {

/// Riesz transform component i: multiplier -i xi_i / |xi|. The zero mode is
/// annihilated (the multiplier is undefined there; the periodic model has no
/// constant mode by convention), as is the Nyquist plane of the component,
/// matching the derivative calculus.
ScalarField riesz(const ScalarField& f, int component);
void riesz_in_place(SpectralField& F, int component);

/// Real-space truncated Riesz transform: minimal-image kernel
/// y_i / (pi omega_{n-1} |y|^{n+1}) summed over eps < |y| < L/2 with
/// Riemann-sum quadrature. Demonstrates convergence to the multiplier.
ScalarField truncated_riesz(const ScalarField& f, double eps, int component);

/// Leray projection: u_i - xi_i xi_j u_j / |xi|^2 for xi != 0, identity on
/// the zero mode. Output is divergence-free to round-off.
VectorField leray_project(const VectorField& u);
void leray_project_in_place(SpectralVector& U);

/// Heat semigroup e^{t Laplacian} as the multiplier exp(-t|xi|^2); t >= 0.
ScalarField heat_semigroup(const ScalarField& f, double t);
VectorField heat_semigroup(const VectorField& u, double t);
void heat_multiplier_in_place(SpectralField& F, double t);

struct HeatKernelSample {
  double t;
  ScalarField values;
  /// Mass lost to the box truncation, estimated from the Gaussian tail.
  double tail_mass_deficit;
};

/// Gaussian heat kernel sampled at minimal-image coordinates. Throws
/// std::domain_error when the tail at |x| = L/2 exceeds 1e-12 relatively.
HeatKernelSample heat_kernel_sample(const Grid& g, double t);

/// Discrete periodic convolution with the sampled kernel; cross-validates
/// the spectral semigroup.
ScalarField kernel_convolve(const ScalarField& f, double t);

struct CZDecomposition {
  struct Cube {
    std::array<int, 3> corner;  // cell multi-index of the low corner
    int side;                   // side length in cells
  };
  double alpha;
  std::vector<Cube> cubes;
  ScalarField good;
  ScalarField bad;
};

/// Stopping-time Calderon-Zygmund decomposition over dyadic descendants of
/// the full box; cells are the atomic cubes. Requires alpha greater than the
/// box average of |f|.
CZDecomposition cz_decompose(const ScalarField& f, double alpha);

double cube_average_abs(const ScalarField& f, const CZDecomposition::Cube& c);
double cube_mean(const ScalarField& f, const CZDecomposition::Cube& c);

/// Empirical weak-(1,1) constant: max over the sweep of
/// alpha * |{ |Rf| > alpha }| / |f|_1, with |Rf| the Euclidean magnitude of
/// the component-wise Riesz transform.
double weak11_constant(const ScalarField& f, const std::vector<double>& alphas);

struct TruncationQuadrature {
  int t_nodes = 16;     // Gauss-Legendre nodes per homotopy sub-window
  int supersample = 2;  // y-grid refinement (and fallback interpolation grid)
};

/// Compactly supported solenoidal truncation: phi_R = rho_R phi - v_R with
/// v_R built from the fixed bump profiles (smoothstep cutoff rho, normalized
/// polynomial bump omega). Output vanishes for |x| >= 2R and is
/// divergence-free to quadrature tolerance. Requires 0 < 2R < L/2 and
/// divergence-free band-limited phi.
VectorField solenoidal_truncate(const VectorField& phi, double R,
                                const TruncationQuadrature& quad = {});

}  // namespace nsl
