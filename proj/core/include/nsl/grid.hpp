#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace nsl {

/// Uniform periodic box [-L/2, L/2)^n with N cells per axis, n in {2,3}.
/// Wavevector indices live in the integer cube [-N/2, N/2)^n; the physical
/// frequency of index k is xi = 2*pi*k/L.
class Grid {
public:
  Grid(int dim, int points_per_axis, double box_length);

  int dim() const { return n_; }
  int points_per_axis() const { return N_; }
  double box_length() const { return L_; }
  double spacing() const { return L_ / N_; }
  double cell_volume() const;
  double volume() const;
  std::size_t size() const { return size_; }

  /// Multi-index of a flattened cell index (last axis fastest). Unused
  /// trailing entries are zero for n = 2.
  std::array<int, 3> unflatten(std::size_t idx) const;
  std::size_t flatten(const std::array<int, 3>& m) const;

  /// Physical coordinate of axis index j.
  double coordinate(int j) const { return -0.5 * L_ + j * spacing(); }

  /// Integer wavevector component of axis index j, in [-N/2, N/2).
  int freq_index(int j) const { return j < N_ / 2 ? j : j - N_; }
  double frequency(int j) const;

  /// Minimal-image displacement between axis indices (periodic wrap).
  double min_image(double dx) const;

  bool operator==(const Grid& other) const = default;

private:
  int n_;
  int N_;
  double L_;
  std::size_t size_;
};

struct ScalarField {
  Grid grid;
  std::vector<double> v;

  explicit ScalarField(const Grid& g) : grid(g), v(g.size(), 0.0) {}
  ScalarField(const Grid& g, std::vector<double> values);

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

struct VectorField {
  Grid grid;
  std::vector<ScalarField> comp;  // grid.dim() components

  explicit VectorField(const Grid& g);

  ScalarField& operator[](int a) { return comp[a]; }
  const ScalarField& operator[](int a) const { return comp[a]; }
};

/// Symmetric role not assumed: all n*n components F_jk stored, index j*n+k.
struct TensorField {
  Grid grid;
  std::vector<ScalarField> comp;

  explicit TensorField(const Grid& g);

  ScalarField& at(int j, int k) { return comp[j * grid.dim() + k]; }
  const ScalarField& at(int j, int k) const { return comp[j * grid.dim() + k]; }
};

/// Fourier coefficients in FFT layout; index k along each axis encodes the
/// integer frequency freq_index(k). Coefficients satisfy Hermitian symmetry
/// whenever they represent a real field.
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> c;

  explicit SpectralField(const Grid& g) : grid(g), c(g.size(), 0.0) {}
};

struct SpectralVector {
  Grid grid;
  std::vector<SpectralField> comp;

  explicit SpectralVector(const Grid& g);

  SpectralField& operator[](int a) { return comp[a]; }
  const SpectralField& operator[](int a) const { return comp[a]; }
};

/// Forward transform, normalized so that f(x) = sum_k c_k exp(i xi_k . x).
/// A unit-amplitude cosine mode therefore carries coefficients 1/2 at +-k.
SpectralField transform(const ScalarField& f);
ScalarField inverse_transform(const SpectralField& F);
SpectralVector transform(const VectorField& u);
VectorField inverse_transform(const SpectralVector& U);

/// Spectral differentiation (multiply by i*xi). The Nyquist plane k = -N/2
/// is annihilated so that derivatives of real fields stay real and the
/// calculus below closes: divergence(gradient(f)) == laplacian(f) exactly.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
ScalarField laplacian(const ScalarField& f);
void derivative_in_place(SpectralField& F, int axis);
void laplacian_in_place(SpectralField& F);

/// <f,g> = cell_volume * sum f*g, summed over components for vector/tensor
/// fields. Throws std::invalid_argument on grid mismatch.
double inner_product(const ScalarField& f, const ScalarField& g);
double inner_product(const VectorField& f, const VectorField& g);
double inner_product(const TensorField& f, const TensorField& g);

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);

/// Spectral energy L^n * sum |c_k|^2; equals <f,f> by Parseval.
double spectral_energy(const SpectralField& F);

/// Pointwise Euclidean magnitude |u|.
ScalarField magnitude(const VectorField& u);

/// Zero every mode with any |freq_index| exceeding N/3 (2/3 dealias rule).
void dealias_in_place(SpectralField& F);

/// Iterate over all modes: fn(flat_index, k) with k the integer wavevector.
template <typename Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const int n = g.dim();
  const int N = g.points_per_axis();
  std::array<int, 3> k{0, 0, 0};
  if (n == 2) {
    std::size_t idx = 0;
    for (int a = 0; a < N; ++a) {
      k[0] = g.freq_index(a);
      for (int b = 0; b < N; ++b, ++idx) {
        k[1] = g.freq_index(b);
        fn(idx, k);
      }
    }
  } else {
    std::size_t idx = 0;
    for (int a = 0; a < N; ++a) {
      k[0] = g.freq_index(a);
      for (int b = 0; b < N; ++b) {
        k[1] = g.freq_index(b);
        for (int c = 0; c < N; ++c, ++idx) {
          k[2] = g.freq_index(c);
          fn(idx, k);
        }
      }
    }
  }
}

/// Iterate over all cells: fn(flat_index, x) with x the cell coordinate.
template <typename Fn>
void for_each_cell(const Grid& g, Fn&& fn) {
  const int n = g.dim();
  const int N = g.points_per_axis();
  std::array<double, 3> x{0.0, 0.0, 0.0};
  if (n == 2) {
    std::size_t idx = 0;
    for (int a = 0; a < N; ++a) {
      x[0] = g.coordinate(a);
      for (int b = 0; b < N; ++b, ++idx) {
        x[1] = g.coordinate(b);
        fn(idx, x);
      }
    }
  } else {
    std::size_t idx = 0;
    for (int a = 0; a < N; ++a) {
      x[0] = g.coordinate(a);
      for (int b = 0; b < N; ++b) {
        x[1] = g.coordinate(b);
        for (int c = 0; c < N; ++c, ++idx) {
          x[2] = g.coordinate(c);
          fn(idx, x);
        }
      }
    }
  }
}

}  // namespace nsl
