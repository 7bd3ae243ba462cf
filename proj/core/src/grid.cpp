#include "nsl/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace nsl {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// FFTW planning is not thread-safe; execution on fresh arrays is.
struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

PlanPair& plans_for(const Grid& g) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(g.dim(), g.points_per_axis());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const int N = g.points_per_axis();
  std::vector<std::complex<double>> a(g.size()), b(g.size());
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  if (g.dim() == 2) {
    p.forward = fftw_plan_dft_2d(N, N, in, out, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_2d(N, N, in, out, FFTW_BACKWARD, flags);
  } else {
    p.forward = fftw_plan_dft_3d(N, N, N, in, out, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_3d(N, N, N, in, out, FFTW_BACKWARD, flags);
  }
  return cache.emplace(key, p).first->second;
}

void check_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

}  // namespace

Grid::Grid(int dim, int points_per_axis, double box_length)
    : n_(dim), N_(points_per_axis), L_(box_length) {
  if (n_ != 2 && n_ != 3) throw std::invalid_argument("grid dim must be 2 or 3");
  if (!is_power_of_two(N_) || N_ < 8)
    throw std::invalid_argument("points per axis must be a power of two >= 8");
  if (!(L_ > 0.0)) throw std::invalid_argument("box length must be positive");
  size_ = 1;
  for (int a = 0; a < n_; ++a) size_ *= static_cast<std::size_t>(N_);
}

double Grid::cell_volume() const { return std::pow(spacing(), n_); }

double Grid::volume() const { return std::pow(L_, n_); }

std::array<int, 3> Grid::unflatten(std::size_t idx) const {
  std::array<int, 3> m{0, 0, 0};
  for (int a = n_ - 1; a >= 0; --a) {
    m[a] = static_cast<int>(idx % N_);
    idx /= N_;
  }
  return m;
}

std::size_t Grid::flatten(const std::array<int, 3>& m) const {
  std::size_t idx = 0;
  for (int a = 0; a < n_; ++a) idx = idx * N_ + static_cast<std::size_t>(m[a]);
  return idx;
}

double Grid::frequency(int j) const {
  return 2.0 * std::numbers::pi * freq_index(j) / L_;
}

double Grid::min_image(double dx) const {
  dx = std::remainder(dx, L_);
  return dx;
}

ScalarField::ScalarField(const Grid& g, std::vector<double> values)
    : grid(g), v(std::move(values)) {
  if (v.size() != g.size()) throw std::invalid_argument("field size mismatch");
}

VectorField::VectorField(const Grid& g) : grid(g) {
  comp.reserve(g.dim());
  for (int a = 0; a < g.dim(); ++a) comp.emplace_back(g);
}

TensorField::TensorField(const Grid& g) : grid(g) {
  comp.reserve(g.dim() * g.dim());
  for (int a = 0; a < g.dim() * g.dim(); ++a) comp.emplace_back(g);
}

SpectralVector::SpectralVector(const Grid& g) : grid(g) {
  comp.reserve(g.dim());
  for (int a = 0; a < g.dim(); ++a) comp.emplace_back(g);
}

SpectralField transform(const ScalarField& f) {
  SpectralField F(f.grid);
  std::vector<std::complex<double>> in(f.v.begin(), f.v.end());
  auto& plans = plans_for(f.grid);
  fftw_execute_dft(plans.forward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(F.c.data()));
  const double scale = 1.0 / static_cast<double>(f.grid.size());
  for (auto& c : F.c) c *= scale;
  // The stored sample at index j sits at coordinate -L/2 + j*h, so the
  // plain DFT phase must be shifted by exp(+i xi . L/2) per axis to make
  // c_k the coefficient of exp(i xi_k . x) in physical coordinates.
  for_each_mode(f.grid, [&](std::size_t idx, const std::array<int, 3>& k) {
    int parity = 0;
    for (int a = 0; a < f.grid.dim(); ++a) parity += k[a];
    if (parity & 1) F.c[idx] = -F.c[idx];
  });
  return F;
}

ScalarField inverse_transform(const SpectralField& F) {
  ScalarField f(F.grid);
  std::vector<std::complex<double>> in(F.c);
  for_each_mode(F.grid, [&](std::size_t idx, const std::array<int, 3>& k) {
    int parity = 0;
    for (int a = 0; a < F.grid.dim(); ++a) parity += k[a];
    if (parity & 1) in[idx] = -in[idx];
  });
  std::vector<std::complex<double>> out(F.grid.size());
  auto& plans = plans_for(F.grid);
  fftw_execute_dft(plans.backward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  for (std::size_t i = 0; i < out.size(); ++i) f.v[i] = out[i].real();
  return f;
}

SpectralVector transform(const VectorField& u) {
  SpectralVector U(u.grid);
  for (int a = 0; a < u.grid.dim(); ++a) U.comp[a] = transform(u.comp[a]);
  return U;
}

VectorField inverse_transform(const SpectralVector& U) {
  VectorField u(U.grid);
  for (int a = 0; a < U.grid.dim(); ++a) u.comp[a] = inverse_transform(U.comp[a]);
  return u;
}

void derivative_in_place(SpectralField& F, int axis) {
  const Grid& g = F.grid;
  const int nyquist = -g.points_per_axis() / 2;
  const double base = 2.0 * std::numbers::pi / g.box_length();
  for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& k) {
    if (k[axis] == nyquist) {
      F.c[idx] = 0.0;
    } else {
      F.c[idx] *= std::complex<double>(0.0, base * k[axis]);
    }
  });
}

void laplacian_in_place(SpectralField& F) {
  const Grid& g = F.grid;
  const int nyquist = -g.points_per_axis() / 2;
  const double base = 2.0 * std::numbers::pi / g.box_length();
  for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& k) {
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      if (k[a] != nyquist) s += base * k[a] * base * k[a];
    }
    F.c[idx] *= -s;
  });
}

VectorField gradient(const ScalarField& f) {
  SpectralField F = transform(f);
  VectorField out(f.grid);
  for (int a = 0; a < f.grid.dim(); ++a) {
    SpectralField D = F;
    derivative_in_place(D, a);
    out.comp[a] = inverse_transform(D);
  }
  return out;
}

ScalarField divergence(const VectorField& u) {
  SpectralField acc(u.grid);
  for (int a = 0; a < u.grid.dim(); ++a) {
    SpectralField D = transform(u.comp[a]);
    derivative_in_place(D, a);
    for (std::size_t i = 0; i < acc.c.size(); ++i) acc.c[i] += D.c[i];
  }
  return inverse_transform(acc);
}

ScalarField laplacian(const ScalarField& f) {
  SpectralField F = transform(f);
  laplacian_in_place(F);
  return inverse_transform(F);
}

double inner_product(const ScalarField& f, const ScalarField& g) {
  check_same_grid(f.grid, g.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * g.v[i];
  return s * f.grid.cell_volume();
}

double inner_product(const VectorField& f, const VectorField& g) {
  check_same_grid(f.grid, g.grid);
  double s = 0.0;
  for (int a = 0; a < f.grid.dim(); ++a) s += inner_product(f.comp[a], g.comp[a]);
  return s;
}

double inner_product(const TensorField& f, const TensorField& g) {
  check_same_grid(f.grid, g.grid);
  double s = 0.0;
  for (std::size_t a = 0; a < f.comp.size(); ++a) s += inner_product(f.comp[a], g.comp[a]);
  return s;
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner_product(f, f)); }

double l2_norm(const VectorField& f) { return std::sqrt(inner_product(f, f)); }

double spectral_energy(const SpectralField& F) {
  double s = 0.0;
  for (const auto& c : F.c) s += std::norm(c);
  return s * F.grid.volume();
}

ScalarField magnitude(const VectorField& u) {
  ScalarField m(u.grid);
  for (std::size_t i = 0; i < m.v.size(); ++i) {
    double s = 0.0;
    for (int a = 0; a < u.grid.dim(); ++a) s += u.comp[a].v[i] * u.comp[a].v[i];
    m.v[i] = std::sqrt(s);
  }
  return m;
}

void dealias_in_place(SpectralField& F) {
  const int keep = F.grid.points_per_axis() / 3;
  for_each_mode(F.grid, [&](std::size_t idx, const std::array<int, 3>& k) {
    for (int a = 0; a < F.grid.dim(); ++a) {
      if (std::abs(k[a]) > keep) {
        F.c[idx] = 0.0;
        return;
      }
    }
  });
}

}  // namespace nsl
