#include "nsl/singular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nsl/lorentz.hpp"
#include "nsl/rearrangement.hpp"

namespace nsl {

namespace {

using std::numbers::pi;

void check_component(const Grid& g, int component) {
  if (component < 0 || component >= g.dim())
    throw std::invalid_argument("component out of range");
}

// Gauss-Legendre nodes/weights on (0,1) by Newton iteration on P_m.
void gauss_legendre_01(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 - x);
    nodes[m - 1 - i] = 0.5 * (1.0 + x);
    const double w = 1.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[m - 1 - i] = w;
  }
}

// Smoothstep-based radial cutoff: 1 for r <= 1, 0 for r >= 2, C^3 in between.
double cutoff_profile(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double s = r - 1.0;
  const double s4 = s * s * s * s;
  return 1.0 - s4 * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
}

double cutoff_profile_deriv(double r) {
  if (r <= 1.0 || r >= 2.0) return 0.0;
  const double s = r - 1.0;
  const double s3 = s * s * s;
  return -s3 * (140.0 - 420.0 * s + 420.0 * s * s - 140.0 * s3);
}

// Normalized polynomial bump on B(0,2): c_n (1 - (|x|/2)^2)^4, integral 1.
double bump_normalization(int n) {
  // Int_{B(0,2)} (1-(r/2)^2)^4 dx = |S^{n-1}| 2^n B(n/2, 5) / 2.
  const double sphere = n == 2 ? 2.0 * pi : 4.0 * pi;
  const double beta = std::exp(std::lgamma(n / 2.0) + std::lgamma(5.0) -
                               std::lgamma(n / 2.0 + 5.0));
  return 1.0 / (sphere * std::pow(2.0, n) * 0.5 * beta);
}

// Periodic Catmull-Rom interpolation (4th-order) on a fine scalar field.
double catmull_rom(double p0, double p1, double p2, double p3, double s) {
  return p1 + 0.5 * s * (p2 - p0 +
                         s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                              s * (3.0 * (p1 - p2) + p3 - p0)));
}

double interpolate_periodic(const ScalarField& f, const std::array<double, 3>& x) {
  const Grid& g = f.grid;
  const int N = g.points_per_axis();
  const double h = g.spacing();
  const int n = g.dim();
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int a = 0; a < n; ++a) {
    double u = (x[a] + 0.5 * g.box_length()) / h;
    double fl = std::floor(u);
    frac[a] = u - fl;
    long j = static_cast<long>(fl) % N;
    if (j < 0) j += N;
    base[a] = static_cast<int>(j);
  }
  auto wrap = [N](int j) { return ((j % N) + N) % N; };
  if (n == 2) {
    double rows[4];
    for (int dj = -1; dj <= 2; ++dj) {
      const int j0 = wrap(base[0] + dj);
      double p[4];
      for (int dk = -1; dk <= 2; ++dk)
        p[dk + 1] = f.v[static_cast<std::size_t>(j0) * N + wrap(base[1] + dk)];
      rows[dj + 1] = catmull_rom(p[0], p[1], p[2], p[3], frac[1]);
    }
    return catmull_rom(rows[0], rows[1], rows[2], rows[3], frac[0]);
  }
  double planes[4];
  for (int dj = -1; dj <= 2; ++dj) {
    const int j0 = wrap(base[0] + dj);
    double rows[4];
    for (int dk = -1; dk <= 2; ++dk) {
      const int k0 = wrap(base[1] + dk);
      double p[4];
      for (int dl = -1; dl <= 2; ++dl)
        p[dl + 1] = f.v[(static_cast<std::size_t>(j0) * N + k0) * N + wrap(base[2] + dl)];
      rows[dk + 1] = catmull_rom(p[0], p[1], p[2], p[3], frac[2]);
    }
    planes[dj + 1] = catmull_rom(rows[0], rows[1], rows[2], rows[3], frac[1]);
  }
  return catmull_rom(planes[0], planes[1], planes[2], planes[3], frac[0]);
}

// Exact spectral upsampling by zero padding.
ScalarField upsample(const ScalarField& f, int factor) {
  if (factor == 1) return f;
  const Grid& g = f.grid;
  Grid fine(g.dim(), g.points_per_axis() * factor, g.box_length());
  SpectralField F = transform(f);
  SpectralField Ff(fine);
  const int N = g.points_per_axis();
  const int Nf = fine.points_per_axis();
  for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& k) {
    std::array<int, 3> m{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) m[a] = k[a] >= 0 ? k[a] : k[a] + Nf;
    std::size_t fidx = 0;
    for (int a = 0; a < g.dim(); ++a) fidx = fidx * Nf + static_cast<std::size_t>(m[a]);
    (void)N;
    Ff.c[fidx] = F.c[idx];
  });
  return inverse_transform(Ff);
}

}  // namespace

void riesz_in_place(SpectralField& F, int component) {
  const Grid& g = F.grid;
  check_component(g, component);
  const int nyquist = -g.points_per_axis() / 2;
  for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& k) {
    double norm2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) norm2 += static_cast<double>(k[a]) * k[a];
    if (norm2 == 0.0 || k[component] == nyquist) {
      F.c[idx] = 0.0;
    } else {
      const double m = -k[component] / std::sqrt(norm2);
      F.c[idx] *= std::complex<double>(0.0, m);
    }
  });
}

ScalarField riesz(const ScalarField& f, int component) {
  SpectralField F = transform(f);
  riesz_in_place(F, component);
  return inverse_transform(F);
}

ScalarField truncated_riesz(const ScalarField& f, double eps, int component) {
  const Grid& g = f.grid;
  check_component(g, component);
  const double L = g.box_length();
  if (!(eps > 0.0 && eps < 0.5 * L))
    throw std::domain_error("truncation radius must satisfy 0 < eps < L/2");

  const int n = g.dim();
  const int N = g.points_per_axis();
  const double h = g.spacing();
  const double omega = n == 2 ? 2.0 : pi;  // volume of the unit ball in R^{n-1}
  const double scale = g.cell_volume() / (pi * omega);

  // Precompute kernel over wrapped displacement offsets.
  struct Offset {
    std::array<int, 3> j;
    double kernel;
  };
  std::vector<Offset> offsets;
  std::array<int, 3> j{0, 0, 0};
  auto consider = [&](const std::array<int, 3>& jj) {
    std::array<double, 3> y{0.0, 0.0, 0.0};
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      y[a] = jj[a] >= N / 2 ? (jj[a] - N) * h : jj[a] * h;
      r2 += y[a] * y[a];
    }
    const double r = std::sqrt(r2);
    if (r <= eps || r >= 0.5 * L) return;
    offsets.push_back({jj, scale * y[component] / std::pow(r, n + 1)});
  };
  if (n == 2) {
    for (j[0] = 0; j[0] < N; ++j[0])
      for (j[1] = 0; j[1] < N; ++j[1]) consider(j);
  } else {
    for (j[0] = 0; j[0] < N; ++j[0])
      for (j[1] = 0; j[1] < N; ++j[1])
        for (j[2] = 0; j[2] < N; ++j[2]) consider(j);
  }

  ScalarField out(g);
  std::array<int, 3> m{0, 0, 0};
  for_each_cell(g, [&](std::size_t idx, const std::array<double, 3>&) {
    const auto mi = g.unflatten(idx);
    double acc = 0.0;
    for (const auto& off : offsets) {
      for (int a = 0; a < n; ++a) {
        m[a] = mi[a] - off.j[a];
        if (m[a] < 0) m[a] += N;
      }
      acc += off.kernel * f.v[g.flatten(m)];
    }
    out.v[idx] = acc;
  });
  return out;
}

void leray_project_in_place(SpectralVector& U) {
  const Grid& g = U.grid;
  const int n = g.dim();
  for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& k) {
    double norm2 = 0.0;
    for (int a = 0; a < n; ++a) norm2 += static_cast<double>(k[a]) * k[a];
    if (norm2 == 0.0) return;  // identity on the zero mode
    std::complex<double> dot = 0.0;
    for (int a = 0; a < n; ++a) dot += static_cast<double>(k[a]) * U.comp[a].c[idx];
    dot /= norm2;
    for (int a = 0; a < n; ++a) U.comp[a].c[idx] -= static_cast<double>(k[a]) * dot;
  });
}

VectorField leray_project(const VectorField& u) {
  SpectralVector U = transform(u);
  leray_project_in_place(U);
  return inverse_transform(U);
}

void heat_multiplier_in_place(SpectralField& F, double t) {
  if (t < 0.0) throw std::domain_error("heat semigroup requires t >= 0");
  if (t == 0.0) return;
  const Grid& g = F.grid;
  const double base = 2.0 * pi / g.box_length();
  for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& k) {
    double xi2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) xi2 += base * k[a] * base * k[a];
    F.c[idx] *= std::exp(-t * xi2);
  });
}

ScalarField heat_semigroup(const ScalarField& f, double t) {
  SpectralField F = transform(f);
  heat_multiplier_in_place(F, t);
  return inverse_transform(F);
}

VectorField heat_semigroup(const VectorField& u, double t) {
  VectorField out(u.grid);
  for (int a = 0; a < u.grid.dim(); ++a) out.comp[a] = heat_semigroup(u.comp[a], t);
  return out;
}

HeatKernelSample heat_kernel_sample(const Grid& g, double t) {
  if (!(t > 0.0)) throw std::domain_error("heat kernel requires t > 0");
  const double L = g.box_length();
  const double tail = std::exp(-L * L / (16.0 * t));
  const int n = g.dim();
  const double deficit = 1.0 - std::pow(std::erf(L / (4.0 * std::sqrt(t))), n);
  if (tail > 1e-12)
    throw std::domain_error("heat kernel tail at L/2 exceeds 1e-12; mass deficit " +
                            std::to_string(deficit));
  ScalarField phi(g);
  const double norm = std::pow(4.0 * pi * t, -0.5 * n);
  for_each_cell(g, [&](std::size_t idx, const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    phi.v[idx] = norm * std::exp(-r2 / (4.0 * t));
  });
  return {t, std::move(phi), deficit};
}

ScalarField kernel_convolve(const ScalarField& f, double t) {
  HeatKernelSample ker = heat_kernel_sample(f.grid, t);
  SpectralField K = transform(ker.values);
  SpectralField F = transform(f);
  const double vol = f.grid.volume();
  for (std::size_t i = 0; i < F.c.size(); ++i) F.c[i] *= vol * K.c[i];
  return inverse_transform(F);
}

double cube_average_abs(const ScalarField& f, const CZDecomposition::Cube& c) {
  const Grid& g = f.grid;
  const int n = g.dim();
  double acc = 0.0;
  std::array<int, 3> m{0, 0, 0};
  const int s = c.side;
  for (int a = 0; a < s; ++a) {
    m[0] = c.corner[0] + a;
    for (int b = 0; b < s; ++b) {
      m[1] = c.corner[1] + b;
      if (n == 2) {
        acc += std::abs(f.v[g.flatten(m)]);
      } else {
        for (int d = 0; d < s; ++d) {
          m[2] = c.corner[2] + d;
          acc += std::abs(f.v[g.flatten(m)]);
        }
      }
    }
  }
  double cells = 1.0;
  for (int a = 0; a < n; ++a) cells *= s;
  return acc / cells;
}

double cube_mean(const ScalarField& f, const CZDecomposition::Cube& c) {
  const Grid& g = f.grid;
  const int n = g.dim();
  double acc = 0.0;
  std::array<int, 3> m{0, 0, 0};
  const int s = c.side;
  for (int a = 0; a < s; ++a) {
    m[0] = c.corner[0] + a;
    for (int b = 0; b < s; ++b) {
      m[1] = c.corner[1] + b;
      if (n == 2) {
        acc += f.v[g.flatten(m)];
      } else {
        for (int d = 0; d < s; ++d) {
          m[2] = c.corner[2] + d;
          acc += f.v[g.flatten(m)];
        }
      }
    }
  }
  double cells = 1.0;
  for (int a = 0; a < n; ++a) cells *= s;
  return acc / cells;
}

CZDecomposition cz_decompose(const ScalarField& f, double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("cz threshold must be positive");
  const Grid& g = f.grid;
  const int n = g.dim();
  CZDecomposition dec{alpha, {}, f, ScalarField(g)};

  const CZDecomposition::Cube root{{0, 0, 0}, g.points_per_axis()};
  if (!(alpha > cube_average_abs(f, root)))
    throw std::domain_error("cz threshold must exceed the box average of |f|");

  // Stopping time: a dyadic child is selected when its |f| average first
  // exceeds alpha; otherwise subdivide down to single cells.
  std::vector<CZDecomposition::Cube> stack{root};
  while (!stack.empty()) {
    const CZDecomposition::Cube cube = stack.back();
    stack.pop_back();
    const int half = cube.side / 2;
    const int children = n == 2 ? 4 : 8;
    for (int c = 0; c < children; ++c) {
      CZDecomposition::Cube child;
      child.side = half;
      child.corner = cube.corner;
      child.corner[0] += (c & 1) ? half : 0;
      child.corner[1] += (c & 2) ? half : 0;
      if (n == 3) child.corner[2] += (c & 4) ? half : 0;
      if (cube_average_abs(f, child) > alpha) {
        dec.cubes.push_back(child);
      } else if (half > 1) {
        stack.push_back(child);
      }
    }
  }

  for (const auto& cube : dec.cubes) {
    const double mean = cube_mean(f, cube);
    std::array<int, 3> m{0, 0, 0};
    for (int a = 0; a < cube.side; ++a) {
      m[0] = cube.corner[0] + a;
      for (int b = 0; b < cube.side; ++b) {
        m[1] = cube.corner[1] + b;
        if (n == 2) {
          dec.good.v[g.flatten(m)] = mean;
        } else {
          for (int d = 0; d < cube.side; ++d) {
            m[2] = cube.corner[2] + d;
            dec.good.v[g.flatten(m)] = mean;
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < f.v.size(); ++i) dec.bad.v[i] = f.v[i] - dec.good.v[i];
  return dec;
}

double weak11_constant(const ScalarField& f, const std::vector<double>& alphas) {
  const double l1 = lp_norm(f, 1.0);
  if (l1 == 0.0) throw std::domain_error("weak11_constant requires f != 0");
  VectorField rf(f.grid);
  for (int a = 0; a < f.grid.dim(); ++a) rf.comp[a] = riesz(f, a);
  ScalarField mag = magnitude(rf);
  double best = 0.0;
  for (double alpha : alphas) {
    best = std::max(best, alpha * distribution_function(mag, alpha) / l1);
  }
  return best;
}

namespace {

// Exact point evaluation of a band-limited real field from its significant
// Fourier modes. Used to evaluate the truncation source term off-grid
// without interpolation error.
class ModeEvaluator {
 public:
  ModeEvaluator(const ScalarField& f, std::size_t max_modes) {
    SpectralField F = transform(f);
    double cmax = 0.0;
    for (const auto& c : F.c) cmax = std::max(cmax, std::abs(c));
    const double cutoff = 1e-13 * cmax;
    const double base = 2.0 * pi / f.grid.box_length();
    for_each_mode(f.grid, [&](std::size_t idx, const std::array<int, 3>& k) {
      if (std::abs(F.c[idx]) <= cutoff) return;
      Mode m;
      for (int a = 0; a < 3; ++a) m.xi[a] = base * k[a];
      m.amp = F.c[idx];
      modes_.push_back(m);
    });
    exact_ = modes_.size() <= max_modes;
  }

  bool exact() const { return exact_; }

  double operator()(const std::array<double, 3>& x) const {
    double acc = 0.0;
    for (const auto& m : modes_) {
      const double phase = m.xi[0] * x[0] + m.xi[1] * x[1] + m.xi[2] * x[2];
      acc += m.amp.real() * std::cos(phase) - m.amp.imag() * std::sin(phase);
    }
    return acc;
  }

 private:
  struct Mode {
    std::array<double, 3> xi;
    std::complex<double> amp;
  };
  std::vector<Mode> modes_;
  bool exact_ = false;
};

// t-intervals inside (0,1) where q(t) = |p + t d|^2 < r2 (q is a convex
// quadratic unless d = 0).
struct Interval {
  double lo, hi;
};

Interval ball_window(const std::array<double, 3>& p, const std::array<double, 3>& d,
                     int n, double r2) {
  double a = 0.0, b = 0.0, c = -r2;
  for (int i = 0; i < n; ++i) {
    a += d[i] * d[i];
    b += 2.0 * p[i] * d[i];
    c += p[i] * p[i];
  }
  if (a < 1e-300) return c < 0.0 ? Interval{0.0, 1.0} : Interval{1.0, 0.0};
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return {1.0, 0.0};
  const double sq = std::sqrt(disc);
  return {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)};
}

}  // namespace

VectorField solenoidal_truncate(const VectorField& phi, double R,
                                const TruncationQuadrature& quad) {
  const Grid& g = phi.grid;
  const int n = g.dim();
  const double L = g.box_length();
  if (!(R > 0.0 && 2.0 * R < 0.5 * L))
    throw std::domain_error("solenoidal_truncate requires 0 < 2R < L/2");
  {
    const double nphi = l2_norm(phi);
    const double ndiv = l2_norm(divergence(phi));
    if (ndiv > 1e-10 * std::max(nphi, 1e-300))
      throw std::domain_error("solenoidal_truncate requires a divergence-free field");
  }

  const double bump_c = bump_normalization(n) / std::pow(R, n);
  auto omega_R = [&](double r2) {
    const double s2 = r2 / (4.0 * R * R);
    if (s2 >= 1.0) return 0.0;
    const double w = 1.0 - s2;
    const double w2 = w * w;
    return bump_c * w2 * w2;
  };

  // Source term f_R = phi . grad(rho_R), supported in the annulus
  // R < |z| < 2R. Band-limited inputs are evaluated exactly from their
  // mode lists; otherwise fall back to interpolation on an upsampled grid.
  std::vector<ModeEvaluator> phi_modes;
  phi_modes.reserve(n);
  bool exact_eval = true;
  for (int a = 0; a < n; ++a) {
    phi_modes.emplace_back(phi.comp[a], 800);
    exact_eval = exact_eval && phi_modes.back().exact();
  }
  const int S = std::max(1, quad.supersample);
  std::vector<ScalarField> phi_fine;
  if (!exact_eval) {
    phi_fine.reserve(n);
    for (int a = 0; a < n; ++a) phi_fine.push_back(upsample(phi.comp[a], S));
  }
  const double R2in = R * R, R2out = 4.0 * R * R;
  auto source = [&](const std::array<double, 3>& z) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += z[a] * z[a];
    if (r2 <= R2in || r2 >= R2out) return 0.0;
    const double r = std::sqrt(r2);
    const double dp = cutoff_profile_deriv(r / R) / (R * r);
    double acc = 0.0;
    if (exact_eval) {
      for (int a = 0; a < n; ++a) acc += phi_modes[a](z) * z[a];
    } else {
      for (int a = 0; a < n; ++a) acc += interpolate_periodic(phi_fine[a], z) * z[a];
    }
    return acc * dp;
  };

  std::vector<double> tn, tw;
  gauss_legendre_01(quad.t_nodes, tn, tw);

  // y nodes: one per (upsampled) grid cell with |y| < 4R; both bump
  // arguments inside B(0,2R) force |y| <= 4R.
  Grid ygrid(g.dim(), g.points_per_axis() * S, L);
  struct YNode {
    std::array<double, 3> y;
  };
  std::vector<YNode> ys;
  for_each_cell(ygrid, [&](std::size_t, const std::array<double, 3>& y) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += y[a] * y[a];
    if (r2 < 16.0 * R * R) ys.push_back({y});
  });
  const double ycell = ygrid.cell_volume();

  VectorField v_R(g);
  for_each_cell(g, [&](std::size_t idx, const std::array<double, 3>& x) {
    double xr2 = 0.0;
    for (int a = 0; a < n; ++a) xr2 += x[a] * x[a];
    if (xr2 >= R2out) return;  // v_R supported in |x| < 2R by convexity
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    for (const auto& yn : ys) {
      // The integrand in t lives where x - t y is in the annulus (R,2R)
      // and x + (1-t) y is in B(0,2R); integrate each window exactly.
      std::array<double, 3> dneg{0.0, 0.0, 0.0}, dpos{0.0, 0.0, 0.0};
      std::array<double, 3> shift{0.0, 0.0, 0.0};
      for (int a = 0; a < n; ++a) {
        dneg[a] = -yn.y[a];
        dpos[a] = -yn.y[a];
        shift[a] = x[a] + yn.y[a];
      }
      const Interval outer = ball_window(x, dneg, n, R2out);
      if (outer.lo >= outer.hi) continue;
      const Interval inner = ball_window(x, dneg, n, R2in);
      const Interval bump = ball_window(shift, dpos, n, R2out);
      if (bump.lo >= bump.hi) continue;

      Interval windows[2];
      int nwin = 0;
      if (inner.lo >= inner.hi) {
        windows[nwin++] = outer;
      } else {
        windows[nwin++] = {outer.lo, inner.lo};
        windows[nwin++] = {inner.hi, outer.hi};
      }
      double part[3] = {0.0, 0.0, 0.0};
      for (int w = 0; w < nwin; ++w) {
        double lo = std::max({windows[w].lo, bump.lo, 0.0});
        double hi = std::min({windows[w].hi, bump.hi, 1.0});
        if (hi - lo < 1e-14) continue;
        const double width = hi - lo;
        for (int q = 0; q < quad.t_nodes; ++q) {
          const double t = lo + width * tn[q];
          std::array<double, 3> src{0.0, 0.0, 0.0};
          double br2 = 0.0;
          for (int a = 0; a < n; ++a) {
            src[a] = x[a] - t * yn.y[a];
            const double b = x[a] + (1.0 - t) * yn.y[a];
            br2 += b * b;
          }
          const double c = width * tw[q] * omega_R(br2) * source(src);
          for (int a = 0; a < n; ++a) part[a] += c * yn.y[a];
        }
      }
      for (int a = 0; a < n; ++a) acc[a] += part[a];
    }
    for (int a = 0; a < n; ++a) v_R.comp[a].v[idx] = acc[a] * ycell;
  });

  // phi_R = rho_R phi - v_R.
  VectorField out(g);
  for_each_cell(g, [&](std::size_t idx, const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    const double rho = cutoff_profile(std::sqrt(r2) / R);
    for (int a = 0; a < n; ++a)
      out.comp[a].v[idx] = rho * phi.comp[a].v[idx] - v_R.comp[a].v[idx];
  });
  return out;
}

}  // namespace nsl
