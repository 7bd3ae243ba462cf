#include "nsl/mild.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nsl/initial_data.hpp"
#include "nsl/singular.hpp"

namespace nsl {

namespace {

// Trapezoid weights on a (possibly non-uniform) time grid.
std::vector<double> trapezoid_weights(const std::vector<double>& t, std::size_t m) {
  std::vector<double> w(m + 1, 0.0);
  for (std::size_t i = 0; i + 1 <= m; ++i) {
    const double h = t[i + 1] - t[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double spectral_l2sq(const SpectralVector& U) {
  double s = 0.0;
  for (const auto& c : U.comp) s += spectral_energy(c);
  return s;
}

double spectral_gradsq(const SpectralVector& U) {
  const Grid& g = U.grid;
  const int nyquist = -g.points_per_axis() / 2;
  const double base = 2.0 * std::numbers::pi / g.box_length();
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& k) {
      double xi2 = 0.0;
      for (int b = 0; b < g.dim(); ++b) {
        if (k[b] != nyquist) xi2 += base * k[b] * base * k[b];
      }
      s += xi2 * std::norm(U.comp[a].c[idx]);
    });
  }
  return s * g.volume();
}

// D_i = grad_k (P F)_ik in spectral space, optionally dealiased.
SpectralVector flux_divergence_projected(const TensorField& F, bool dealias) {
  const Grid& g = F.grid;
  const int n = g.dim();
  std::vector<SpectralField> Fhat;
  Fhat.reserve(n * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k < j) {
        Fhat.push_back(Fhat[k * n + j]);  // symmetric flux
      } else {
        Fhat.push_back(transform(F.at(j, k)));
        if (dealias) dealias_in_place(Fhat.back());
      }
    }
  }
  SpectralVector D(g);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      SpectralField term = Fhat[j * n + k];
      derivative_in_place(term, k);
      for (std::size_t i = 0; i < term.c.size(); ++i) D.comp[j].c[i] += term.c[i];
    }
  }
  leray_project_in_place(D);
  return D;
}

void apply_heat(SpectralVector& U, double t) {
  for (auto& c : U.comp) heat_multiplier_in_place(c, t);
}

VectorField state_from_spectral(const SpectralVector& U) { return inverse_transform(U); }

}  // namespace

TimeProfile TimeProfile::bump(double t0, double t1) {
  if (!(t0 < t1)) throw std::invalid_argument("bump requires t0 < t1");
  return TimeProfile(Kind::Bump, t0, t1);
}

TimeProfile TimeProfile::decay(double t1) {
  if (!(t1 > 0.0)) throw std::invalid_argument("decay requires t1 > 0");
  return TimeProfile(Kind::Decay, 0.0, t1);
}

double TimeProfile::value(double t) const {
  if (kind_ == Kind::Bump) {
    if (t <= t0_ || t >= t1_) return 0.0;
    const double s = (t - t0_) / (t1_ - t0_);
    const double b = 4.0 * s * (1.0 - s);
    return b * b * b * b;
  }
  if (t <= 0.0) return 1.0;
  if (t >= t1_) return 0.0;
  const double s = t / t1_;
  const double s4 = s * s * s * s;
  return 1.0 - s4 * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
}

double TimeProfile::derivative(double t) const {
  if (kind_ == Kind::Bump) {
    if (t <= t0_ || t >= t1_) return 0.0;
    const double inv = 1.0 / (t1_ - t0_);
    const double s = (t - t0_) * inv;
    const double b = 4.0 * s * (1.0 - s);
    return 4.0 * b * b * b * 4.0 * (1.0 - 2.0 * s) * inv;
  }
  if (t <= 0.0 || t >= t1_) return 0.0;
  const double s = t / t1_;
  const double s3 = s * s * s;
  return -s3 * (140.0 - 420.0 * s + 420.0 * s * s - 140.0 * s3) / t1_;
}

TensorField nonlinear_flux(const VectorField& u, bool dealias) {
  const Grid& g = u.grid;
  const int n = g.dim();
  VectorField ud(g);
  if (dealias) {
    for (int a = 0; a < n; ++a) {
      SpectralField c = transform(u.comp[a]);
      dealias_in_place(c);
      ud.comp[a] = inverse_transform(c);
    }
  } else {
    ud = u;
  }
  TensorField F(g);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      auto& t = F.at(j, k);
      for (std::size_t i = 0; i < t.v.size(); ++i)
        t.v[i] = ud.comp[j].v[i] * ud.comp[k].v[i];
      if (k != j) F.at(k, j) = t;
    }
  }
  return F;
}

ScalarField pressure_from_flux(const TensorField& F) {
  const Grid& g = F.grid;
  const int n = g.dim();
  const int nyquist = -g.points_per_axis() / 2;
  SpectralField P(g);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      SpectralField Fhat = transform(F.at(j, k));
      for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& kk) {
        double norm2 = 0.0;
        for (int a = 0; a < n; ++a) norm2 += static_cast<double>(kk[a]) * kk[a];
        if (norm2 == 0.0 || kk[j] == nyquist || kk[k] == nyquist) {
          Fhat.c[idx] = 0.0;
        } else {
          Fhat.c[idx] *= -static_cast<double>(kk[j]) * kk[k] / norm2;
        }
      });
      for (std::size_t i = 0; i < P.c.size(); ++i) P.c[i] += Fhat.c[i];
    }
  }
  return inverse_transform(P);
}

std::vector<ScalarField> pressure_series(const Trajectory& traj) {
  std::vector<ScalarField> out;
  out.reserve(traj.states.size());
  for (const auto& u : traj.states) {
    if (traj.linear) {
      out.emplace_back(traj.grid);
    } else {
      out.push_back(pressure_from_flux(nonlinear_flux(u, traj.dealias)));
    }
  }
  return out;
}

VectorField convect(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid;
  if (!(g == b.grid)) throw std::invalid_argument("grid mismatch");
  const int n = g.dim();
  VectorField out(g);
  for (int i = 0; i < n; ++i) {
    SpectralField Bi = transform(b.comp[i]);
    for (int k = 0; k < n; ++k) {
      SpectralField D = Bi;
      derivative_in_place(D, k);
      ScalarField dk = inverse_transform(D);
      for (std::size_t c = 0; c < dk.v.size(); ++c)
        out.comp[i].v[c] += a.comp[k].v[c] * dk.v[c];
    }
  }
  return out;
}

VectorField mild_rhs(const VectorField& f, const std::vector<TensorField>& flux,
                     const std::vector<double>& times, double t) {
  if (times.empty() || flux.size() != times.size())
    throw std::invalid_argument("flux history must match the time grid");
  std::size_t m = times.size();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
      m = i;
      break;
    }
  }
  if (m == times.size())
    throw std::domain_error("t is not on the stored time grid");

  SpectralVector U = transform(f);
  apply_heat(U, t);
  if (m > 0) {
    const auto w = trapezoid_weights(times, m);
    for (std::size_t i = 0; i <= m; ++i) {
      SpectralVector D = flux_divergence_projected(flux[i], true);
      apply_heat(D, t - times[i]);
      for (int a = 0; a < f.grid.dim(); ++a) {
        for (std::size_t c = 0; c < D.comp[a].c.size(); ++c)
          U.comp[a].c[c] -= w[i] * D.comp[a].c[c];
      }
    }
  }
  return state_from_spectral(U);
}

Trajectory solve_mild(const VectorField& f, const SolverConfig& config) {
  if (!(config.dt > 0.0) || !(config.T >= config.dt))
    throw std::invalid_argument("solver requires dt > 0 and T >= dt");
  if (!(config.picard_tol > 0.0))
    throw std::invalid_argument("solver requires picard_tol > 0");
  const Grid& g = f.grid;
  const int n = g.dim();

  SpectralVector U = transform(f);
  // Forced zero-mean data: the periodic heat semigroup cannot decay the
  // zero mode, so the constant part is removed up front.
  for (int a = 0; a < n; ++a) U.comp[a].c[0] = 0.0;
  if (config.dealias) {
    for (int a = 0; a < n; ++a) dealias_in_place(U.comp[a]);
  }
  leray_project_in_place(U);
  {
    const VectorField u0 = state_from_spectral(U);
    const double nd = l2_norm(divergence(u0));
    const double nu = l2_norm(u0);
    if (nd > 1e-8 * std::max(nu, 1e-300))
      throw std::invalid_argument("initial data is not divergence-free");
  }

  Trajectory traj(g);
  traj.dealias = config.dealias;
  traj.linear = config.linear;
  auto store = [&](double t, const SpectralVector& S) {
    traj.times.push_back(t);
    traj.states.push_back(state_from_spectral(S));
    traj.energy.push_back(spectral_l2sq(S));
    traj.enstrophy.push_back(spectral_gradsq(S));
  };
  store(0.0, U);

  const std::size_t nsteps = static_cast<std::size_t>(std::llround(config.T / config.dt));
  const double dt = config.dt;
  for (std::size_t step = 1; step <= nsteps; ++step) {
    if (config.linear) {
      apply_heat(U, dt);
    } else {
      const VectorField un = state_from_spectral(U);
      SpectralVector Dn = flux_divergence_projected(nonlinear_flux(un, config.dealias),
                                                    config.dealias);
      // A = e^{dt Lap} (u_n - dt/2 D_n); iterate u = A - dt/2 D(u).
      SpectralVector A = U;
      for (int a = 0; a < n; ++a) {
        for (std::size_t c = 0; c < A.comp[a].c.size(); ++c)
          A.comp[a].c[c] -= 0.5 * dt * Dn.comp[a].c[c];
      }
      apply_heat(A, dt);

      SpectralVector Unew = A;
      double rel = 0.0;
      bool converged = false;
      for (int it = 0; it < config.picard_max; ++it) {
        SpectralVector Dnew = flux_divergence_projected(
            nonlinear_flux(state_from_spectral(Unew), config.dealias), config.dealias);
        double diff2 = 0.0, norm2 = 0.0;
        for (int a = 0; a < n; ++a) {
          for (std::size_t c = 0; c < A.comp[a].c.size(); ++c) {
            const std::complex<double> next = A.comp[a].c[c] - 0.5 * dt * Dnew.comp[a].c[c];
            diff2 += std::norm(next - Unew.comp[a].c[c]);
            norm2 += std::norm(next);
            Unew.comp[a].c[c] = next;
          }
        }
        rel = std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-300);
        if (rel <= config.picard_tol) {
          converged = true;
          break;
        }
      }
      if (!converged)
        throw std::runtime_error("Picard iteration failed to converge: residual " +
                                 std::to_string(rel));
      U = Unew;
      leray_project_in_place(U);
      if (config.dealias) {
        for (int a = 0; a < n; ++a) dealias_in_place(U.comp[a]);
      }
    }
    if (step % static_cast<std::size_t>(std::max(1, config.store_every)) == 0 ||
        step == nsteps) {
      store(static_cast<double>(step) * dt, U);
    }
  }
  return traj;
}

std::vector<Residual> residual_suite(const Trajectory& traj,
                                     const std::vector<ScalarField>* pressure,
                                     const std::vector<TestFunction>& tests,
                                     Formulation which) {
  const Grid& g = traj.grid;
  const int n = g.dim();
  const double T = traj.times.back();
  if (which == Formulation::Weak && pressure == nullptr)
    throw std::invalid_argument("weak residual requires a pressure series");
  if (pressure != nullptr && pressure->size() != traj.times.size())
    throw std::invalid_argument("pressure series must match the time grid");

  struct TestData {
    VectorField lap;        // laplacian of phi
    TensorField pairing;    // tensor paired against F_jk
    ScalarField div;        // divergence of phi (weak pressure term)
  };
  std::vector<TestData> data;
  data.reserve(tests.size());
  for (const auto& test : tests) {
    if (!(test.theta.end() <= T * (1.0 + 1e-12)))
      throw std::domain_error("test time profile must be supported inside [0, T)");
    if (which == Formulation::VeryWeak && !test.solenoidal)
      throw std::invalid_argument("very weak formulation requires solenoidal tests");
    if (!(test.phi.grid == g)) throw std::invalid_argument("grid mismatch");
    TestData d{VectorField(g), TensorField(g), ScalarField(g)};
    for (int a = 0; a < n; ++a) d.lap.comp[a] = laplacian(test.phi.comp[a]);
    // Pairing tensor X_jk: weak/very-weak use grad_k phi_j; the projected
    // formulation applies the Leray projection in the i index.
    for (int k = 0; k < n; ++k) {
      VectorField dk(g);
      for (int i = 0; i < n; ++i) {
        SpectralField c = transform(test.phi.comp[i]);
        derivative_in_place(c, k);
        dk.comp[i] = inverse_transform(c);
      }
      if (which == Formulation::Projected) dk = leray_project(dk);
      for (int j = 0; j < n; ++j) d.pairing.at(j, k) = dk.comp[j];
    }
    d.div = divergence(test.phi);
    data.push_back(std::move(d));
  }

  const auto w = trapezoid_weights(traj.times, traj.times.size() - 1);
  std::vector<Residual> out(tests.size(), {0.0, 0.0});
  for (std::size_t ti = 0; ti < tests.size(); ++ti) {
    const double term = inner_product(traj.initial(), tests[ti].phi) *
                        tests[ti].theta.value(0.0);
    out[ti].defect += term;
    out[ti].scale += std::abs(term);
  }
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    const VectorField& u = traj.states[i];
    TensorField flux(g);
    if (!traj.linear) flux = nonlinear_flux(u, traj.dealias);
    for (std::size_t ti = 0; ti < tests.size(); ++ti) {
      const auto& test = tests[ti];
      const auto& d = data[ti];
      const double th = test.theta.value(t);
      const double dth = test.theta.derivative(t);
      const double evol = dth * inner_product(u, test.phi) + th * inner_product(u, d.lap);
      out[ti].defect += w[i] * evol;
      out[ti].scale += w[i] * std::abs(evol);
      if (!traj.linear) {
        const double fterm = th * inner_product(flux, d.pairing);
        out[ti].defect += w[i] * fterm;
        out[ti].scale += w[i] * std::abs(fterm);
      }
      if (which == Formulation::Weak && !traj.linear) {
        const double pterm = th * inner_product((*pressure)[i], d.div);
        out[ti].defect += w[i] * pterm;
        out[ti].scale += w[i] * std::abs(pterm);
      }
    }
  }
  return out;
}

Residual weak_residual(const Trajectory& traj, const std::vector<ScalarField>& pressure,
                       const TestFunction& test) {
  return residual_suite(traj, &pressure, {test}, Formulation::Weak).front();
}

Residual projected_residual(const Trajectory& traj, const TestFunction& test) {
  return residual_suite(traj, nullptr, {test}, Formulation::Projected).front();
}

Residual very_weak_residual(const Trajectory& traj, const TestFunction& test) {
  return residual_suite(traj, nullptr, {test}, Formulation::VeryWeak).front();
}

std::vector<TestFunction> test_battery(const Grid& g, double T, int count,
                                       std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int n = g.dim();
  const double kbase = 2.0 * std::numbers::pi / g.box_length();
  std::vector<TestFunction> tests;
  tests.reserve(count);
  for (int i = 0; i < count; ++i) {
    VectorField phi(g);
    for (int a = 0; a < n; ++a) {
      std::array<int, 3> k{0, 0, 0};
      bool nonzero = false;
      for (int b = 0; b < n; ++b) {
        k[b] = static_cast<int>(rng.next() % 5) - 2;  // modes in [-2, 2]
        nonzero = nonzero || k[b] != 0;
      }
      if (!nonzero) k[0] = 1;
      const bool use_sin = rng.next() & 1;
      for_each_cell(g, [&](std::size_t idx, const std::array<double, 3>& x) {
        double arg = 0.0;
        for (int b = 0; b < n; ++b) arg += kbase * k[b] * x[b];
        phi.comp[a].v[idx] = use_sin ? std::sin(arg) : std::cos(arg);
      });
    }
    const bool solenoidal = (i % 2) == 0;
    if (solenoidal) phi = leray_project(phi);
    const double u0 = rng.uniform(), u1 = rng.uniform();
    TimeProfile theta = (i % 3 == 0)
                            ? TimeProfile::decay((0.4 + 0.5 * u0) * T)
                            : TimeProfile::bump(0.05 * T + 0.3 * T * u0,
                                                (0.55 + 0.4 * u1) * T);
    tests.push_back(TestFunction{std::move(phi), theta, solenoidal});
  }
  return tests;
}

}  // namespace nsl
