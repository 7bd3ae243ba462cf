#include "nsl/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nsl/lorentz.hpp"
#include "nsl/rearrangement.hpp"

namespace nsl {

namespace {

void check_compatible(const Trajectory& u, const Trajectory& v) {
  if (!(u.grid == v.grid)) throw std::invalid_argument("trajectory grid mismatch");
  if (u.times.size() != v.times.size())
    throw std::invalid_argument("trajectory time grids differ");
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    if (std::abs(u.times[i] - v.times[i]) > 1e-12 * std::max(1.0, u.times[i]))
      throw std::invalid_argument("trajectory time grids differ");
  }
}

std::vector<double> running_trapezoid(const std::vector<double>& t,
                                      const std::vector<double>& g) {
  std::vector<double> acc(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    acc[i] = acc[i - 1] + 0.5 * (t[i] - t[i - 1]) * (g[i] + g[i - 1]);
  }
  return acc;
}

}  // namespace

double EnergyReport::max_abs_defect() const {
  double m = 0.0;
  for (double d : defect) m = std::max(m, std::abs(d));
  return m;
}

EnergyReport energy_report(const Trajectory& traj) {
  EnergyReport rep;
  rep.times = traj.times;
  rep.kinetic = traj.energy;
  auto diss = running_trapezoid(traj.times, traj.enstrophy);
  rep.dissipation.resize(diss.size());
  rep.defect.resize(diss.size());
  const double e0 = traj.energy.front();
  for (std::size_t i = 0; i < diss.size(); ++i) {
    rep.dissipation[i] = 2.0 * diss[i];
    rep.defect[i] = e0 - rep.kinetic[i] - rep.dissipation[i];
  }
  return rep;
}

namespace {

// <grad u, grad v> summed over components, via spectral pairing consistent
// with the gradient operator.
double gradient_pairing(const VectorField& u, const VectorField& v) {
  const Grid& g = u.grid;
  const int nyquist = -g.points_per_axis() / 2;
  const double base = 2.0 * std::numbers::pi / g.box_length();
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    SpectralField U = transform(u.comp[a]);
    SpectralField V = transform(v.comp[a]);
    for_each_mode(g, [&](std::size_t idx, const std::array<int, 3>& k) {
      double xi2 = 0.0;
      for (int b = 0; b < g.dim(); ++b) {
        if (k[b] != nyquist) xi2 += base * k[b] * base * k[b];
      }
      s += xi2 * (U.c[idx] * std::conj(V.c[idx])).real();
    });
  }
  return s * g.volume();
}

}  // namespace

std::vector<double> cross_energy_defect(const Trajectory& u, const Trajectory& v) {
  check_compatible(u, v);
  {
    VectorField d(u.grid);
    for (int a = 0; a < u.grid.dim(); ++a) {
      for (std::size_t c = 0; c < d.comp[a].v.size(); ++c)
        d.comp[a].v[c] = u.initial().comp[a].v[c] - v.initial().comp[a].v[c];
    }
    if (l2_norm(d) > 1e-8 * std::max(std::sqrt(u.energy.front()), 1e-300))
      throw std::invalid_argument("cross-energy identity requires equal initial data");
  }
  const std::size_t m = u.times.size();
  std::vector<double> grad(m), tri_uv(m), tri_vu(m);
  for (std::size_t i = 0; i < m; ++i) {
    grad[i] = gradient_pairing(u.states[i], v.states[i]);
    tri_uv[i] = inner_product(convect(u.states[i], u.states[i]), v.states[i]);
    tri_vu[i] = inner_product(u.states[i], convect(v.states[i], v.states[i]));
  }
  const auto grad_acc = running_trapezoid(u.times, grad);
  const auto uv_acc = running_trapezoid(u.times, tri_uv);
  const auto vu_acc = running_trapezoid(u.times, tri_vu);
  const double e0 = u.energy.front();
  std::vector<double> defect(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double mixed = inner_product(u.states[i], v.states[i]);
    defect[i] = mixed - (e0 - 2.0 * grad_acc[i] - uv_acc[i] - vu_acc[i]);
  }
  return defect;
}

std::vector<double> prodi_serrin_accumulator(const Trajectory& traj, double p) {
  const int n = traj.grid.dim();
  if (!(p > n)) throw std::domain_error("Prodi-Serrin criterion requires p > n");
  const double expo = p == kInf ? 2.0 : 2.0 * p / (p - n);
  std::vector<double> g(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double norm =
        p == kInf ? lp_norm(magnitude(traj.states[i]), kInf)
                  : lorentz_norm(magnitude(traj.states[i]), LorentzIndex(p, kInf));
    g[i] = std::pow(norm, expo);
  }
  return running_trapezoid(traj.times, g);
}

WSReport gronwall_bound(const Trajectory& u, const Trajectory& v, double p, double C) {
  check_compatible(u, v);
  if (!(C > 0.0)) throw std::domain_error("gronwall_bound requires C > 0");
  WSReport rep;
  rep.times = u.times;
  rep.constant = C;
  rep.accumulator = prodi_serrin_accumulator(u, p);
  rep.gap_sq.resize(u.times.size());
  rep.bound.resize(u.times.size());
  rep.within_bound.resize(u.times.size());
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    VectorField w(u.grid);
    for (int a = 0; a < u.grid.dim(); ++a) {
      for (std::size_t c = 0; c < w.comp[a].v.size(); ++c)
        w.comp[a].v[c] = u.states[i].comp[a].v[c] - v.states[i].comp[a].v[c];
    }
    rep.gap_sq[i] = inner_product(w, w);
  }
  const double w0 = rep.gap_sq.front();
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    rep.bound[i] = w0 * std::exp(C * rep.accumulator[i]);
    rep.within_bound[i] = rep.gap_sq[i] <= rep.bound[i] * (1.0 + 1e-10) + 1e-300;
  }
  return rep;
}

double calibrate_gronwall_constant(const Trajectory& u, const Trajectory& v, double p) {
  check_compatible(u, v);
  auto acc = prodi_serrin_accumulator(u, p);
  double w0 = 0.0, best = 0.0;
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    VectorField w(u.grid);
    for (int a = 0; a < u.grid.dim(); ++a) {
      for (std::size_t c = 0; c < w.comp[a].v.size(); ++c)
        w.comp[a].v[c] = u.states[i].comp[a].v[c] - v.states[i].comp[a].v[c];
    }
    const double gap = inner_product(w, w);
    if (i == 0) {
      w0 = gap;
      if (w0 == 0.0) return 0.0;
    } else if (gap > w0 && acc[i] > 0.0) {
      best = std::max(best, std::log(gap / w0) / acc[i]);
    }
  }
  return best;
}

EnergyInequalityReport energy_inequality_check(const Trajectory& traj) {
  EnergyInequalityReport rep;
  auto er = energy_report(traj);
  const double tol = 1e-8 * traj.energy.front();
  rep.defect = er.defect;
  rep.holds.resize(er.defect.size());
  for (std::size_t i = 0; i < er.defect.size(); ++i) {
    rep.holds[i] = er.defect[i] >= -tol;
  }
  return rep;
}

}  // namespace nsl
