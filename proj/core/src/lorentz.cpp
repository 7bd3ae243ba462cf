#include "nsl/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace nsl {

namespace {

// Gauss-Kronrod 7/15 pair on [-1,1] (QUADPACK abscissae).
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GK {
  double integral;
  double error;
};

template <typename F>
GK gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double fs = (i == 7) ? f(c)
                               : f(c - h * kKronrodNodes[i]) + f(c + h * kKronrodNodes[i]);
    k += kKronrodWeights[i] * fs;
    if (i % 2 == 1) g += kGaussWeights[i / 2] * fs;
  }
  return {k * h, std::abs(k - g) * h};
}

// Relative local control: for positive integrands the accumulated relative
// error stays below rel_tol.
template <typename F>
double adaptive_gk(const F& f, double a, double b, double rel_tol, int depth = 0) {
  GK r = gk15(f, a, b);
  if (r.error <= rel_tol * std::abs(r.integral) + 1e-300 || depth >= 30)
    return r.integral;
  const double c = 0.5 * (a + b);
  return adaptive_gk(f, a, c, rel_tol, depth + 1) +
         adaptive_gk(f, c, b, rel_tol, depth + 1);
}

// f** on the i-th step segment (T_{i-1}, T_i] has the closed form a + b/tau.
struct DoubleStarSegment {
  double lo;
  double hi;
  double a;
  double b;
};

std::vector<DoubleStarSegment> double_star_segments(const StepRearrangement& r) {
  std::vector<DoubleStarSegment> segs;
  segs.reserve(r.steps.size());
  double t = 0.0, acc = 0.0;
  for (const auto& s : r.steps) {
    segs.push_back({t, t + s.measure, s.value, acc - s.value * t});
    acc += s.value * s.measure;
    t += s.measure;
  }
  return segs;
}

constexpr double kQuadTol = 1e-13;  // per-segment relative quadrature control

}  // namespace

LorentzIndex::LorentzIndex(double p_, double q_) : p(p_), q(q_) {
  if (!(p > 1.0)) throw std::domain_error("Lorentz index requires p > 1");
  if (!(q >= 1.0)) throw std::domain_error("Lorentz index requires q >= 1");
  if (p == kInf && q != kInf)
    throw std::domain_error("Lorentz index requires q = inf when p = inf");
}

double quasinorm(const StepRearrangement& r, const LorentzIndex& idx) {
  if (r.steps.empty()) return 0.0;
  const double vmax = r.steps.front().value;
  if (idx.p_infinite()) return vmax;  // sup f*

  if (idx.q_infinite()) {
    // sup over tau of tau^{1/p} f*(tau): attained at right step edges.
    double best = 0.0, t = 0.0;
    for (const auto& s : r.steps) {
      t += s.measure;
      best = std::max(best, s.value * std::pow(t, 1.0 / idx.p));
    }
    return best;
  }

  // (q/p) Int [tau^{1/p} f*]^q dtau/tau = sum v_i^q (T_i^{q/p} - T_{i-1}^{q/p}).
  const double e = idx.q / idx.p;
  double acc = 0.0, t = 0.0, tpow = 0.0;
  for (const auto& s : r.steps) {
    t += s.measure;
    const double tnext = std::pow(t, e);
    acc += std::pow(s.value / vmax, idx.q) * (tnext - tpow);
    tpow = tnext;
  }
  return vmax * std::pow(acc, 1.0 / idx.q);
}

double quasinorm(const ScalarField& f, const LorentzIndex& idx) {
  return quasinorm(rearrangement(f), idx);
}

double lorentz_norm(const StepRearrangement& r, const LorentzIndex& idx) {
  if (r.steps.empty()) return 0.0;
  const double vmax = r.steps.front().value;
  if (idx.p_infinite()) return vmax;  // sup f** = f**(0+) = max value

  auto segs = double_star_segments(r);
  const double total = segs.back().hi;
  const double integral = r.integral_to(total);  // = |f|_{L^1}

  if (idx.q_infinite()) {
    // sup tau^{1/p} f**(tau) over segments plus the 1/tau tail.
    const double invp = 1.0 / idx.p;
    auto h = [&](double a, double b, double tau) {
      return std::pow(tau, invp) * (a + b / tau);
    };
    double best = 0.0;
    for (const auto& s : segs) {
      best = std::max(best, h(s.a, s.b, s.hi));
      if (s.lo > 0.0) best = std::max(best, h(s.a, s.b, s.lo));
      if (s.a > 0.0 && s.b > 0.0) {
        const double crit = s.b * (idx.p - 1.0) / s.a;
        if (crit > s.lo && crit < s.hi) best = std::max(best, h(s.a, s.b, crit));
      }
    }
    // Tail f** = integral/tau decreases as tau^{1/p-1}: sup at tau = total.
    best = std::max(best, std::pow(total, invp) * integral / total);
    return best;
  }

  // (q/p) Int [tau^{1/p} f**]^q dtau/tau, segment by segment. Work with
  // values normalized by vmax to keep powers tame.
  const double p = idx.p, q = idx.q;
  const double e = q / p;
  double acc = 0.0;
  // First segment has f** = vmax exactly (b = 0): closed form.
  acc += std::pow(segs.front().hi, e);
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const double a = s.a / vmax, b = s.b / vmax;
    auto g = [&](double tau) {
      return std::pow(tau, e - 1.0) * std::pow(a + b / tau, q);
    };
    acc += (q / p) * adaptive_gk(g, s.lo, s.hi, kQuadTol);
  }
  // Tail (total, inf): f** = integral/tau.
  acc += std::pow(integral / vmax, q) * std::pow(total, e - q) / (p - 1.0);
  return vmax * std::pow(acc, 1.0 / q);
}

double lorentz_norm(const ScalarField& f, const LorentzIndex& idx) {
  return lorentz_norm(rearrangement(f), idx);
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw std::domain_error("lp_norm requires p >= 1");
  if (p == kInf) {
    double m = 0.0;
    for (double v : f.v) m = std::max(m, std::abs(v));
    return m;
  }
  double m = 0.0;
  for (double v : f.v) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : f.v) acc += std::pow(std::abs(v) / m, p);
  return m * std::pow(acc * f.grid.cell_volume(), 1.0 / p);
}

HardyResult hardy_check(const StepFunction& phi, double p, double q) {
  if (!(p > 0.0)) throw std::domain_error("hardy_check requires p > 0");
  if (!(q >= 1.0)) throw std::domain_error("hardy_check requires q >= 1");
  for (std::size_t i = 0; i < phi.pieces.size(); ++i) {
    const auto& pc = phi.pieces[i];
    if (pc.value < 0.0) throw std::domain_error("hardy_check requires phi >= 0");
    if (!(0.0 < pc.lo && pc.lo < pc.hi))
      throw std::domain_error("hardy_check requires pieces in (0, S)");
    if (i > 0 && pc.lo < phi.pieces[i - 1].hi)
      throw std::domain_error("hardy_check requires disjoint increasing pieces");
  }
  HardyResult res{0.0, 0.0, 0.0, 0.0};
  if (phi.pieces.empty()) return res;

  // Breakpoint list covering the support.
  std::vector<double> brk;
  for (const auto& pc : phi.pieces) {
    brk.push_back(pc.lo);
    brk.push_back(pc.hi);
  }
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

  auto value_at = [&](double t) {
    for (const auto& pc : phi.pieces) {
      if (t >= pc.lo && t < pc.hi) return pc.value;
    }
    return 0.0;
  };
  // Inner integrals in closed form: Int phi(s)/s ds accumulates v*log.
  auto integral_from_zero = [&](double t) {
    double acc = 0.0;
    for (const auto& pc : phi.pieces) {
      if (t <= pc.lo) break;
      acc += pc.value * std::log(std::min(t, pc.hi) / pc.lo);
    }
    return acc;
  };
  const double upper_total = [&] {
    double acc = 0.0;
    for (const auto& pc : phi.pieces) acc += pc.value * std::log(pc.hi / pc.lo);
    return acc;
  }();
  auto integral_to_infinity = [&](double t) { return upper_total - integral_from_zero(t); };

  const double lo_support = brk.front();
  const double hi_support = brk.back();

  // First inequality: J1 = Int_0^inf t^{-q/p-1} Phi(t)^q dt with Phi(t) = Int_0^t phi/s.
  double j1 = 0.0;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    const double a = brk[i], b = brk[i + 1];
    const double base = integral_from_zero(a);
    const double v = value_at(a);
    auto g = [&](double t) {
      const double inner = base + v * std::log(t / a);
      return std::pow(t, -q / p - 1.0) * std::pow(inner, q);
    };
    j1 += adaptive_gk(g, a, b, kQuadTol);
  }
  j1 += std::pow(upper_total, q) * (p / q) * std::pow(hi_support, -q / p);
  res.lhs1 = std::pow(j1, 1.0 / q);

  double r1 = 0.0;
  for (const auto& pc : phi.pieces) {
    r1 += std::pow(pc.value, q) * (p / q) *
          (std::pow(pc.lo, -q / p) - std::pow(pc.hi, -q / p));
  }
  res.rhs1 = std::pow(r1, 1.0 / q);

  // Second inequality: J2 = Int_0^inf t^{q/p-1} Psi(t)^q dt with Psi(t) = Int_t^inf phi/s.
  double j2 = std::pow(upper_total, q) * (p / q) * std::pow(lo_support, q / p);
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    const double a = brk[i], b = brk[i + 1];
    const double base = integral_to_infinity(b);
    const double v = value_at(a);
    auto g = [&](double t) {
      const double inner = base + v * std::log(b / t);
      return std::pow(t, q / p - 1.0) * std::pow(inner, q);
    };
    j2 += adaptive_gk(g, a, b, kQuadTol);
  }
  res.lhs2 = std::pow(j2, 1.0 / q);

  double r2 = 0.0;
  for (const auto& pc : phi.pieces) {
    r2 += std::pow(pc.value, q) * (p / q) *
          (std::pow(pc.hi, q / p) - std::pow(pc.lo, q / p));
  }
  res.rhs2 = std::pow(r2, 1.0 / q);
  return res;
}

InterpolationResult interpolation_check(const ScalarField& f, double p0, double p1,
                                        double theta) {
  if (!(1.0 < p0 && p0 < p1)) throw std::domain_error("requires 1 < p0 < p1");
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("requires theta in (0,1)");
  const double invp = (1.0 - theta) / p0 + (p1 == kInf ? 0.0 : theta / p1);
  auto r = rearrangement(f);
  InterpolationResult out;
  out.lhs = lorentz_norm(r, LorentzIndex(1.0 / invp, kInf));
  out.rhs = std::pow(lorentz_norm(r, LorentzIndex(p0, kInf)), 1.0 - theta) *
            std::pow(lorentz_norm(r, LorentzIndex(p1, kInf)), theta);
  return out;
}

double sobolev_ratio(const ScalarField& u, double p) {
  const int n = u.grid.dim();
  if (!(p > n)) throw std::domain_error("sobolev_ratio requires p > n");
  const double l2 = l2_norm(u);
  if (l2 == 0.0) throw std::domain_error("sobolev_ratio undefined for zero field");
  const double target_p = p == kInf ? 2.0 : 2.0 * p / (p - 2.0);
  const double num = lorentz_norm(u, LorentzIndex(target_p, 2.0));
  const double grad = l2_norm(gradient(u));
  const double np = p == kInf ? 0.0 : static_cast<double>(n) / p;
  return num / (std::pow(l2, 1.0 - np) * std::pow(grad, np));
}

}  // namespace nsl
