#include "sio/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sio {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(double x) { return std::isfinite(x); }

}  // namespace

// ---------------------------------------------------------------------------
// ExponentField

ExponentField ExponentField::constant(double p) {
  if (!(p > 1)) throw std::invalid_argument("exponent must stay above 1");
  ExponentField e;
  e.lo_ = e.hi_ = e.const_p_ = p;
  return e;
}

ExponentField ExponentField::from_samples(std::vector<double> s_nodes,
                                          std::vector<double> values) {
  if (s_nodes.size() != values.size() || s_nodes.size() < 2)
    throw std::invalid_argument("exponent nodes: need matching lists of length >= 2");
  for (size_t i = 1; i < s_nodes.size(); ++i)
    if (!(s_nodes[i] > s_nodes[i - 1]))
      throw std::invalid_argument("exponent nodes must be strictly increasing");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*lo > 1)) throw std::invalid_argument("exponent must stay above 1");
  ExponentField e;
  e.lo_ = *lo;
  e.hi_ = *hi;
  e.s_ = std::move(s_nodes);
  e.v_ = std::move(values);
  return e;
}

double ExponentField::operator()(double s) const {
  if (s_.empty()) return const_p_;
  if (s <= s_.front()) return v_.front();
  if (s >= s_.back()) return v_.back();
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const size_t j = it - s_.begin() - 1;
  const double f = (s - s_[j]) / (s_[j + 1] - s_[j]);
  return v_[j] + f * (v_[j + 1] - v_[j]);
}

// ---------------------------------------------------------------------------
// WeightFactor / Weight

WeightFactor WeightFactor::power(cplx t0, double lambda) {
  WeightFactor f;
  f.kind = Kind::Power;
  f.t0 = t0;
  f.exponent = lambda;
  return f;
}

WeightFactor WeightFactor::eta_power(cplx t0, double x) {
  WeightFactor f;
  f.kind = Kind::EtaPower;
  f.t0 = t0;
  f.exponent = x;
  return f;
}

WeightFactor WeightFactor::phi_gamma(cplx t0, cplx gamma) {
  WeightFactor f;
  f.kind = Kind::PhiGamma;
  f.t0 = t0;
  f.gamma = gamma;
  return f;
}

WeightFactor WeightFactor::radial_oscillating(cplx t0, const std::vector<double>& radii,
                                              const std::vector<double>& values) {
  if (radii.size() != values.size() || radii.size() < 2)
    throw std::invalid_argument("radial table: need matching lists of length >= 2");
  WeightFactor f;
  f.kind = Kind::RadialOscillating;
  f.t0 = t0;
  f.table_log_r.reserve(radii.size());
  f.table_log_v.reserve(values.size());
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0) || !(values[i] > 0))
      throw std::invalid_argument("radial table: radii and values must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::invalid_argument("radial table: radii must be increasing");
    f.table_log_r.push_back(std::log(radii[i]));
    f.table_log_v.push_back(std::log(values[i]));
  }
  return f;
}

Weight::Weight(std::vector<WeightFactor> f) : factors(std::move(f)) {}

Weight Weight::operator*(const Weight& other) const {
  Weight w(*this);
  w.factors.insert(w.factors.end(), other.factors.begin(), other.factors.end());
  return w;
}

WeightFactor eta(const CurveModel& curve, cplx t) {
  const int i = curve.snap_to_sample(t);
  return WeightFactor::eta_power(curve.sample(i), 1.0);
}

// ---------------------------------------------------------------------------
// LocalWeight

namespace {

// log of a radial table factor at log-radius lr, edge slopes extended.
double radial_table_log(const WeightFactor& f, double lr) {
  const auto& xs = f.table_log_r;
  const auto& ys = f.table_log_v;
  const size_t m = xs.size();
  size_t j;
  if (lr <= xs.front()) j = 0;
  else if (lr >= xs.back()) j = m - 2;
  else j = std::upper_bound(xs.begin(), xs.end(), lr) - xs.begin() - 1;
  const double slope = (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]);
  return ys[j] + slope * (lr - xs[j]);
}

double factor_log(const WeightFactor& f, cplx tau, double arg_value) {
  const double r = std::abs(tau - f.t0);
  switch (f.kind) {
    case WeightFactor::Kind::Power:
      return f.exponent * std::log(r);
    case WeightFactor::Kind::RadialOscillating:
      return radial_table_log(f, std::log(r));
    case WeightFactor::Kind::EtaPower:
      return -f.exponent * arg_value;
    case WeightFactor::Kind::PhiGamma:
      return f.gamma.real() * std::log(r) - f.gamma.imag() * arg_value;
  }
  return 0;
}

bool needs_branch(const WeightFactor& f) {
  return f.kind == WeightFactor::Kind::EtaPower ||
         (f.kind == WeightFactor::Kind::PhiGamma && f.gamma.imag() != 0);
}

}  // namespace

LocalWeight::LocalWeight(const CurveModel& curve, Weight w)
    : curve_(&curve), w_(std::move(w)) {
  const int n = curve.resolution();
  branches_.resize(w_.factors.size());
  for (size_t k = 0; k < w_.factors.size(); ++k)
    if (needs_branch(w_.factors[k]))
      branches_[k] = curve.arg_branch_cached(curve.snap_to_sample(w_.factors[k].t0));

  log_samples_.assign(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) {
    double acc = 0;
    for (size_t k = 0; k < w_.factors.size(); ++k) {
      const auto& f = w_.factors[k];
      double argv = 0;
      if (branches_[k]) {
        argv = branches_[k]->at_sample(i);
        if (std::isnan(argv)) { acc = kNaN; break; }
      }
      const double v = factor_log(f, curve.sample(i), argv);
      if (!finite(v)) { acc = kNaN; break; }
      acc += v;
    }
    log_samples_[i] = acc;
    if (std::isnan(acc)) sing_.push_back(i);
  }
}

double LocalWeight::log_at(double s) const {
  double acc = 0;
  const cplx tau = curve_->point_at(s);
  for (size_t k = 0; k < w_.factors.size(); ++k) {
    const double argv = branches_[k] ? (*branches_[k])(s) : 0.0;
    acc += factor_log(w_.factors[k], tau, argv);
  }
  return acc;
}

bool LocalWeight::is_singular_sample(int i) const {
  return std::isnan(log_samples_[i]);
}

// ---------------------------------------------------------------------------
// Dini-Lipschitz certificate

DiniCertificate dini_lipschitz_certify(const ExponentField& p, const CurveModel& curve) {
  const int n = curve.resolution();
  const double h = curve.spacing();
  std::vector<double> pv(n + 1);
  for (int i = 0; i <= n; ++i) pv[i] = p(i * h);

  // Centers: a coarse stride, the exponent extremes, and the sharpest
  // adjacent-sample changes (candidate discontinuities).
  std::vector<int> centers;
  const int stride = std::max(1, n / 256);
  for (int i = 0; i < n; i += stride) centers.push_back(i);
  centers.push_back(int(std::min_element(pv.begin(), pv.begin() + n) - pv.begin()));
  centers.push_back(int(std::max_element(pv.begin(), pv.begin() + n) - pv.begin()));
  std::vector<int> by_jump(n);
  std::iota(by_jump.begin(), by_jump.end(), 0);
  std::partial_sort(by_jump.begin(), by_jump.begin() + 8, by_jump.end(),
                    [&](int a, int b) {
                      return std::abs(pv[a + 1] - pv[a]) > std::abs(pv[b + 1] - pv[b]);
                    });
  for (int k = 0; k < 8; ++k) {
    centers.push_back(by_jump[k]);
    centers.push_back((by_jump[k] + 1) % n);
  }
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

  // The certificate is the sup over pairs with chord in [floor, 1/2]; a sup
  // that keeps growing as the chord floor drops signals a non-Dini exponent.
  DiniCertificate out;
  auto sweep = [&](double floor, bool record) {
    double c = 0;
    for (int ic : centers) {
      const cplx t = curve.sample(ic);
      for (int j = 0; j < n; ++j) {
        if (j == ic) continue;
        const double r = std::abs(curve.sample(j) - t);
        if (r < floor || r > 0.5) continue;
        const double val = std::abs(pv[j] - pv[ic]) * (-std::log(r));
        if (val > c) {
          c = val;
          if (record) { out.worst_t = ic * h; out.worst_s = j * h; }
        }
      }
    }
    return c;
  };
  const double c_coarse = sweep(64 * h, false);
  const double c_fine = sweep(std::numeric_limits<double>::min(), true);
  out.c_value = c_fine;
  out.growth = c_fine - c_coarse;
  // Dini-admissible exponents approach their sup slowly (growth well under
  // 0.15 across a 64x floor drop); a genuine modulus jump dp adds ~4.2*dp.
  out.certified = out.growth <= std::max(0.15, 0.1 * c_fine);
  return out;
}

double p_star(const ExponentField& p, const CurveModel& curve) {
  const int n = curve.resolution();
  const double h = curve.spacing();
  double m = kInf;
  for (int i = 0; i < n; ++i) m = std::min(m, p(i * h));
  return m;
}

double p_star(const ExponentField& p, const CurveModel& curve, const ArcPortion& region) {
  if (region.components.empty())
    throw std::invalid_argument("p_star: empty region");
  const double h = curve.spacing();
  const double L = curve.length();
  double m = kInf;
  for (auto [lo, hi] : region.components) {
    m = std::min({m, p(std::fmod(lo, L)), p(std::fmod(hi, L))});
    for (int i = int(std::ceil(lo / h)); i * h <= hi; ++i)
      m = std::min(m, p(std::fmod(i * h, L)));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Modular and norm

namespace {

// Trapezoid with invalid (singular / non-finite) samples handled by
// one-sided rectangles.  g must have n+1 entries.
double trapezoid_excluding(const std::vector<double>& g, double h, int stride) {
  double acc = 0;
  const int n = int(g.size()) - 1;
  for (int i = 0; i + stride <= n; i += stride) {
    const double a = g[i], b = g[i + stride];
    const bool fa = finite(a), fb = finite(b);
    if (fa && fb) acc += stride * h * 0.5 * (a + b);
    else if (fa) acc += stride * h * a;
    else if (fb) acc += stride * h * b;
    if (std::isinf(a) || std::isinf(b)) return kInf;
  }
  return acc;
}

std::vector<double> modular_integrand(const CurveModel& curve, const std::vector<cplx>& f,
                                      const ExponentField& p, const LocalWeight& w,
                                      double lambda) {
  const int n = curve.resolution();
  if (int(f.size()) != n + 1)
    throw std::invalid_argument("sampled function must have resolution+1 entries");
  const double h = curve.spacing();
  const double ll = std::log(lambda);
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) {
    if (w.is_singular_sample(i)) { g[i] = kNaN; continue; }
    const double af = std::abs(f[i]);
    if (af == 0) { g[i] = 0; continue; }
    g[i] = std::exp(p(i * h) * (std::log(af) + w.log_at_sample(i) - ll));
  }
  return g;
}

}  // namespace

double modular(const CurveModel& curve, const std::vector<cplx>& f,
               const ExponentField& p, const LocalWeight& w, double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("modular: lambda must be positive");
  return trapezoid_excluding(modular_integrand(curve, f, p, w, lambda),
                             curve.spacing(), 1);
}

double nakano_norm(const CurveModel& curve, const std::vector<cplx>& f,
                   const ExponentField& p, const LocalWeight& w) {
  const double m1 = modular(curve, f, p, w, 1.0);
  if (m1 == 0) return 0.0;

  double hi;
  if (finite(m1)) {
    hi = std::pow(m1, 1.0 / p.min_value()) + 1.0;
  } else {
    hi = 2.0;
    while (!finite(modular(curve, f, p, w, hi))) {
      hi *= 2;
      if (hi > 1e30) throw numeric_error("norm: function is not in the space");
    }
    while (modular(curve, f, p, w, hi) > 1) {
      hi *= 2;
      if (hi > 1e30) throw numeric_error("norm: function is not in the space");
    }
  }
  double lo = std::numeric_limits<double>::min();
  for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (modular(curve, f, p, w, mid) <= 1) hi = mid;
    else lo = mid;
  }

  // Refinement stability: the modular at the norm must not move much when
  // the grid is coarsened; instability signals a non-integrable input.
  const double m_half =
      trapezoid_excluding(modular_integrand(curve, f, p, w, hi), curve.spacing(), 2);
  if (!finite(m_half) || std::abs(m_half - 1.0) > 0.25)
    throw numeric_error("norm: function is not in the space (grid-unstable modular)");
  return hi;
}

// ---------------------------------------------------------------------------
// Mean oscillation at a point

namespace {

struct PortionIntegrals {
  double measure = 0;
  double integral = 0;
};

// Integrate a sampled function over {r < R} with linear fractions at the
// boundary crossings; invalid samples are skipped one-sidedly.
PortionIntegrals integrate_inside(const std::vector<double>& radial,
                                  const std::vector<double>& fv, double h, double R) {
  PortionIntegrals out;
  const int nseg = int(radial.size()) - 1;
  for (int i = 0; i < nseg; ++i) {
    const double ra = radial[i], rb = radial[i + 1];
    const bool ia = ra < R, ib = rb < R;
    if (!ia && !ib) continue;
    double fr = 1.0, fa = fv[i], fb = fv[i + 1];
    if (ia != ib) {
      const double c = (R - ra) / (rb - ra);
      if (ia) { fr = c; fb = finite(fa) && finite(fb) ? fa + c * (fb - fa) : fb; }
      else { fr = 1 - c; fa = finite(fa) && finite(fb) ? fa + c * (fb - fa) : fa; }
    }
    out.measure += fr * h;
    const bool ga = finite(fa), gb = finite(fb);
    if (ga && gb) out.integral += fr * h * 0.5 * (fa + fb);
    else if (ga) out.integral += fr * h * fa;
    else if (gb) out.integral += fr * h * fb;
  }
  return out;
}

}  // namespace

BmoResult bmo_at(const CurveModel& curve, const std::vector<double>& f, cplx t) {
  const int n = curve.resolution();
  if (int(f.size()) != n + 1)
    throw std::invalid_argument("sampled function must have resolution+1 entries");
  const double h = curve.spacing();
  std::vector<double> radial(n + 1);
  double dt = 0;
  for (int i = 0; i <= n; ++i) {
    radial[i] = std::abs(curve.sample(i) - t);
    dt = std::max(dt, radial[i]);
  }
  auto grid = log_grid(4 * h, dt, 64);
  BmoResult out;
  double sup_coarse = 0;
  std::vector<double> dev(n + 1);
  // Baseline for the divergence gate: radii in the upper half of the grid
  // (log scale).  A genuinely bounded mean oscillation is comparable across
  // scales, while a diverging one keeps growing toward the radius floor.
  const double mid = std::sqrt(4 * h * dt);
  for (double R : grid) {
    const auto base = integrate_inside(radial, f, h, R);
    if (base.measure <= 0) continue;
    const double mean = base.integral / base.measure;
    for (int i = 0; i <= n; ++i)
      dev[i] = finite(f[i]) ? std::abs(f[i] - mean) : kNaN;
    const auto osc = integrate_inside(radial, dev, h, R);
    const double val = osc.integral / base.measure;
    out.value = std::max(out.value, val);
    if (R >= mid) sup_coarse = std::max(sup_coarse, val);
  }
  out.diverged = sup_coarse > 0 && out.value > 1.0 && out.value / sup_coarse > 1.5;
  return out;
}

// ---------------------------------------------------------------------------
// Muckenhoupt constant

ApResult ap_constant(const Weight& w, double p_const, const CurveModel& curve) {
  if (!(p_const > 1)) throw std::invalid_argument("ap_constant: need p > 1");
  const double q = p_const / (p_const - 1);
  const int n = curve.resolution();
  const double h = curve.spacing();
  LocalWeight lw(curve, w);

  std::vector<int> centers;
  const int cstride = std::max(1, n / 256);
  for (int i = 0; i < n; i += cstride) centers.push_back(i);
  for (int i : lw.singular_samples())
    if (i < n) centers.push_back(i);
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

  // Sweep at a given sample stride (effective grid coarsening: stride-s
  // sampling with radius floor 4*s*h); used both for the value and for the
  // refinement-divergence trend.  Singular capping is redone per stride so
  // the coarse pass sees coarse neighbor values.
  auto sweep = [&](int s, ApResult* rec) {
    double sup = 0;
    const int m = n / s;
    std::vector<double> gps(m), gqs(m);
    for (int k = 0; k < m; ++k) {
      int i = k * s;
      if (lw.is_singular_sample(i)) {
        for (int d = 1; d < m; ++d) {
          const int a = ((k - d) % m + m) % m * s, b = (k + d) % m * s;
          if (!lw.is_singular_sample(a)) { i = a; break; }
          if (!lw.is_singular_sample(b)) { i = b; break; }
        }
      }
      const double lwi = lw.log_at_sample(i);
      gps[k] = std::exp(p_const * lwi);
      gqs[k] = std::exp(-q * lwi);
    }
    std::vector<double> r(m), cp(m + 1), cq(m + 1), cr(m);
    std::vector<int> order(m);
    for (int ic : centers) {
      const cplx t = curve.sample(ic);
      double dt = 0;
      for (int k = 0; k < m; ++k) {
        r[k] = std::abs(curve.sample(k * s) - t);
        dt = std::max(dt, r[k]);
      }
      if (dt <= 4 * s * h) continue;
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return r[a] < r[b]; });
      cp[0] = cq[0] = 0;
      for (int k = 0; k < m; ++k) {
        cp[k + 1] = cp[k] + s * h * gps[order[k]];
        cq[k + 1] = cq[k] + s * h * gqs[order[k]];
        cr[k] = r[order[k]];
      }
      for (double R : log_grid(4 * s * h, dt, 64)) {
        const int k = int(std::lower_bound(cr.begin(), cr.end(), R) - cr.begin());
        if (k == 0) continue;
        const double val =
            std::pow(cp[k] / R, 1 / p_const) * std::pow(cq[k] / R, 1 / q);
        if (val > sup) {
          sup = val;
          if (rec) { rec->argmax_t = t; rec->argmax_r = R; }
        }
      }
    }
    return sup;
  };

  ApResult out;
  out.value = sweep(1, &out);

  // Verdict: exact power-weight criterion when available, otherwise the
  // sup trend under grid refinement.
  bool analytic = true;
  for (const auto& f : w.factors)
    if (f.kind != WeightFactor::Kind::Power) analytic = false;
  if (analytic) {
    for (const auto& f : w.factors) {
      const double v = 1 / p_const + f.exponent;
      if (!(v > 0 && v < 1)) out.infinite = true;
    }
  } else {
    const double s8 = sweep(8, nullptr);
    const double s64 = sweep(64, nullptr);
    out.infinite =
        s64 > 0 && out.value / s64 > 1.5 && out.value > s8 && s8 > s64;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weight equivalence

EquivalenceResult weights_equivalent(const std::function<double(double)>& log_w1,
                                     const std::function<double(double)>& log_w2,
                                     const CurveModel& curve) {
  const int n = curve.resolution();
  const double h = curve.spacing();
  std::vector<double> d(n, kNaN);
  for (int i = 0; i < n; ++i) {
    const double a = log_w1(i * h), b = log_w2(i * h);
    if (finite(a) && finite(b)) d[i] = a - b;
  }
  auto spread = [&](int stride, double* lo_out, double* hi_out) {
    double lo = kInf, hi = -kInf;
    for (int i = 0; i < n; i += stride) {
      if (!finite(d[i])) continue;
      lo = std::min(lo, d[i]);
      hi = std::max(hi, d[i]);
    }
    if (lo_out) { *lo_out = lo; *hi_out = hi; }
    return hi - lo;
  };
  double lo = 0, hi = 0;
  const double sp16 = spread(16, nullptr, nullptr);
  const double sp1 = spread(1, &lo, &hi);
  EquivalenceResult out;
  out.ratio_lo = std::exp(lo);
  out.ratio_hi = std::exp(hi);
  out.equivalent = (sp1 - sp16) <= 0.25;
  return out;
}

EquivalenceResult weights_equivalent(const Weight& w1, const Weight& w2,
                                     const CurveModel& curve) {
  LocalWeight a(curve, w1), b(curve, w2);
  const double h = curve.spacing();
  auto la = [&, h](double s) { return a.log_at_sample(int(std::lround(s / h))); };
  auto lb = [&, h](double s) { return b.log_at_sample(int(std::lround(s / h))); };
  return weights_equivalent(la, lb, curve);
}

}  // namespace sio
