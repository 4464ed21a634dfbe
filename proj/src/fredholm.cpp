#include "sio/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sio {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string point_str(cplx t) {
  std::ostringstream os;
  os << "(" << t.real() << ", " << t.imag() << ")";
  return os.str();
}

// Plain least-squares line fit; returns {slope, intercept}.
std::pair<double, double> fit_line(const std::vector<double>& xs,
                                   const std::vector<double>& ys, size_t lo,
                                   size_t hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hi - lo);
  for (size_t i = lo; i < hi; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  if (det <= 0) return {0.0, n > 0 ? sy / n : 0.0};
  const double slope = (n * sxy - sx * sy) / det;
  return {slope, (sy - slope * sx) / n};
}

double interp_on_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                      double x) {
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const size_t j = std::clamp<size_t>(it - xs.begin(), 1, xs.size() - 1);
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + (ys[j] - ys[j - 1]) * w;
}

}  // namespace

// ---------------------------------------------------------------------------
// Space validation and boundedness decisions

void validate_space(const SpaceSpec& space) {
  if (!(space.exponent.min_value() > 1))
    throw std::invalid_argument("space: exponent must stay above 1");
  const DiniCertificate cert = dini_lipschitz_certify(space.exponent, space.curve);
  if (!cert.certified)
    throw std::invalid_argument(
        "space: exponent fails the log-Hoelder regularity certificate");
  for (const auto& f : space.weight.factors)
    space.curve.snap_to_sample(f.t0);  // throws when off the curve
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    case Verdict::Borderline: return "Borderline";
  }
  return "?";
}

namespace {

// Index-condition margins at every weight singularity: 0 < 1/p + alpha and
// 1/p + beta < 1, each with tolerance `tol`.
BoundednessReport margins_core(const CurveModel& curve, const ExponentField& p,
                               const Weight& w, double tol) {
  BoundednessReport rep;
  rep.tolerance = tol;

  std::map<int, std::vector<WeightFactor>> bundles;
  for (const auto& f : w.factors)
    bundles[curve.snap_to_sample(f.t0)].push_back(f);

  double worst = kInf;
  std::string worst_where;
  for (auto& [ti, fs] : bundles) {
    PointCheck pc;
    pc.t = curve.sample(ti);
    pc.t_index = ti;
    pc.inv_p = 1.0 / p(ti * curve.spacing());
    const IndexPair ip =
        index_pair(section_ratio_limit(curve, pc.t, Weight(fs)));
    pc.alpha = ip.alpha;
    pc.beta = ip.beta;
    pc.lower = pc.inv_p + pc.alpha;
    pc.upper = pc.inv_p + pc.beta;
    const double margin = std::min(pc.lower, 1.0 - pc.upper);
    if (margin < worst) {
      worst = margin;
      worst_where = point_str(pc.t);
    }
    rep.points.push_back(pc);
  }

  std::ostringstream os;
  if (rep.points.empty()) {
    rep.verdict = Verdict::Yes;
    os << "no weight singularities; exponent stays inside (1, infinity)";
  } else if (worst > tol) {
    rep.verdict = Verdict::Yes;
    os << "index conditions hold; smallest margin " << worst << " at t="
       << worst_where;
  } else if (worst < -tol) {
    rep.verdict = Verdict::No;
    os << "index condition fails by " << -worst << " at t=" << worst_where;
  } else {
    rep.verdict = Verdict::Borderline;
    os << "index condition within tolerance (" << worst << ") at t="
       << worst_where;
  }
  rep.reason = os.str();
  return rep;
}

}  // namespace

BoundednessReport decide_maximal_bounded(const SpaceSpec& space, double tol) {
  validate_space(space);
  return margins_core(space.curve, space.exponent, space.weight, tol);
}

namespace {

BoundednessReport s_bounded_core(const CurveModel& curve, const ExponentField& p,
                                 const Weight& w, double tol) {
  const auto& cc = curve.carleson_constant();
  if (!std::isfinite(cc.value)) {
    BoundednessReport rep;
    rep.tolerance = tol;
    rep.verdict = Verdict::No;
    rep.reason = "not a Carleson curve";
    return rep;
  }
  BoundednessReport rep = margins_core(curve, p, w, tol);
  // On a closed (Jordan) curve the index conditions characterize boundedness
  // exactly; on an open curve the necessity direction is non-strict, so the
  // boundary case stays Borderline either way, but a strict failure is still
  // decisive.  Record which regime produced the verdict.
  if (rep.verdict == Verdict::Borderline && !curve.closed())
    rep.reason += " (open curve: boundary case undecidable)";
  return rep;
}

}  // namespace

BoundednessReport decide_S_bounded(const SpaceSpec& space, double tol) {
  validate_space(space);
  return s_bounded_core(space.curve, space.exponent, space.weight, tol);
}

// ---------------------------------------------------------------------------
// Indicator profile

double IndicatorProfile::alpha_at(double x) const {
  if (x < x_grid.front())
    return alpha_icept_minus + alpha_slope_minus * x;
  if (x > x_grid.back())
    return alpha_icept_plus + alpha_slope_plus * x;
  return interp_on_grid(x_grid, alpha_star, x);
}

double IndicatorProfile::beta_at(double x) const {
  if (x < x_grid.front())
    return beta_icept_minus + beta_slope_minus * x;
  if (x > x_grid.back())
    return beta_icept_plus + beta_slope_plus * x;
  return interp_on_grid(x_grid, beta_star, x);
}

IndicatorProfile indicator_profile(const SpaceSpec& space, cplx t,
                                   std::vector<double> x_grid) {
  const CurveModel& curve = space.curve;
  const int n = curve.resolution();
  const int ti = curve.snap_to_sample(t);
  const cplx ts = curve.sample(ti);

  if (x_grid.empty())
    for (int i = -16; i <= 16; ++i) x_grid.push_back(0.25 * i);
  std::sort(x_grid.begin(), x_grid.end());
  if (x_grid.size() < 5)
    throw std::invalid_argument("indicator profile: need at least 5 grid points");

  IndicatorProfile pr;
  pr.t = ts;
  pr.t_index = ti;
  pr.inv_p = 1.0 / space.exponent(ti * curve.spacing());
  pr.x_grid = x_grid;

  // Base sample arrays: the oscillation factor centered at the profile point
  // and the bundle of weight factors singular there.
  std::vector<double> leta(n + 1), lpsi(n + 1, 0.0);
  {
    const LocalWeight lw(curve, Weight({eta(curve, ts)}));
    for (int i = 0; i <= n; ++i) leta[i] = lw.log_at_sample(i);
  }
  std::vector<WeightFactor> fs;
  for (const auto& f : space.weight.factors)
    if (curve.snap_to_sample(f.t0) == ti) fs.push_back(f);
  if (!fs.empty()) {
    const LocalWeight lw(curve, Weight(fs));
    for (int i = 0; i <= n; ++i) lpsi[i] = lw.log_at_sample(i);
  }

  std::vector<double> f(n + 1);
  for (double x : x_grid) {
    for (int i = 0; i <= n; ++i) f[i] = x * leta[i] + lpsi[i];
    const IndexPair ip =
        index_pair(section_ratio_from_samples(curve, ti, f, /*limit_form=*/true));
    pr.alpha_star.push_back(ip.alpha);
    pr.beta_star.push_back(ip.beta);
    pr.alpha_ci.push_back(ip.alpha_ci);
    pr.beta_ci.push_back(ip.beta_ci);
  }

  // Shape laws: ordering, concavity of the lower envelope, convexity of the
  // upper one (slope monotonicity with a confidence-scaled slack).
  const size_t m = x_grid.size();
  for (size_t i = 0; i < m; ++i)
    if (pr.alpha_star[i] > pr.beta_star[i] + pr.alpha_ci[i] + pr.beta_ci[i] + 1e-9)
      throw numeric_error("indicator profile: resolution or regularity failure "
                          "(index ordering)");
  for (size_t i = 1; i + 1 < m; ++i) {
    const double hl = x_grid[i] - x_grid[i - 1], hr = x_grid[i + 1] - x_grid[i];
    const double slack =
        (5e-3 + 10 * (pr.alpha_ci[i - 1] + 2 * pr.alpha_ci[i] + pr.alpha_ci[i + 1] +
                      pr.beta_ci[i - 1] + 2 * pr.beta_ci[i] + pr.beta_ci[i + 1])) /
        std::min(hl, hr);
    const double da = (pr.alpha_star[i + 1] - pr.alpha_star[i]) / hr -
                      (pr.alpha_star[i] - pr.alpha_star[i - 1]) / hl;
    const double db = (pr.beta_star[i + 1] - pr.beta_star[i]) / hr -
                      (pr.beta_star[i] - pr.beta_star[i - 1]) / hl;
    if (da > slack || db < -slack)
      throw numeric_error("indicator profile: resolution or regularity failure "
                          "(curvature sign)");
  }

  // Asymptote lines from the outer quarter of the grid on each side.
  const size_t q = std::max<size_t>(3, m / 4);
  std::tie(pr.alpha_slope_minus, pr.alpha_icept_minus) =
      fit_line(x_grid, pr.alpha_star, 0, q);
  std::tie(pr.beta_slope_minus, pr.beta_icept_minus) =
      fit_line(x_grid, pr.beta_star, 0, q);
  std::tie(pr.alpha_slope_plus, pr.alpha_icept_plus) =
      fit_line(x_grid, pr.alpha_star, m - q, m);
  std::tie(pr.beta_slope_plus, pr.beta_icept_plus) =
      fit_line(x_grid, pr.beta_star, m - q, m);

  // The asymptote slopes must reproduce the curve's spirality interval.
  const auto [d_lo, d_hi] = spirality(curve, ts);
  const double stol = 0.05;
  if (std::abs(pr.alpha_slope_plus - d_lo) > stol ||
      std::abs(pr.beta_slope_plus - d_hi) > stol ||
      std::abs(pr.alpha_slope_minus - d_hi) > stol ||
      std::abs(pr.beta_slope_minus - d_lo) > stol)
    throw numeric_error("indicator profile: resolution or regularity failure "
                        "(asymptote slope vs spirality)");
  return pr;
}

// ---------------------------------------------------------------------------
// Moebius transform and leaves

cplx mobius(cplx z1, cplx z2, cplx zeta) {
  if (std::abs(zeta - cplx{1, 0}) < 1e-300)
    throw std::invalid_argument("mobius: pole at zeta = 1");
  return (z2 * zeta - z1) / (zeta - cplx{1, 0});
}

namespace {

cplx boundary_image(cplx z1, cplx z2, double x, double y) {
  const double r = std::exp(2 * kPi * x);
  const cplx zeta = r * cplx{std::cos(2 * kPi * y), std::sin(2 * kPi * y)};
  return mobius(z1, z2, zeta);
}

}  // namespace

Leaf leaf(cplx z1, cplx z2, double p_t, const IndicatorProfile& profile) {
  if (!(p_t > 1)) throw std::invalid_argument("leaf: need p > 1");
  Leaf L;
  L.z1_ = z1;
  L.z2_ = z2;
  L.inv_p_ = 1.0 / p_t;
  L.profile_ = profile;
  if (std::abs(z1 - z2) <= 1e-14 * (1.0 + std::abs(z1))) {
    L.degenerate_ = true;
    L.xs_ = {0.0};
    L.lower_ = {z1};
    L.upper_ = {z1};
    return L;
  }

  // Extend the x-range until both boundary ends reach the endpoints.
  double X = 4.0;
  while (X < 64.0) {
    const double gap = std::max(
        {std::abs(boundary_image(z1, z2, -X, L.inv_p_ + profile.alpha_at(-X)) - z1),
         std::abs(boundary_image(z1, z2, -X, L.inv_p_ + profile.beta_at(-X)) - z1),
         std::abs(boundary_image(z1, z2, X, L.inv_p_ + profile.alpha_at(X)) - z2),
         std::abs(boundary_image(z1, z2, X, L.inv_p_ + profile.beta_at(X)) - z2)});
    if (gap <= 1e-6) break;
    X *= 1.5;
  }

  const double step = 0.0625;
  const int half = static_cast<int>(std::ceil(X / step));
  for (int j = -half; j <= half; ++j) {
    const double x = j * step;
    L.xs_.push_back(x);
    L.lower_.push_back(
        boundary_image(z1, z2, x, L.inv_p_ + profile.alpha_at(x)));
    L.upper_.push_back(
        boundary_image(z1, z2, x, L.inv_p_ + profile.beta_at(x)));
  }
  return L;
}

bool Leaf::contains(cplx z, double tol) const {
  if (std::abs(z - z1_) <= 1e-9 * (1.0 + std::abs(z1_))) return true;
  if (std::abs(z - z2_) <= 1e-9 * (1.0 + std::abs(z2_))) return true;
  if (degenerate_) return false;
  const cplx zeta = (z - z1_) / (z - z2_);
  const double az = std::abs(zeta);
  if (!(az > 0) || !std::isfinite(az)) return false;
  const double x = std::log(az) / (2 * kPi);
  const double y0 = std::arg(zeta) / (2 * kPi);
  const double lo = inv_p_ + profile_.alpha_at(x) - tol;
  const double hi = inv_p_ + profile_.beta_at(x) + tol;
  return std::ceil(lo - y0) <= std::floor(hi - y0);
}

double Leaf::origin_distance(double tol) const {
  if (contains(cplx{0, 0}, tol)) return 0.0;
  double d = std::min(std::abs(z1_), std::abs(z2_));
  for (const cplx& v : lower_) d = std::min(d, std::abs(v));
  for (const cplx& v : upper_) d = std::min(d, std::abs(v));
  return d;
}

// ---------------------------------------------------------------------------
// Piecewise continuous symbols

PCSymbol PCSymbol::constant(const CurveModel& curve, cplx value) {
  PCSymbol s;
  s.values_.assign(curve.resolution() + 1, value);
  return s;
}

PCSymbol PCSymbol::continuous(const CurveModel& curve,
                              const std::function<cplx(double)>& f) {
  PCSymbol s;
  const int n = curve.resolution();
  const double h = curve.spacing();
  s.values_.resize(n + 1);
  for (int i = 0; i <= n; ++i) s.values_[i] = f(i * h);
  if (curve.closed()) {
    const cplx seam_before = s.values_[n];
    s.values_[n] = s.values_[0];
    if (std::abs(seam_before - s.values_[0]) >
        1e-9 * (1.0 + std::abs(s.values_[0])))
      s.jumps_.push_back({0, curve.sample(0), seam_before, s.values_[0]});
  }
  return s;
}

PCSymbol PCSymbol::single_jump(const CurveModel& curve, cplx t, cplx before,
                               cplx after) {
  if (!(std::abs(before) > 0) || !(std::abs(after) > 0))
    throw std::invalid_argument("single_jump: one-sided limits must be nonzero");
  PCSymbol s;
  const int n = curve.resolution();
  const int ti = curve.snap_to_sample(t);
  s.values_.resize(n + 1);
  if (curve.closed()) {
    // Geometric interpolation from `after` back around to `before`; its
    // range is a logarithmic spiral arc, never passing through the origin.
    const cplx rate = std::log(before / after);
    for (int i = 0; i < n; ++i) {
      const double u = static_cast<double>((i - ti + n) % n) / n;
      s.values_[i] = after * std::exp(u * rate);
    }
    s.values_[n] = s.values_[0];
  } else {
    for (int i = 0; i <= n; ++i) s.values_[i] = i < ti ? before : after;
  }
  if (std::abs(before - after) > 0)
    s.jumps_.push_back({ti, curve.sample(ti), before, after});
  return s;
}

cplx PCSymbol::before_at(int sample) const {
  for (const auto& j : jumps_)
    if (j.sample == sample) return j.before;
  return values_[sample];
}

cplx PCSymbol::after_at(int sample) const {
  for (const auto& j : jumps_)
    if (j.sample == sample) return j.after;
  return values_[sample];
}

double PCSymbol::inf_abs() const {
  double m = kInf;
  for (const cplx& v : values_) m = std::min(m, std::abs(v));
  for (const auto& j : jumps_)
    m = std::min({m, std::abs(j.before), std::abs(j.after)});
  return m;
}

PCSymbol PCSymbol::combined(const PCSymbol& a, const PCSymbol& b, bool divide) {
  if (a.values_.size() != b.values_.size())
    throw std::invalid_argument("symbols sampled on different grids");
  if (divide)
    for (const cplx& v : b.values_)
      if (!(std::abs(v) > 0))
        throw std::invalid_argument("symbol division: divisor vanishes");
  auto op = [&](cplx x, cplx y) { return divide ? x / y : x * y; };

  std::vector<const Jump*> where;
  for (const auto& j : a.jumps_) where.push_back(&j);
  for (const auto& j : b.jumps_) where.push_back(&j);
  std::sort(where.begin(), where.end(),
            [](const Jump* x, const Jump* y) { return x->sample < y->sample; });
  where.erase(std::unique(where.begin(), where.end(),
                          [](const Jump* x, const Jump* y) {
                            return x->sample == y->sample;
                          }),
              where.end());

  PCSymbol out;
  out.values_.resize(a.values_.size());
  for (size_t i = 0; i < out.values_.size(); ++i)
    out.values_[i] = op(a.values_[i], b.values_[i]);
  for (const Jump* j : where) {
    const cplx nb = op(a.before_at(j->sample), b.before_at(j->sample));
    const cplx na = op(a.after_at(j->sample), b.after_at(j->sample));
    if (std::abs(nb - na) > 0) out.jumps_.push_back({j->sample, j->t, nb, na});
  }
  return out;
}

PCSymbol PCSymbol::operator*(const PCSymbol& rhs) const {
  return combined(*this, rhs, false);
}

PCSymbol PCSymbol::operator/(const PCSymbol& rhs) const {
  return combined(*this, rhs, true);
}

// ---------------------------------------------------------------------------
// Local jump data

cplx gamma_local(cplx before, cplx after) {
  if (!(std::abs(before) > 0) || !(std::abs(after) > 0) ||
      !std::isfinite(std::abs(before)) || !std::isfinite(std::abs(after)))
    throw std::invalid_argument("gamma_local: one-sided limits must be nonzero");
  const cplx r = before / after;
  return {std::arg(r) / (2 * kPi), -std::log(std::abs(r)) / (2 * kPi)};
}

cplx gamma_local(const PCSymbol& a, cplx t) {
  const PCSymbol::Jump* best = nullptr;
  double bd = kInf;
  for (const auto& j : a.jumps()) {
    const double d = std::abs(j.t - t);
    if (d < bd) {
      bd = d;
      best = &j;
    }
  }
  if (!best || bd > 1e-3 * (1.0 + std::abs(t))) return {0.0, 0.0};
  return gamma_local(best->before, best->after);
}

std::vector<double> theta_grid(int points) {
  if (points < 2) throw std::invalid_argument("theta grid: need >= 2 points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = static_cast<double>(i) / (points - 1);
  return g;
}

std::optional<int> select_kt(const IndicatorProfile& profile, cplx gamma,
                             const std::vector<double>& thetas) {
  const double x = -gamma.imag();
  const double a = profile.alpha_at(x);
  const double b = profile.beta_at(x);
  const double base = profile.inv_p - gamma.real();
  const int k0 =
      static_cast<int>(std::lround(gamma.real() - profile.inv_p - 0.5 * (a + b)));
  for (int k = k0 - 3; k <= k0 + 3; ++k) {
    bool ok = true;
    for (double th : thetas) {
      const double e = base + k + th * a + (1.0 - th) * b;
      if (!(e > 0.0 && e < 1.0)) {
        ok = false;
        break;
      }
    }
    if (ok) return k;
  }
  return std::nullopt;
}

WeightFactor phi_weight(cplx t, cplx gamma) {
  return WeightFactor::phi_gamma(t, gamma);
}

BoundednessReport local_S_bounded(const SpaceSpec& space, cplx t, cplx gamma,
                                  int k, double tol) {
  validate_space(space);
  const int ti = space.curve.snap_to_sample(t);
  const Weight twisted =
      space.weight *
      Weight({phi_weight(space.curve.sample(ti), cplx(k, 0) - gamma)});
  return s_bounded_core(space.curve, space.exponent, twisted, tol);
}

// ---------------------------------------------------------------------------
// Nonsingularity and the Fredholm verdict

NonsingularityReport nonsingular(const PCSymbol& c, const SpaceSpec& space,
                                 double tol) {
  NonsingularityReport rep;
  const CurveModel& curve = space.curve;

  // Essential range distance to the origin.
  double rd = kInf;
  cplx rd_where{};
  for (size_t i = 0; i < c.samples().size(); ++i) {
    const double av = std::abs(c.samples()[i]);
    if (av < rd) {
      rd = av;
      rd_where = curve.sample(static_cast<int>(i));
    }
  }
  for (const auto& j : c.jumps()) {
    const double av = std::min(std::abs(j.before), std::abs(j.after));
    if (av < rd) {
      rd = av;
      rd_where = j.t;
    }
  }
  rep.range_distance = rd;

  bool ok = true;
  if (rd <= tol) {
    ok = false;
    rep.witness = rd_where;
    rep.reason = "essential range reaches the origin near t=" + point_str(rd_where);
  }

  for (const auto& j : c.jumps()) {
    const cplx t = j.t;
    const IndicatorProfile pr = indicator_profile(space, t);
    const Leaf L = leaf(j.before, j.after, 1.0 / pr.inv_p, pr);

    JumpDiagnostic d;
    d.t = t;
    d.sample = j.sample;
    d.before = j.before;
    d.after = j.after;
    d.gamma = gamma_local(j.before, j.after);
    const double x = -d.gamma.imag();
    const double a = pr.alpha_at(x), b = pr.beta_at(x);
    double gap = kInf;
    for (double th : theta_grid()) {
      const double e = pr.inv_p - d.gamma.real() + th * a + (1.0 - th) * b;
      d.criterion.push_back(e);
      gap = std::min(gap, std::abs(e - std::round(e)));
    }
    d.criterion_gap = gap;
    d.k = select_kt(pr, d.gamma);
    d.leaf_contains_origin = L.contains(cplx{0, 0});
    d.leaf_distance = L.origin_distance();

    if (d.leaf_contains_origin || d.leaf_distance <= tol) {
      ok = false;
      if (!rep.witness) {
        rep.witness = t;
        rep.reason = d.leaf_contains_origin
                         ? "leaf contains the origin at jump t=" + point_str(t)
                         : "leaf within tolerance of the origin at jump t=" +
                               point_str(t);
      }
    }
    rep.jumps.push_back(std::move(d));
  }

  rep.nonsingular = ok;
  if (ok) rep.reason = "symbol nonsingular";
  return rep;
}

FredholmReport decide_fredholm(const PCSymbol& a, const PCSymbol& b,
                               const SpaceSpec& space, double tol) {
  const BoundednessReport sb = decide_S_bounded(space, tol);
  if (sb.verdict != Verdict::Yes)
    throw std::invalid_argument(
        std::string("operator not defined: S unbounded on this space (") +
        sb.reason + ")");

  FredholmReport rep;

  // A vanishing coefficient of Q makes the operator non-Fredholm.
  double ib = kInf;
  cplx ib_where{};
  for (size_t i = 0; i < b.samples().size(); ++i) {
    const double av = std::abs(b.samples()[i]);
    if (av < ib) {
      ib = av;
      ib_where = space.curve.sample(static_cast<int>(i));
    }
  }
  for (const auto& j : b.jumps()) {
    const double av = std::min(std::abs(j.before), std::abs(j.after));
    if (av < ib) {
      ib = av;
      ib_where = j.t;
    }
  }
  rep.inf_abs_b = ib;
  if (ib <= tol) {
    rep.verdict = Verdict::No;
    rep.reason = "coefficient b vanishes near t=" + point_str(ib_where);
    rep.witness = ib_where;
    return rep;
  }

  rep.quotient = nonsingular(a / b, space, tol);
  if (!rep.quotient.nonsingular) {
    rep.verdict = Verdict::No;
    rep.reason = rep.quotient.reason;
    rep.witness = rep.quotient.witness;
    return rep;
  }

  bool borderline = rep.quotient.range_distance <= 2 * tol || ib <= 2 * tol;
  std::string bl_where;
  for (const auto& d : rep.quotient.jumps) {
    if (d.criterion_gap <= tol || d.leaf_distance <= 2 * tol) {
      borderline = true;
      bl_where = point_str(d.t);
    }
  }
  if (borderline) {
    rep.verdict = Verdict::Borderline;
    rep.reason = "nonsingularity margin within tolerance" +
                 (bl_where.empty() ? std::string() : " at jump t=" + bl_where);
  } else {
    rep.verdict = Verdict::Yes;
    rep.reason = "coefficients invertible and quotient symbol nonsingular";
  }
  return rep;
}

}  // namespace sio
