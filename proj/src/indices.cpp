#include "sio/indices.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace sio {

namespace {

constexpr double kLn10 = 2.302585092994046;

bool finite(double v) { return std::isfinite(v); }

// ---------------------------------------------------------------------------
// Tail extrapolation: least-squares polynomial in the (normalized) radius over
// the last few ladder points; the constant term estimates the R -> 0 limit and
// the half-width combines lack of fit with the remaining extrapolation gap.

struct TailFit {
  double value = 0;
  double halfwidth = 0;
};

TailFit extrap_tail(const std::vector<double>& rs, const std::vector<double>& u) {
  const int total = static_cast<int>(rs.size());
  const int k = std::min(total, 14);
  const int n0 = total - k;
  const int deg = std::min(3, k - 2);
  double rmax = 0;
  for (int i = n0; i < total; ++i) rmax = std::max(rmax, rs[i]);

  Eigen::MatrixXd a(k, deg + 1);
  Eigen::VectorXd b(k);
  for (int i = 0; i < k; ++i) {
    const double rn = rs[n0 + i] / rmax;
    double p = 1;
    for (int j = 0; j <= deg; ++j) {
      a(i, j) = p;
      p *= rn;
    }
    b(i) = u[n0 + i];
  }
  Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  const double lack = (a * coef - b).cwiseAbs().maxCoeff();

  TailFit out;
  out.value = coef(0);
  const double rn_last = rs[total - 1] / rmax;
  out.halfwidth = 2 * lack +
                  std::abs(out.value - u[total - 1]) * std::pow(rn_last, 3) + 1e-15;
  return out;
}

// ---------------------------------------------------------------------------
// Weighted straight-line fit (weights are inverse-variance style).

struct LineFit {
  double c0 = 0, c1 = 0, wrms = 0;
  bool ok = false;
};

LineFit weighted_line(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::vector<double>& ws) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double w = ws[i];
    sw += w;
    sx += w * xs[i];
    sy += w * ys[i];
    sxx += w * xs[i] * xs[i];
    sxy += w * xs[i] * ys[i];
  }
  const double det = sw * sxx - sx * sx;
  LineFit f;
  if (!(sw > 0) || !(det > 1e-300 * sw * sw)) return f;
  f.c1 = (sw * sxy - sx * sy) / det;
  f.c0 = (sy - f.c1 * sx) / sw;
  double rss = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.c0 + f.c1 * xs[i]);
    rss += ws[i] * r * r;
  }
  f.wrms = std::sqrt(rss / sw);
  f.ok = true;
  return f;
}

// ---------------------------------------------------------------------------
// One-sided index fit.  Input: points with lx < 0 describing the approach to
// the x -> 0 end (the x -> infinity side is mapped here by negating both
// coordinates).  Local log-log slopes over one-decade windows restricted to
// the three lowest available decades are extrapolated linearly in
// u = 1/(1 + |mean lx|) to u = 0.

struct SideFit {
  double value = 0;
  double ci = 0;
};

SideFit fit_side(std::vector<double> lx, std::vector<double> v, std::vector<double> hw) {
  // Sort by lx ascending.
  const size_t n = lx.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return lx[a] < lx[b]; });
  std::vector<double> sx(n), sv(n), sh(n);
  for (size_t i = 0; i < n; ++i) {
    sx[i] = lx[order[i]];
    sv[i] = v[order[i]];
    sh[i] = hw[order[i]];
  }

  const double width = kLn10;
  const double step = 0.48 * kLn10;
  const double lo = sx.front();
  const double cutoff = lo + 3 * kLn10;

  std::vector<double> slopes, us, wws;
  for (double w0 = lo; w0 + width <= cutoff + 1e-9; w0 += step) {
    std::vector<double> wx, wv, ww;
    double mean_lx = 0;
    for (size_t i = 0; i < n; ++i) {
      if (sx[i] < w0 || sx[i] >= w0 + width) continue;
      wx.push_back(sx[i]);
      wv.push_back(sv[i]);
      const double wgt = 1.0 / ((sh[i] + 1e-9) * (sh[i] + 1e-9));
      ww.push_back(wgt);
      mean_lx += sx[i];
    }
    if (wx.size() < 5) continue;
    mean_lx /= static_cast<double>(wx.size());
    const LineFit f = weighted_line(wx, wv, ww);
    if (!f.ok) continue;
    slopes.push_back(f.c1);
    us.push_back(1.0 / (1.0 + std::abs(mean_lx)));
    double wsum = 0;
    for (double w : ww) wsum += w;
    wws.push_back(wsum / static_cast<double>(ww.size()));
  }

  SideFit out;
  if (slopes.size() >= 2) {
    const LineFit f = weighted_line(us, slopes, wws);
    if (f.ok) {
      out.value = f.c0;
      const double u_min = *std::min_element(us.begin(), us.end());
      out.ci = f.wrms + 0.1 * std::abs(f.c1) * u_min + 1e-12;
      return out;
    }
  }
  if (!slopes.empty()) {
    out.value = slopes.back();
    out.ci = std::max(1e-6, 0.5 * std::abs(slopes.back()) * us.back());
    return out;
  }
  // Sparse fallback: one global slope.
  if (n >= 3) {
    std::vector<double> ww(n);
    for (size_t i = 0; i < n; ++i) ww[i] = 1.0 / ((sh[i] + 1e-9) * (sh[i] + 1e-9));
    const LineFit f = weighted_line(sx, sv, ww);
    if (f.ok) {
      out.value = f.c1;
      out.ci = std::max(1e-4, f.wrms);
      return out;
    }
  }
  throw numeric_error("index fit: insufficient samples on one side of x = 1");
}

}  // namespace

// ---------------------------------------------------------------------------

SubmultiplicativeSample SubmultiplicativeSample::from_function(
    const std::function<double(double)>& rho, double x_lo, double x_hi,
    int per_decade) {
  if (!(x_lo > 0) || !(x_hi > x_lo) || per_decade < 1)
    throw std::invalid_argument("from_function: bad grid parameters");
  SubmultiplicativeSample s;
  const int k_lo = static_cast<int>(std::lround(per_decade * std::log10(x_lo)));
  const int k_hi = static_cast<int>(std::lround(per_decade * std::log10(x_hi)));
  for (int k = k_lo; k <= k_hi; ++k) {
    const double x = std::pow(10.0, static_cast<double>(k) / per_decade);
    const double val = rho(x);
    s.x.push_back(x);
    if (finite(val) && val > 0 && val < 1e300) {
      s.log_value.push_back(std::log(val));
      s.halfwidth.push_back(1e-12);
    } else {
      s.log_value.push_back(std::numeric_limits<double>::quiet_NaN());
      s.halfwidth.push_back(std::numeric_limits<double>::quiet_NaN());
      s.dropped.push_back(x);
      if (std::abs(std::log(x)) <= 1.4) s.regular = false;
    }
  }
  return s;
}

bool check_submultiplicative(const SubmultiplicativeSample& s, double slack) {
  const size_t n = s.x.size();
  if (n < 2) return true;
  const double l0 = std::log(s.x[0]);
  const double lq = std::log(s.x[1]) - l0;
  if (!(lq > 0)) return true;
  for (size_t i = 0; i < n; ++i) {
    if (!finite(s.log_value[i])) continue;
    for (size_t j = i; j < n; ++j) {
      if (!finite(s.log_value[j])) continue;
      const double target = std::log(s.x[i]) + std::log(s.x[j]);
      const double kf = (target - l0) / lq;
      const long k = std::lround(kf);
      if (k < 0 || k >= static_cast<long>(n)) continue;
      if (std::abs(kf - static_cast<double>(k)) > 1e-6) continue;
      if (!finite(s.log_value[k])) continue;
      const double allow = std::log1p(slack) + s.halfwidth[i] + s.halfwidth[j] +
                           s.halfwidth[k] + 1e-12;
      if (s.log_value[k] > s.log_value[i] + s.log_value[j] + allow) return false;
    }
  }
  return true;
}

IndexPair index_pair(const SubmultiplicativeSample& s) {
  if (!s.regular)
    throw std::invalid_argument("index_pair: sample is not regular (unbounded near x = 1)");

  std::vector<double> lx_lo, v_lo, hw_lo, lx_hi, v_hi, hw_hi;
  double grid_sup = -std::numeric_limits<double>::infinity();
  double grid_inf = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < s.x.size(); ++i) {
    if (!finite(s.log_value[i])) continue;
    const double lx = std::log(s.x[i]);
    if (std::abs(lx) < 1e-12) continue;
    // Certified variational bounds from the grid: pad each sample by its
    // halfwidth in the direction that keeps the bound valid.
    if (lx < 0) {
      lx_lo.push_back(lx);
      v_lo.push_back(s.log_value[i]);
      hw_lo.push_back(s.halfwidth[i]);
      grid_sup = std::max(grid_sup, (s.log_value[i] + s.halfwidth[i]) / lx);
    } else {
      lx_hi.push_back(lx);
      v_hi.push_back(s.log_value[i]);
      hw_hi.push_back(s.halfwidth[i]);
      grid_inf = std::min(grid_inf, (s.log_value[i] + s.halfwidth[i]) / lx);
    }
  }
  if (lx_lo.size() < 3 || lx_hi.size() < 3)
    throw std::invalid_argument("index_pair: too few valid samples on one side of x = 1");

  const SideFit a = fit_side(lx_lo, v_lo, hw_lo);
  // Map the x -> infinity side onto the x -> 0 machinery by mirroring both
  // coordinates; slopes are preserved.
  std::vector<double> mx(lx_hi.size()), mv(lx_hi.size());
  for (size_t i = 0; i < lx_hi.size(); ++i) {
    mx[i] = -lx_hi[i];
    mv[i] = -v_hi[i];
  }
  const SideFit b = fit_side(mx, mv, hw_hi);

  // The tail fits must not contradict the grid variational forms, which
  // bound the indices from below (alpha) and above (beta).
  if (a.value < grid_sup - 10 * a.ci - 1e-9)
    throw numeric_error("index_pair: lower-index fit inconsistent with grid supremum");
  if (b.value > grid_inf + 10 * b.ci + 1e-9)
    throw numeric_error("index_pair: upper-index fit inconsistent with grid infimum");

  IndexPair out{a.value, b.value, a.ci, b.ci};
  if (out.alpha > out.beta) {
    if (out.alpha - out.beta > 10 * (a.ci + b.ci) + 1e-9)
      throw numeric_error("index_pair: index ordering violated beyond tolerance");
    const double mid = 0.5 * (out.alpha + out.beta);
    out.alpha = out.beta = mid;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ladder statistics and grid assembly shared by the section and mean forms.

namespace {

struct LadderStats {
  std::vector<double> radii;     // descending, radii[0] = d_t
  std::vector<double> hi, lo;    // section extrema of log w (NaN: no section)
  std::vector<double> mean;      // portion means of log w (NaN: no portion)
};

// Integrator for log w against arc length.  Cells near a singular node use a
// local model c*log|s - s_sing| + m fitted from neighboring samples
// (closed-form integral, exact for power-type singularities); plain trapezoid
// elsewhere, with one-sided fallbacks.  Partial end cells of an interval are
// integrated with the same per-cell rule, so interval boundaries that land
// close to a singularity do not pick up an interpolation bias.
class LogIntegral {
 public:
  LogIntegral(const std::vector<double>& f, double h) : f_(f), h_(h) {
    const int nn = static_cast<int>(f_.size());
    // Nearest singular node for every node (index, or -1).
    near_.assign(nn, -1);
    int last = -(kWindow + 2);
    for (int i = 0; i < nn; ++i) {
      if (!finite(f_[i])) last = i;
      if (i - last <= kWindow + 1) near_[i] = last;
    }
    last = nn + kWindow + 2;
    for (int i = nn - 1; i >= 0; --i) {
      if (!finite(f_[i])) last = i;
      if (last - i <= kWindow + 1 && (near_[i] < 0 || last - i < i - near_[i]))
        near_[i] = last;
    }
    p_.assign(nn, 0.0);
    for (int j = 1; j < nn; ++j)
      p_[j] = p_[j - 1] + cell_part(j - 1, h_ * (j - 1), h_ * j);
  }

  // Integral over [0, s].
  double upto(double s) const {
    const int n = static_cast<int>(p_.size()) - 1;  // number of cells
    const double u = std::clamp(s / h_, 0.0, static_cast<double>(n));
    const int j = std::min(static_cast<int>(std::floor(u)), n - 1);
    return p_[j] + cell_part(j, h_ * j, u * h_);
  }

  // Integral over [lo, hi]; hi > length means the component wraps around the
  // seam of a closed curve.
  double over(double lo, double hi, double length) const {
    if (hi <= length + 1e-12 * length)
      return upto(std::min(hi, length)) - upto(lo);
    return (p_.back() - upto(lo)) + upto(hi - length);
  }

 private:
  static constexpr int kWindow = 32;  // cells per side treated with the log model

  // Integral over [a, b], a subinterval of cell [j h, (j+1) h].
  double cell_part(int j, double a, double b) const {
    if (b <= a) return 0.0;
    const int jl = j, jr = j + 1;
    const int nn = static_cast<int>(f_.size());
    auto lerp = [&](double s) {
      const double w = s / h_ - jl;
      return f_[jl] + (f_[jr] - f_[jl]) * w;
    };
    auto plain = [&]() {
      if (finite(f_[jl]) && finite(f_[jr]))
        return 0.5 * (lerp(a) + lerp(b)) * (b - a);
      if (finite(f_[jl])) return f_[jl] * (b - a);
      if (finite(f_[jr])) return f_[jr] * (b - a);
      return 0.0;
    };
    int sg = near_[jl];
    if (near_[jr] >= 0 && (sg < 0 || std::abs(near_[jr] - jr) < std::abs(sg - jl)))
      sg = near_[jr];
    if (sg < 0 || std::min(std::abs(jl - sg), std::abs(jr - sg)) > kWindow)
      return plain();
    int fp, fq;  // model fit nodes, strictly on the cell's side of sg
    if (sg == jl) {
      fp = jr;
      fq = jr + 1;
    } else if (sg == jr) {
      fp = jl;
      fq = jl - 1;
    } else {
      fp = jl;
      fq = jr;
    }
    if (fq < 0 || fq >= nn || !finite(f_[fp]) || !finite(f_[fq])) return plain();
    const double rp = h_ * std::abs(fp - sg), rq = h_ * std::abs(fq - sg);
    const double c = (f_[fq] - f_[fp]) / (std::log(rq) - std::log(rp));
    const double m = f_[fp] - c * std::log(rp);
    const double center = h_ * sg;  // distance to it is monotone over the cell
    auto ii = [](double r) { return r > 0 ? r * (std::log(r) - 1.0) : 0.0; };
    const double sign = a >= center ? 1.0 : -1.0;
    return c * sign * (ii(std::abs(b - center)) - ii(std::abs(a - center))) +
           m * (b - a);
  }

  std::vector<double> f_;
  std::vector<double> p_;
  std::vector<int> near_;
  double h_;
};

LadderStats ladder_stats(const CurveModel& curve, int t_index,
                         const std::function<double(double)>& log_at,
                         const std::vector<double>* log_samples, bool want_sections,
                         bool want_means) {
  const auto st = curve.section_table(t_index);
  const int k_count = st->ladder_size();
  LadderStats ls;
  ls.radii.resize(k_count);
  ls.hi.assign(k_count, std::numeric_limits<double>::quiet_NaN());
  ls.lo.assign(k_count, std::numeric_limits<double>::quiet_NaN());
  ls.mean.assign(k_count, std::numeric_limits<double>::quiet_NaN());

  std::optional<LogIntegral> integ;
  if (want_means) integ.emplace(*log_samples, curve.spacing());

  for (int k = 0; k < k_count; ++k) {
    ls.radii[k] = st->radius(k);
    if (want_sections) {
      double mx = -std::numeric_limits<double>::infinity();
      double mn = std::numeric_limits<double>::infinity();
      for (double s : st->points(k)) {
        const double v = log_at(s);
        if (!finite(v)) continue;
        mx = std::max(mx, v);
        mn = std::min(mn, v);
      }
      if (mx >= mn) {
        ls.hi[k] = mx;
        ls.lo[k] = mn;
      }
    }
    if (want_means) {
      double total = 0, meas = 0;
      for (const auto& [lo, hi] : st->intervals(k)) {
        total += integ->over(lo, hi, curve.length());
        meas += hi - lo;
      }
      if (meas > 0) ls.mean[k] = total / meas;
    }
  }
  return ls;
}

// Assemble the grid x = 2^{m/3} from ladder radius pairs (x R, R).  For the
// sup form the value is the largest pair ratio; for the limit form the pair
// ratios are tail-extrapolated to R -> 0 with the standard drop rules
// (at least 6 pairs, deepest pair at most d/4).
SubmultiplicativeSample assemble(const LadderStats& ls,
                                 const std::function<double(int, int)>& pair_value,
                                 const std::function<bool(int)>& valid_hi,
                                 const std::function<bool(int)>& valid_lo,
                                 bool limit_form, double big_radius_frac) {
  SubmultiplicativeSample out;
  const int k_count = static_cast<int>(ls.radii.size());
  const double d = k_count > 0 ? ls.radii[0] : 0;
  const double big_cap = d * big_radius_frac + 1e-15;
  const int m_max = 60;  // x spans 2^{+-20}, about ten points per decade

  for (int m = -m_max; m <= m_max; ++m) {
    const double x = std::exp2(static_cast<double>(m) / 3.0);
    const int j = std::abs(m);
    std::vector<double> fit_r, pv;
    for (int k = 0; k + j < k_count; ++k) {
      // Pair of ladder radii (x R, R): the larger one is always radii[k].
      if (ls.radii[k] > big_cap) continue;
      const int k_num = m < 0 ? k + j : k;  // numerator: radius x R
      const int k_den = m < 0 ? k : k + j;  // denominator: radius R
      if (!valid_hi(k_num) || !valid_lo(k_den)) continue;
      fit_r.push_back(ls.radii[k]);
      pv.push_back(pair_value(k_num, k_den));
    }
    out.x.push_back(x);
    bool ok = false;
    double value = 0, hw = 0;
    if (limit_form) {
      if (static_cast<int>(pv.size()) >= 6 && fit_r.back() <= d / 4 + 1e-15) {
        const TailFit tf = extrap_tail(fit_r, pv);
        value = tf.value;
        hw = tf.halfwidth;
        ok = true;
      }
    } else if (!pv.empty()) {
      value = *std::max_element(pv.begin(), pv.end());
      hw = 1e-12;
      ok = true;
    }
    if (ok) {
      out.log_value.push_back(value);
      out.halfwidth.push_back(hw);
    } else {
      out.log_value.push_back(std::numeric_limits<double>::quiet_NaN());
      out.halfwidth.push_back(std::numeric_limits<double>::quiet_NaN());
      out.dropped.push_back(x);
    }
  }
  return out;
}

SubmultiplicativeSample ratio_sample(const CurveModel& curve, int t_index,
                                     const std::function<double(double)>& log_at,
                                     const std::vector<double>* log_samples,
                                     bool mean_form, bool limit_form) {
  const LadderStats ls =
      ladder_stats(curve, t_index, log_at, log_samples, !mean_form, mean_form);
  auto pair_value = [&](int k_num, int k_den) {
    return mean_form ? ls.mean[k_num] - ls.mean[k_den] : ls.hi[k_num] - ls.lo[k_den];
  };
  auto valid_hi = [&](int k) { return finite(mean_form ? ls.mean[k] : ls.hi[k]); };
  auto valid_lo = [&](int k) { return finite(mean_form ? ls.mean[k] : ls.lo[k]); };
  // Portion means carry geometry corrections that are only small well below
  // the curve diameter, so their limit form extrapolates from pairs whose
  // larger radius stays under d/2.  Section extrema have no such correction.
  const double frac = (mean_form && limit_form) ? 0.5 : 1.0;
  return assemble(ls, pair_value, valid_hi, valid_lo, limit_form, frac);
}

// Interpolated per-sample log weight: linear inside cells with two finite
// endpoints, one-sided otherwise.
std::function<double(double)> sample_interp(const CurveModel& curve,
                                            const std::vector<double>& lw) {
  const double h = curve.spacing();
  const int n = curve.resolution();
  return [&curve, &lw, h, n](double s) {
    const double u = s / h;
    const int i = std::clamp(static_cast<int>(std::floor(u)), 0, n - 1);
    const double f = u - i;
    const double a = lw[i], b = lw[i + 1];
    if (finite(a) && finite(b)) return a + (b - a) * f;
    if (finite(a) && f <= 0.5) return a;
    if (finite(b) && f >= 0.5) return b;
    return std::numeric_limits<double>::quiet_NaN();
  };
}

void check_log_integrable(const CurveModel& curve, const LocalWeight& lw, cplx t) {
  std::vector<double> f(curve.resolution() + 1);
  for (int i = 0; i <= curve.resolution(); ++i) f[i] = lw.log_at_sample(i);
  const BmoResult r = bmo_at(curve, f, t);
  if (r.diverged)
    throw numeric_error("mean ratio: log weight oscillation diverges near the point");
}

}  // namespace

SubmultiplicativeSample section_ratio(const CurveModel& curve, cplx t, const Weight& w) {
  const int ti = curve.snap_to_sample(t);
  const LocalWeight lw(curve, w);
  return ratio_sample(curve, ti, [&](double s) { return lw.log_at(s); }, nullptr,
                      false, false);
}

SubmultiplicativeSample section_ratio_limit(const CurveModel& curve, cplx t,
                                            const Weight& w) {
  const int ti = curve.snap_to_sample(t);
  const LocalWeight lw(curve, w);
  return ratio_sample(curve, ti, [&](double s) { return lw.log_at(s); }, nullptr,
                      false, true);
}

SubmultiplicativeSample section_ratio_from_samples(const CurveModel& curve, int t_index,
                                                   const std::vector<double>& log_w,
                                                   bool limit_form) {
  return ratio_sample(curve, t_index, sample_interp(curve, log_w), nullptr, false,
                      limit_form);
}

double portion_mean_ratio(const CurveModel& curve, const Weight& w, cplx t, double r1,
                          double r2) {
  const LocalWeight lw(curve, w);
  std::vector<double> f(curve.resolution() + 1);
  for (int i = 0; i <= curve.resolution(); ++i) f[i] = lw.log_at_sample(i);
  const LogIntegral integ(f, curve.spacing());
  auto mean_at = [&](double r) {
    const ArcPortion p = curve.portion(t, r);
    double total = 0, meas = 0;
    for (const auto& [lo, hi] : p.components) {
      total += integ.over(lo, hi, curve.length());
      meas += hi - lo;
    }
    if (!(meas > 0)) throw numeric_error("portion mean ratio: empty portion");
    return total / meas;
  };
  return std::exp(mean_at(r1) - mean_at(r2));
}

SubmultiplicativeSample mean_ratio(const CurveModel& curve, cplx t, const Weight& w,
                                   bool check_integrable) {
  const int ti = curve.snap_to_sample(t);
  const LocalWeight lw(curve, w);
  if (check_integrable) check_log_integrable(curve, lw, t);
  std::vector<double> f(curve.resolution() + 1);
  for (int i = 0; i <= curve.resolution(); ++i) f[i] = lw.log_at_sample(i);
  return ratio_sample(curve, ti, nullptr, &f, true, false);
}

SubmultiplicativeSample mean_ratio_limit(const CurveModel& curve, cplx t,
                                         const Weight& w, bool check_integrable) {
  const int ti = curve.snap_to_sample(t);
  const LocalWeight lw(curve, w);
  if (check_integrable) check_log_integrable(curve, lw, t);
  std::vector<double> f(curve.resolution() + 1);
  for (int i = 0; i <= curve.resolution(); ++i) f[i] = lw.log_at_sample(i);
  return ratio_sample(curve, ti, nullptr, &f, true, true);
}

SubmultiplicativeSample mean_ratio_from_samples(const CurveModel& curve, int t_index,
                                                const std::vector<double>& log_w,
                                                bool limit_form) {
  return ratio_sample(curve, t_index, nullptr, &log_w, true, limit_form);
}

std::pair<double, double> spirality(const CurveModel& curve, cplx t) {
  const int ti = curve.snap_to_sample(t);
  const cplx ts = curve.sample(ti);
  const IndexPair base =
      index_pair(section_ratio_limit(curve, ts, Weight({WeightFactor::eta_power(ts, 1.0)})));

  for (double xv : {-2.0, -1.0, 2.0}) {
    const IndexPair scaled = index_pair(
        section_ratio_limit(curve, ts, Weight({WeightFactor::eta_power(ts, xv)})));
    const double want_a = std::min(base.alpha * xv, base.beta * xv);
    const double want_b = std::max(base.alpha * xv, base.beta * xv);
    const double ci = std::max({base.alpha_ci, base.beta_ci, scaled.alpha_ci,
                                scaled.beta_ci});
    const double tol = std::max(5e-3, 20 * ci) * std::max(1.0, std::abs(xv));
    if (std::abs(scaled.alpha - want_a) > tol || std::abs(scaled.beta - want_b) > tol)
      throw numeric_error("spirality: scaling law violated for a geometry power");
  }
  return {base.alpha, base.beta};
}

std::pair<double, double> envelope_constants(const CurveModel& curve, cplx t0,
                                             const Weight& psi, double eps,
                                             double delta) {
  if (!(eps > 0) || !(delta > 0))
    throw std::invalid_argument("envelope_constants: eps and delta must be positive");
  const int ti = curve.snap_to_sample(t0);
  const cplx ts = curve.sample(ti);
  const LocalWeight lw(curve, psi);
  const IndexPair ip = index_pair(section_ratio(curve, ts, psi));
  const double e1 = ip.beta + eps;
  const double e2 = ip.alpha - eps;

  const ArcPortion omega = curve.omega_arc(ts, delta);
  const int n = curve.resolution();
  const double h = curve.spacing();
  const double len = curve.length();
  auto inside = [&](double s) {
    for (const auto& [lo, hi] : omega.components) {
      if (s >= lo && s <= hi) return true;
      if (hi > len && s + len >= lo && s + len <= hi) return true;
    }
    return false;
  };

  std::vector<int> in_idx, out_idx;
  for (int i = 0; i < n; ++i) {
    if (lw.is_singular_sample(i)) continue;
    const double r = std::abs(curve.sample(i) - ts);
    if (r < 2 * h) continue;  // too close to the center for a stable ratio
    (inside(i * h) ? in_idx : out_idx).push_back(i);
  }
  if (in_idx.empty() || out_idx.empty())
    throw numeric_error("envelope_constants: empty side of the splitting arc");
  auto thin = [](std::vector<int>& v) {
    const size_t cap = 512;
    if (v.size() <= cap) return;
    std::vector<int> kept;
    const double stride = static_cast<double>(v.size()) / cap;
    for (size_t i = 0; i < cap; ++i) kept.push_back(v[static_cast<size_t>(i * stride)]);
    v.swap(kept);
  };
  thin(in_idx);
  thin(out_idx);

  double c1 = 1, c2 = 1;
  for (int i : out_idx) {
    const double li = lw.log_at_sample(i);
    const double gi = std::log(std::abs(curve.sample(i) - ts));
    for (int j : in_idx) {
      const double lj = lw.log_at_sample(j);
      const double gj = std::log(std::abs(curve.sample(j) - ts));
      c1 = std::max(c1, std::exp(li - lj - e1 * (gi - gj)));
      c2 = std::max(c2, std::exp(lj - li - e2 * (gj - gi)));
    }
  }
  return {c1, c2};
}

}  // namespace sio
