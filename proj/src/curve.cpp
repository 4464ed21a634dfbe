#include "sio/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sio {

namespace {

double principal_arg(cplx z) { return std::arg(z); }

// Map an angle difference into (-pi, pi].
double wrap_pm_pi(double d) {
  d = std::fmod(d, 2 * kPi);
  if (d <= -kPi) d += 2 * kPi;
  if (d > kPi) d -= 2 * kPi;
  return d;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
  const double decades = std::log10(hi / lo);
  const int m = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
  std::vector<double> g(m + 1);
  for (int i = 0; i <= m; ++i) g[i] = lo * std::pow(hi / lo, double(i) / m);
  g.back() = hi;
  return g;
}

double ArcPortion::measure() const {
  double m = 0;
  for (const auto& [lo, hi] : components) m += hi - lo;
  return m;
}

// ---------------------------------------------------------------------------
// Construction

CurveModel CurveModel::unit_circle(int resolution) {
  CurveModel c;
  c.kind_ = CurveKind::UnitCircle;
  c.closed_ = true;
  c.n_ = resolution;
  c.length_ = 2 * kPi;
  c.pts_.resize(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    const double s = c.length_ * i / resolution;
    c.pts_[i] = std::polar(1.0, s);
  }
  c.pts_.back() = c.pts_.front();
  return c;
}

CurveModel CurveModel::smooth_jordan(const std::vector<cplx>& coeffs, int offset,
                                     int resolution) {
  if (coeffs.empty()) throw std::invalid_argument("smooth_jordan: empty coefficient list");
  CurveModel c;
  c.kind_ = CurveKind::SmoothJordan;
  c.closed_ = true;
  c.n_ = resolution;

  // Dense parameter sampling, then resample to uniform arclength.
  const int m0 = 16 * resolution;
  std::vector<cplx> raw(m0 + 1);
  for (int j = 0; j <= m0; ++j) {
    const double th = 2 * kPi * j / m0;
    const cplx w = std::polar(1.0, th);
    cplx e = std::polar(1.0, -offset * th);  // e^{i(k - offset) th}, k = 0
    cplx z = 0;
    for (size_t k = 0; k < coeffs.size(); ++k, e *= w) z += coeffs[k] * e;
    raw[j] = z;
  }
  raw.back() = raw.front();
  std::vector<double> cum(m0 + 1, 0.0);
  for (int j = 1; j <= m0; ++j) cum[j] = cum[j - 1] + std::abs(raw[j] - raw[j - 1]);
  c.length_ = cum.back();
  if (!(c.length_ > 0)) throw std::invalid_argument("smooth_jordan: degenerate curve");

  c.pts_.resize(resolution + 1);
  int j = 0;
  for (int i = 0; i <= resolution; ++i) {
    const double s = c.length_ * i / resolution;
    while (j < m0 && cum[j + 1] < s) ++j;
    const double seg = cum[j + 1] - cum[j];
    const double f = seg > 0 ? (s - cum[j]) / seg : 0.0;
    c.pts_[i] = raw[j] + f * (raw[j + 1] - raw[j]);
  }
  c.pts_.back() = c.pts_.front();

  // Light simplicity check on a subsample.
  const int stride = std::max(1, resolution / 512);
  for (int a = 0; a < resolution; a += stride)
    for (int b = a + stride; b < resolution; b += stride) {
      const double arc = std::min(double(b - a), double(resolution - (b - a))) * c.spacing();
      if (arc > 4 * c.spacing() && std::abs(c.pts_[a] - c.pts_[b]) < 1e-9)
        throw std::invalid_argument("smooth_jordan: curve is not simple at sampled resolution");
    }
  return c;
}

CurveModel CurveModel::log_spiral_attached(double delta, double r0, int resolution) {
  if (!(r0 > 0) || !(r0 < 1))
    throw std::invalid_argument("log_spiral_attached: need 0 < r0 < 1");
  if (std::abs(delta) > 4.0)
    throw std::invalid_argument(
        "log_spiral_attached: |rate| <= 4 required (phase steps must stay below pi)");
  CurveModel c;
  c.kind_ = CurveKind::LogSpiralAttached;
  c.closed_ = true;
  c.n_ = resolution;
  c.spiral_delta_ = delta;
  c.spiral_r0_ = r0;

  const double theta0 = 2 * std::asin(r0 / 2);
  const double stretch = std::sqrt(1 + delta * delta);
  const double arm = stretch * r0;
  c.length_ = 2 * arm + (2 * kPi - 2 * theta0);

  // s in [0, arm]: outgoing spiral arm from the center point 1 to e^{i theta0};
  // s in [arm, L - arm]: circle arc; s in [L - arm, L]: incoming arm back to 1.
  const double c_out = (theta0 + kPi) / 2 + delta * std::log(r0);
  const double c_in = -(theta0 + kPi) / 2 + delta * std::log(r0);
  c.pts_.resize(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    const double s = c.length_ * i / resolution;
    cplx z;
    if (s <= 0 || s >= c.length_) {
      z = 1.0;
    } else if (s < arm) {
      const double r = s / stretch;
      z = 1.0 + std::polar(r, -delta * std::log(r) + c_out);
    } else if (s <= c.length_ - arm) {
      z = std::polar(1.0, theta0 + (s - arm));
    } else {
      const double r = (c.length_ - s) / stretch;
      z = 1.0 + std::polar(r, -delta * std::log(r) + c_in);
    }
    c.pts_[i] = z;
  }
  c.pts_.back() = c.pts_.front();
  return c;
}

CurveModel CurveModel::polyline(const std::vector<cplx>& points, int resolution) {
  if (points.size() < 2) throw std::invalid_argument("polyline: need at least 2 points");
  CurveModel c;
  c.kind_ = CurveKind::PolylineSampled;
  c.closed_ = std::abs(points.front() - points.back()) == 0.0;
  c.n_ = resolution;
  const int m = static_cast<int>(points.size()) - 1;
  std::vector<double> cum(m + 1, 0.0);
  for (int j = 1; j <= m; ++j) cum[j] = cum[j - 1] + std::abs(points[j] - points[j - 1]);
  c.length_ = cum.back();
  if (!(c.length_ > 0)) throw std::invalid_argument("polyline: degenerate");
  c.pts_.resize(resolution + 1);
  int j = 0;
  for (int i = 0; i <= resolution; ++i) {
    const double s = c.length_ * i / resolution;
    while (j < m - 1 && cum[j + 1] < s) ++j;
    const double seg = cum[j + 1] - cum[j];
    const double f = seg > 0 ? (s - cum[j]) / seg : 0.0;
    c.pts_[i] = points[j] + f * (points[j + 1] - points[j]);
  }
  c.pts_.back() = points.back();
  return c;
}

CurveModel CurveModel::segment(cplx a, cplx b, int resolution) {
  return polyline({a, b}, resolution);
}

// ---------------------------------------------------------------------------
// Point queries

cplx CurveModel::point_at(double s) const {
  if (!(s >= 0.0 && s <= length_))
    throw std::invalid_argument("point_at: arclength out of range");
  switch (kind_) {
    case CurveKind::UnitCircle:
      return std::polar(1.0, s);
    case CurveKind::LogSpiralAttached: {
      const double stretch = std::sqrt(1 + spiral_delta_ * spiral_delta_);
      const double arm = stretch * spiral_r0_;
      const double theta0 = 2 * std::asin(spiral_r0_ / 2);
      const double c_out = (theta0 + kPi) / 2 + spiral_delta_ * std::log(spiral_r0_);
      const double c_in = -(theta0 + kPi) / 2 + spiral_delta_ * std::log(spiral_r0_);
      if (s <= 0 || s >= length_) return 1.0;
      if (s < arm) {
        const double r = s / stretch;
        return 1.0 + std::polar(r, -spiral_delta_ * std::log(r) + c_out);
      }
      if (s <= length_ - arm) return std::polar(1.0, theta0 + (s - arm));
      const double r = (length_ - s) / stretch;
      return 1.0 + std::polar(r, -spiral_delta_ * std::log(r) + c_in);
    }
    default: {
      const double u = s / spacing();
      const int i = std::min(n_ - 1, static_cast<int>(u));
      const double f = u - i;
      return pts_[i] + f * (pts_[i + 1] - pts_[i]);
    }
  }
}

int CurveModel::snap_to_sample(cplx t) const {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i) {
    const double d = std::abs(pts_[i] - t);
    if (d < bd) { bd = d; best = i; }
  }
  if (bd > 4 * spacing())
    throw std::invalid_argument("point is not on the curve (distance " +
                                std::to_string(bd) + " exceeds sample tolerance)");
  return best;
}

double CurveModel::d_max(cplx t) const {
  double d = 0;
  for (int i = 0; i < n_; ++i) d = std::max(d, std::abs(pts_[i] - t));
  return d;
}

// ---------------------------------------------------------------------------
// Portions

namespace {

// Bisection for |curve(s) - t| = R inside [s_lo, s_hi]; the endpoints must
// bracket a sign change of the residual.
double refine_crossing(const CurveModel& c, cplx t, double R, double s_lo, double s_hi) {
  double f_lo = std::abs(c.point_at(s_lo) - t) - R;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (s_lo + s_hi);
    const double f_mid = std::abs(c.point_at(mid) - t) - R;
    if ((f_lo <= 0) == (f_mid <= 0)) {
      s_lo = mid;
      f_lo = f_mid;
    } else {
      s_hi = mid;
    }
    if (s_hi - s_lo < 1e-12 * std::max(1.0, std::abs(s_hi))) break;
  }
  return 0.5 * (s_lo + s_hi);
}

}  // namespace

ArcPortion CurveModel::portion(cplx t, double R) const {
  if (!(R > 0)) throw std::invalid_argument("portion: R must be positive");
  ArcPortion out;
  out.center = t;
  out.radius = R;

  const double h = spacing();
  std::vector<std::pair<double, double>>& comp = out.components;
  bool inside = std::abs(pts_[0] - t) < R;
  double open_at = inside ? 0.0 : -1.0;
  for (int i = 0; i < n_; ++i) {
    const bool next_inside = std::abs(pts_[i + 1] - t) < R;
    if (next_inside != inside) {
      const double s = refine_crossing(*this, t, R, i * h, (i + 1) * h);
      if (next_inside) {
        open_at = s;
      } else {
        comp.emplace_back(open_at, s);
        if (comp.size() > 64)
          throw numeric_error("portion has more than 64 components: resolution insufficient");
      }
      inside = next_inside;
    }
  }
  if (inside) comp.emplace_back(open_at, length_);

  // Closed curves: an interval ending at L and one starting at 0 are the same
  // component; merge with wrapped coordinates (hi may exceed L).
  if (closed_ && comp.size() >= 2 && comp.front().first == 0.0 &&
      comp.back().second == length_) {
    comp.back().second = length_ + comp.front().second;
    comp.erase(comp.begin());
  } else if (closed_ && comp.size() == 1 && comp.front().first == 0.0 &&
             comp.front().second == length_) {
    // whole curve inside
  }

  if (comp.empty() && R < h)
    throw numeric_error("portion: resolution insufficient for radius below sample spacing");
  return out;
}

double portion_measure_fast(const std::vector<double>& radial, double h, bool /*closed*/,
                            double R) {
  double m = 0;
  const size_t nseg = radial.size() - 1;
  for (size_t i = 0; i < nseg; ++i) {
    const double a = radial[i], b = radial[i + 1];
    const bool ia = a < R, ib = b < R;
    if (ia && ib) {
      m += h;
    } else if (ia != ib) {
      const double f = (R - a) / (b - a);  // linear radial profile on the segment
      m += ia ? h * f : h * (1 - f);
    }
  }
  return m;
}

ArcPortion CurveModel::omega_arc(cplx t, double delta) const {
  const int it = snap_to_sample(t);
  if (!(delta > 0) || delta >= d_max(t))
    throw std::invalid_argument("omega_arc: need 0 < delta < max distance");
  const double h = spacing();

  double s_hi, s_lo;
  if (closed_) {
    // Expand from t while strictly inside the chord ball (indices unwrapped,
    // positions taken modulo n_).
    auto r_at = [&](int i) { return std::abs(pts_[((i % n_) + n_) % n_] - t); };
    int lo = it, hi = it;
    for (int step = 0; step < n_ && r_at(hi + 1) < delta; ++step) ++hi;
    for (int step = 0; step < n_ && r_at(lo - 1) < delta; ++step) --lo;
    if (hi - lo >= n_)
      throw std::invalid_argument("omega_arc: delta covers the whole curve");
    const int hi_m = ((hi % n_) + n_) % n_;
    const int lo_m = (((lo - 1) % n_) + n_) % n_;
    s_hi = refine_crossing(*this, t, delta, hi_m * h, (hi_m + 1) * h) + (hi - hi_m) * h;
    s_lo = refine_crossing(*this, t, delta, lo_m * h, (lo_m + 1) * h) +
           (lo - 1 - lo_m) * h;
  } else {
    int lo = it, hi = it;
    while (hi + 1 <= n_ && std::abs(pts_[hi + 1] - t) < delta) ++hi;
    while (lo - 1 >= 0 && std::abs(pts_[lo - 1] - t) < delta) --lo;
    s_hi = (hi >= n_) ? length_ : refine_crossing(*this, t, delta, hi * h, (hi + 1) * h);
    s_lo = (lo <= 0) ? 0.0 : refine_crossing(*this, t, delta, (lo - 1) * h, lo * h);
  }
  ArcPortion out;
  out.center = t;
  out.radius = delta;
  if (s_lo < 0) { s_lo += length_; s_hi += length_; }
  out.components.emplace_back(s_lo, s_hi);
  return out;
}

// ---------------------------------------------------------------------------
// Carleson constant

const CurveModel::CarlesonResult& CurveModel::carleson_constant() const {
  std::lock_guard<std::mutex> lock(*cache_mu_);
  if (carleson_) return *carleson_;

  CarlesonResult res;
  const double h = spacing();
  const int stride = std::max(1, n_ / 256);
  std::vector<double> radial(n_ + 1);
  double sup_all = 0, sup_coarse = 0;  // radius floors 4h and 32h
  for (int it = 0; it < n_; it += stride) {
    const cplx t = pts_[it];
    double dt = 0;
    for (int i = 0; i <= n_; ++i) {
      radial[i] = std::abs(pts_[i] - t);
      dt = std::max(dt, radial[i]);
    }
    if (dt <= 4 * h) continue;
    auto grid = log_grid(4 * h, dt, 64);
    for (double R : grid) {
      const double v = portion_measure_fast(radial, h, closed_, R) / R;
      if (v > sup_all) {
        sup_all = v;
        res.argmax_t = t;
        res.argmax_r = R;
      }
      if (R >= 32 * h) sup_coarse = std::max(sup_coarse, v);
    }
  }
  res.value = sup_all;
  res.diverged = sup_coarse > 0 && sup_all / sup_coarse > 1.5;
  carleson_ = res;
  return *carleson_;
}

// ---------------------------------------------------------------------------
// Argument branch

double ArgBranch::at_sample(int i) const { return phi_[i]; }

double ArgBranch::operator()(double s) const {
  const double h = curve_->spacing();
  const double L = curve_->length();
  if (s < 0 || s > L) throw std::invalid_argument("arg branch: arclength out of range");
  int j = std::min(curve_->resolution() - 1, static_cast<int>(s / h));
  double base = phi_[j];
  if (std::isnan(base)) base = phi_[j + 1];
  if (std::isnan(base)) throw numeric_error("arg branch evaluated at its excluded point");
  const cplx d = curve_->point_at(s) - curve_->sample(t_index_);
  if (std::abs(d) == 0.0) throw numeric_error("arg branch evaluated at its excluded point");
  // Snap the principal argument onto the accumulated branch.
  return base + wrap_pm_pi(principal_arg(d) - base);
}

double ArgBranch::total_increment() const {
  const int n = curve_->resolution();
  if (curve_->closed()) {
    const int first = (t_index_ + 1) % n;
    const int last = (t_index_ - 1 + n) % n;
    return phi_[last] - phi_[first];
  }
  double span = 0;
  if (t_index_ + 1 <= n) span = phi_[n] - phi_[t_index_ + 1];
  if (t_index_ - 1 >= 0) span += phi_[t_index_ - 1] - phi_[0];
  return span;
}

ArgBranch CurveModel::arg_branch(cplx t) const {
  const int it = snap_to_sample(t);
  ArgBranch br;
  br.curve_ = this;
  br.t_index_ = it;
  br.phi_.assign(n_ + 1, std::numeric_limits<double>::quiet_NaN());
  const cplx tc = pts_[it];

  auto unwrap_walk = [&](int from, int count, int step) {
    double prev = principal_arg(pts_[((from % n_) + n_) % n_] - tc);
    br.phi_[((from % n_) + n_) % n_] = prev;
    int idx = from;
    for (int k = 1; k < count; ++k) {
      idx += step;
      const int im = ((idx % n_) + n_) % n_;
      const cplx d = pts_[im] - tc;
      if (std::abs(d) == 0.0) break;  // reached the excluded point
      const double delta = wrap_pm_pi(principal_arg(d) - prev);
      if (std::abs(delta) >= 0.999 * kPi)
        throw numeric_error("arg branch under-resolved: phase step of almost pi");
      prev += delta;
      br.phi_[im] = prev;
    }
  };

  if (closed_) {
    unwrap_walk(it + 1, n_ - 1, +1);
  } else {
    if (it + 1 <= n_) {
      // walk right to the end (index n_ inclusive)
      double prev = principal_arg(pts_[it + 1] - tc);
      br.phi_[it + 1] = prev;
      for (int i = it + 2; i <= n_; ++i) {
        const double delta = wrap_pm_pi(principal_arg(pts_[i] - tc) - prev);
        if (std::abs(delta) >= 0.999 * kPi)
          throw numeric_error("arg branch under-resolved: phase step of almost pi");
        prev += delta;
        br.phi_[i] = prev;
      }
    }
    if (it - 1 >= 0) {
      double prev = principal_arg(pts_[it - 1] - tc);
      br.phi_[it - 1] = prev;
      for (int i = it - 2; i >= 0; --i) {
        const double delta = wrap_pm_pi(principal_arg(pts_[i] - tc) - prev);
        if (std::abs(delta) >= 0.999 * kPi)
          throw numeric_error("arg branch under-resolved: phase step of almost pi");
        prev += delta;
        br.phi_[i] = prev;
      }
    }
  }
  if (closed_) br.phi_[n_] = br.phi_[0];
  return br;
}

std::shared_ptr<const ArgBranch> CurveModel::arg_branch_cached(int t_index) const {
  std::lock_guard<std::mutex> lock(*cache_mu_);
  auto itr = branch_cache_.find(t_index);
  if (itr != branch_cache_.end()) return itr->second;
  auto br = std::make_shared<ArgBranch>(arg_branch(pts_[t_index]));
  branch_cache_[t_index] = br;
  return br;
}

// ---------------------------------------------------------------------------
// Section tables

std::shared_ptr<const SectionTable> CurveModel::section_table(int t_index) const {
  {
    std::lock_guard<std::mutex> lock(*cache_mu_);
    auto itr = section_cache_.find(t_index);
    if (itr != section_cache_.end()) return itr->second;
  }
  auto tab = std::make_shared<SectionTable>();
  tab->t_index_ = t_index;
  const cplx t = pts_[t_index];
  const double h = spacing();
  std::vector<double> radial(n_ + 1);
  double dt = 0;
  for (int i = 0; i <= n_; ++i) {
    radial[i] = std::abs(pts_[i] - t);
    dt = std::max(dt, radial[i]);
  }
  tab->d_max_ = dt;
  for (int k = 0;; ++k) {
    const double R = dt * std::pow(2.0, -k / 3.0);
    if (R < 4 * h) break;
    tab->radii_.push_back(R);
    std::vector<double> pts;
    std::vector<std::pair<double, double>> ivs;
    bool inside = radial[0] < R;
    double open_at = inside ? 0.0 : -1.0;
    for (int i = 0; i < n_; ++i) {
      const bool nx = radial[i + 1] < R;
      if (nx != inside) {
        const double s = refine_crossing(*this, t, R, i * h, (i + 1) * h);
        pts.push_back(s);
        if (nx) open_at = s;
        else ivs.emplace_back(open_at, s);
        inside = nx;
      }
    }
    if (inside) ivs.emplace_back(open_at, length_);
    if (closed_ && ivs.size() >= 2 && ivs.front().first == 0.0 &&
        ivs.back().second == length_) {
      ivs.back().second = length_ + ivs.front().second;
      ivs.erase(ivs.begin());
    }
    tab->points_.push_back(std::move(pts));
    tab->intervals_.push_back(std::move(ivs));
  }
  std::lock_guard<std::mutex> lock(*cache_mu_);
  auto [itr, inserted] = section_cache_.try_emplace(t_index, tab);
  return itr->second;
}

}  // namespace sio
