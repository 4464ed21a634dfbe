#pragma once
// Geometry kernel for simple rectifiable curves (closed or open):
// arclength parameterization, chord-ball portions, Carleson constant,
// continuous argument branches, and point-set sections |tau - t| = R.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "sio/common.hpp"

namespace sio {

enum class CurveKind { UnitCircle, SmoothJordan, LogSpiralAttached, PolylineSampled };

// A chord-ball portion {tau on curve : |tau - t| < R} as a union of
// maximal arclength intervals.
struct ArcPortion {
  cplx center{};
  double radius = 0;
  std::vector<std::pair<double, double>> components;  // [s_lo, s_hi] intervals

  double measure() const;
};

// Continuous branch of arg(tau(s) - t) on the curve minus the point t,
// unwrapped along arclength away from t on each side.
class ArgBranch {
 public:
  double operator()(double s) const;  // throws numeric_error at s == s_t
  double at_sample(int i) const;      // NaN at the excluded sample
  // Difference between the branch values at the two samples adjacent to t
  // going the long way around (closed curves) or end-to-end (open curves).
  double total_increment() const;

 private:
  friend class CurveModel;
  const class CurveModel* curve_ = nullptr;
  int t_index_ = -1;
  std::vector<double> phi_;  // per-sample branch values, NaN at t_index_
};

// Point set {tau on curve : |tau - t| = R_k} for a dyadic-third ladder of
// radii R_k = d_t * 2^{-k/3}, built once per (curve, center) and shared.
class SectionTable {
 public:
  int t_index() const { return t_index_; }
  double center_distance_max() const { return d_max_; }
  int ladder_size() const { return static_cast<int>(radii_.size()); }
  double radius(int k) const { return radii_[k]; }
  // Arclength positions of the section points at ladder radius k.
  const std::vector<double>& points(int k) const { return points_[k]; }
  // Portion components at ladder radius k (for portion-mean machinery).
  const std::vector<std::pair<double, double>>& intervals(int k) const {
    return intervals_[k];
  }

 private:
  friend class CurveModel;
  int t_index_ = -1;
  double d_max_ = 0;
  std::vector<double> radii_;
  std::vector<std::vector<double>> points_;
  std::vector<std::vector<std::pair<double, double>>> intervals_;
};

class CurveModel {
 public:
  static constexpr int kDefaultResolution = 1 << 14;

  static CurveModel unit_circle(int resolution = kDefaultResolution);
  // tau(theta) = sum_k coeffs[k] * e^{i (k - offset) theta}; must be simple.
  static CurveModel smooth_jordan(const std::vector<cplx>& coeffs, int offset,
                                  int resolution = kDefaultResolution);
  // Unit circle with the arc near the attachment point 1 replaced by two
  // logarithmic-spiral arms: arg(tau - 1) = -delta * log|tau - 1| + const
  // exactly for |tau - 1| <= r0.  |delta| <= 4.
  static CurveModel log_spiral_attached(double delta, double r0 = 0.5,
                                        int resolution = kDefaultResolution);
  static CurveModel polyline(const std::vector<cplx>& points,
                             int resolution = kDefaultResolution);
  static CurveModel segment(cplx a, cplx b, int resolution = kDefaultResolution);

  CurveKind kind() const { return kind_; }
  double length() const { return length_; }
  bool closed() const { return closed_; }
  int resolution() const { return n_; }
  double spacing() const { return length_ / n_; }
  // For the log-spiral curve: the exact spiral rate and reach (tests).
  double spiral_rate() const { return spiral_delta_; }
  double spiral_reach() const { return spiral_r0_; }

  // The n_+1 arclength-uniform samples tau(i*h), i = 0..n_ (closed curves
  // wrap: last == first).
  const std::vector<cplx>& samples() const { return pts_; }
  cplx sample(int i) const { return pts_[i]; }
  cplx point_at(double s) const;  // throws std::invalid_argument off [0, L]

  // Index of the nearest sample; throws if farther than a few spacings.
  int snap_to_sample(cplx t) const;

  double d_max(cplx t) const;  // max over samples of |tau - t|

  ArcPortion portion(cplx t, double R) const;
  // The single arc containing t with endpoints at chord distance delta.
  ArcPortion omega_arc(cplx t, double delta) const;

  struct CarlesonResult {
    double value = 0;
    cplx argmax_t{};
    double argmax_r = 0;
    bool diverged = false;  // grew under radius-floor refinement
  };
  const CarlesonResult& carleson_constant() const;  // cached

  ArgBranch arg_branch(cplx t) const;
  // Cached branch / section table keyed by sample index.
  std::shared_ptr<const ArgBranch> arg_branch_cached(int t_index) const;
  std::shared_ptr<const SectionTable> section_table(int t_index) const;

 private:
  CurveModel() = default;

  CurveKind kind_ = CurveKind::UnitCircle;
  bool closed_ = true;
  double length_ = 0;
  int n_ = 0;
  double spiral_delta_ = 0, spiral_r0_ = 0;
  std::vector<cplx> pts_;

  // Heap-held so the model stays movable (factories return by value).
  mutable std::unique_ptr<std::mutex> cache_mu_ = std::make_unique<std::mutex>();
  mutable std::optional<CarlesonResult> carleson_;
  mutable std::map<int, std::shared_ptr<const ArgBranch>> branch_cache_;
  mutable std::map<int, std::shared_ptr<const SectionTable>> section_cache_;
};

// |Gamma(t, R)| via linear interpolation of the radial profile between
// samples (fast path used by sweeps; portion() refines by bisection).
double portion_measure_fast(const std::vector<double>& radial, double h,
                            bool closed, double R);

}  // namespace sio
