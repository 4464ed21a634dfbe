#pragma once
// Submultiplicative-function machinery: grid samples of the ratio envelopes
// built from circle-section extrema (section_ratio*) or portion log-means
// (mean_ratio*), index extraction by tail extrapolation, spirality of a
// curve at a point, and power-envelope constants.

#include <functional>
#include <utility>

#include "sio/spaces.hpp"

namespace sio {

// Samples of a submultiplicative function rho on a geometric grid.
// log_value is NaN at grid points that could not be computed (annotated in
// `dropped`); halfwidth is the extrapolation uncertainty of log_value.
struct SubmultiplicativeSample {
  std::vector<double> x;          // ascending, geometric
  std::vector<double> log_value;  // log rho(x_k), NaN where dropped
  std::vector<double> halfwidth;
  std::vector<double> dropped;    // x values without a valid estimate
  bool regular = true;            // bounded near x = 1

  static SubmultiplicativeSample from_function(
      const std::function<double(double)>& rho, double x_lo = 1e-6,
      double x_hi = 1e6, int per_decade = 25);
};

// Grid check of rho(x*y) <= rho(x)*rho(y)*(1+slack) for on-grid products.
bool check_submultiplicative(const SubmultiplicativeSample& s, double slack = 1e-6);

struct IndexPair {
  double alpha = 0, beta = 0;
  double alpha_ci = 0, beta_ci = 0;  // extrapolation half-widths
};

// Lower/upper indices: the limits of log rho(x)/log x at 0 and infinity,
// extrapolated from the tail decades and cross-checked against the grid
// sup/inf form.  Throws std::invalid_argument for non-regular input and
// numeric_error when the two estimates disagree.
IndexPair index_pair(const SubmultiplicativeSample& s);

// --------------------------------------------------------------------------
// Ratio envelopes of a weight around a point t of the curve.
//
// section_ratio:  x -> sup over R of  max{w on |tau-t|=xR} / min{w on |tau-t|=R}
// section_ratio_limit: the same with R -> 0 (tail-extrapolated limsup).
// mean_ratio / mean_ratio_limit: the same built from exponentials of
// portion-averaged log w instead of section extrema.

SubmultiplicativeSample section_ratio(const CurveModel& curve, cplx t, const Weight& w);
SubmultiplicativeSample section_ratio_limit(const CurveModel& curve, cplx t,
                                            const Weight& w);
// Low-level entry: log w given per curve sample (resolution+1 values,
// non-finite at singular samples).
SubmultiplicativeSample section_ratio_from_samples(const CurveModel& curve, int t_index,
                                                   const std::vector<double>& log_w,
                                                   bool limit_form);

// Ratio of exponentials of portion-averaged log w at two radii.
double portion_mean_ratio(const CurveModel& curve, const Weight& w, cplx t, double r1,
                          double r2);

SubmultiplicativeSample mean_ratio(const CurveModel& curve, cplx t, const Weight& w,
                                   bool check_integrable = true);
SubmultiplicativeSample mean_ratio_limit(const CurveModel& curve, cplx t,
                                         const Weight& w, bool check_integrable = true);
SubmultiplicativeSample mean_ratio_from_samples(const CurveModel& curve, int t_index,
                                                const std::vector<double>& log_w,
                                                bool limit_form);

// Spirality of the curve at t: index pair of the section-ratio limit of the
// geometry weight eta_t.  Validates the scaling law for eta_t^x,
// x in {-2,-1,2}, within max(5e-3, 20*ci).
std::pair<double, double> spirality(const CurveModel& curve, cplx t);

// Smallest grid constants (C1, C2) bounding psi(t)/psi(tau) by the power
// envelopes |.|^{beta+eps} (t outside omega(t0,delta), tau inside) and
// |.|^{alpha-eps} (roles swapped).
std::pair<double, double> envelope_constants(const CurveModel& curve, cplx t0,
                                             const Weight& psi, double eps,
                                             double delta);

}  // namespace sio
