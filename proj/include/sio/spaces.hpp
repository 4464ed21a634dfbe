#pragma once
// Variable exponents, pointwise weights, the associated norm machinery
// (modular + norm by bisection), mean-oscillation-at-a-point, Muckenhoupt
// constants, and weight equivalence checks.

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "sio/curve.hpp"

namespace sio {

// Exponent p(.) as a function of arclength, piecewise linear between nodes,
// clamped outside the node range.  Values must stay strictly above 1.
class ExponentField {
 public:
  static ExponentField constant(double p);
  static ExponentField from_samples(std::vector<double> s_nodes,
                                    std::vector<double> values);

  double operator()(double s) const;
  double min_value() const { return lo_; }
  double max_value() const { return hi_; }
  bool is_constant() const { return s_.empty(); }
  // Conjugate exponent q with 1/p + 1/q = 1 at the same location.
  double conjugate(double s) const { double p = (*this)(s); return p / (p - 1); }

 private:
  double lo_ = 0, hi_ = 0, const_p_ = 0;
  std::vector<double> s_, v_;
};

// One multiplicative weight factor with a single singularity point t0.
struct WeightFactor {
  enum class Kind {
    Power,              // |tau - t0|^exponent
    RadialOscillating,  // table(|tau - t0|), log-linear in radius
    EtaPower,           // exp(-exponent * arg-branch(tau - t0))
    PhiGamma            // |tau-t0|^{Re gamma} * exp(-Im gamma * arg-branch)
  };
  Kind kind = Kind::Power;
  cplx t0{};
  double exponent = 0;  // Power: lambda; EtaPower: x
  cplx gamma{};
  std::vector<double> table_log_r, table_log_v;  // RadialOscillating, log-log

  static WeightFactor power(cplx t0, double lambda);
  static WeightFactor eta_power(cplx t0, double x);
  static WeightFactor phi_gamma(cplx t0, cplx gamma);
  static WeightFactor radial_oscillating(cplx t0, const std::vector<double>& radii,
                                         const std::vector<double>& values);
};

// Product of factors with pairwise distinct singularity points.
struct Weight {
  std::vector<WeightFactor> factors;

  Weight() = default;
  explicit Weight(std::vector<WeightFactor> f);
  static Weight one() { return Weight(); }
  // Product; factors sharing a singularity point are kept side by side.
  Weight operator*(const Weight& other) const;
};

// The weight of the curve geometry itself at t: eta_t = e^{-arg(tau - t)}.
WeightFactor eta(const CurveModel& curve, cplx t);

// A Weight bound to a curve: log-values at samples, argument branches
// resolved, singular samples identified.
class LocalWeight {
 public:
  LocalWeight(const CurveModel& curve, Weight w);

  const CurveModel& curve() const { return *curve_; }
  const Weight& weight() const { return w_; }
  // log w(tau(s)); +-inf only in the limit, never evaluated at a singular
  // sample (use is_singular_sample to skip those).
  double log_at(double s) const;
  double log_at_sample(int i) const { return log_samples_[i]; }
  bool is_singular_sample(int i) const;
  const std::vector<int>& singular_samples() const { return sing_; }

 private:
  const CurveModel* curve_;
  Weight w_;
  std::vector<std::shared_ptr<const ArgBranch>> branches_;  // per factor (or null)
  std::vector<double> log_samples_;
  std::vector<int> sing_;
};

// --------------------------------------------------------------------------
// Exponent regularity

struct DiniCertificate {
  bool certified = false;
  double c_value = 0;      // smallest C with |p(tau)-p(t)| <= -C/log|tau-t|
  double growth = 0;       // instability of C under grid refinement
  double worst_s = 0, worst_t = 0;  // arclengths of the extremal pair
};

DiniCertificate dini_lipschitz_certify(const ExponentField& p, const CurveModel& curve);

double p_star(const ExponentField& p, const CurveModel& curve);
double p_star(const ExponentField& p, const CurveModel& curve, const ArcPortion& region);

// --------------------------------------------------------------------------
// Modular and norm

// integral over the curve of |f(tau) w(tau) / lambda|^{p(tau)} |dtau|,
// trapezoid rule with singular samples handled one-sidedly.
double modular(const CurveModel& curve, const std::vector<cplx>& f,
               const ExponentField& p, const LocalWeight& w, double lambda);

// inf{lambda > 0 : modular <= 1} by bisection (relative 1e-10).  Throws
// numeric_error("not in space") when the modular is refinement-unstable.
double nakano_norm(const CurveModel& curve, const std::vector<cplx>& f,
                   const ExponentField& p, const LocalWeight& w);

// --------------------------------------------------------------------------
// Oscillation and Muckenhoupt machinery

struct BmoResult {
  double value = 0;
  bool diverged = false;  // sup keeps growing under radius-floor refinement
};

BmoResult bmo_at(const CurveModel& curve, const std::vector<double>& f, cplx t);

struct ApResult {
  double value = 0;
  bool infinite = false;
  cplx argmax_t{};
  double argmax_r = 0;
};

ApResult ap_constant(const Weight& w, double p_const, const CurveModel& curve);

struct EquivalenceResult {
  bool equivalent = false;
  double ratio_lo = 0, ratio_hi = 0;  // range of w1/w2 over samples
};

// General form: log-weights as functions of arclength (non-finite values are
// treated as singularities and skipped).
EquivalenceResult weights_equivalent(const std::function<double(double)>& log_w1,
                                     const std::function<double(double)>& log_w2,
                                     const CurveModel& curve);
EquivalenceResult weights_equivalent(const Weight& w1, const Weight& w2,
                                     const CurveModel& curve);

}  // namespace sio
