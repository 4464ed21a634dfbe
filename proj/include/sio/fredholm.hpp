#pragma once
// Decision layer: boundedness of the maximal operator and of the singular
// integral operator on a weighted variable-exponent space, indicator
// profiles, leaves, piecewise-continuous symbol nonsingularity, and the
// Fredholm verdict for aP + bQ.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sio/curve.hpp"
#include "sio/indices.hpp"
#include "sio/spaces.hpp"

namespace sio {

// ---------------------------------------------------------------------------
// The space triple (curve, exponent, weight).

struct SpaceSpec {
  CurveModel curve;
  ExponentField exponent;
  Weight weight;
};

// Throws std::invalid_argument when the exponent fails the log-Hoelder
// regularity certificate or a weight factor's singularity is off the curve.
void validate_space(const SpaceSpec& space);

// ---------------------------------------------------------------------------
// Three-valued verdicts: strict inequalities decided numerically get an
// explicit Borderline outcome whenever a margin is within tolerance.

enum class Verdict { Yes, No, Borderline };

const char* to_string(Verdict v);

// Margin bookkeeping for one weight singularity.
struct PointCheck {
  cplx t{};
  int t_index = 0;
  double inv_p = 0;          // 1 / p(t)
  double alpha = 0, beta = 0;  // indices of the local factor bundle
  double lower = 0;          // 1/p + alpha   (must exceed 0)
  double upper = 0;          // 1/p + beta    (must stay below 1)
};

struct BoundednessReport {
  Verdict verdict = Verdict::No;
  std::string reason;
  std::vector<PointCheck> points;
  double tolerance = 0;
};

// Maximal-operator boundedness: Yes iff 0 < 1/p(t_j) + alpha_j and
// 1/p(t_j) + beta_j < 1 at every weight singularity, with margins beyond
// tolerance; Borderline when some margin is within tolerance.
BoundednessReport decide_maximal_bounded(const SpaceSpec& space, double tol = 1e-3);

// Singular-integral-operator boundedness: additionally requires the curve to
// pass the Carleson test.  On closed (Jordan) curves the index conditions are
// an exact characterization; on open curves the boundary case is genuinely
// undecidable and reported Borderline.
BoundednessReport decide_S_bounded(const SpaceSpec& space, double tol = 1e-3);

// ---------------------------------------------------------------------------
// Indicator profile: per-x index pairs of the section-limit ratios of
// eta_t^x * psi_t, where psi_t is the bundle of weight factors singular at t
// (empty bundle: eta_t^x alone).

struct IndicatorProfile {
  cplx t{};
  int t_index = 0;
  double inv_p = 0;
  std::vector<double> x_grid;
  std::vector<double> alpha_star, beta_star;
  std::vector<double> alpha_ci, beta_ci;

  // Asymptote lines fitted on the outer quarter of the grid on each side.
  double alpha_slope_minus = 0, alpha_icept_minus = 0;
  double alpha_slope_plus = 0, alpha_icept_plus = 0;
  double beta_slope_minus = 0, beta_icept_minus = 0;
  double beta_slope_plus = 0, beta_icept_plus = 0;

  // Piecewise-linear on the grid, asymptote lines beyond it.
  double alpha_at(double x) const;
  double beta_at(double x) const;
};

// Throws numeric_error("indicator profile: resolution or regularity failure")
// when the computed profile violates the shape laws (ordering, concavity /
// convexity, asymptote slopes vs curve spirality) beyond tolerance.
// An empty x_grid selects the default grid -4..4 in steps of 0.25.
IndicatorProfile indicator_profile(const SpaceSpec& space, cplx t,
                                   std::vector<double> x_grid = {});

// ---------------------------------------------------------------------------
// Moebius transform and leaves.

// M(zeta) = (z2 zeta - z1) / (zeta - 1); maps 0 to z1 and infinity to z2.
// Throws std::invalid_argument at the pole zeta = 1.
cplx mobius(cplx z1, cplx z2, cplx zeta);

class Leaf {
 public:
  cplx z1() const { return z1_; }
  cplx z2() const { return z2_; }
  bool degenerate() const { return degenerate_; }

  // Boundary samples: images of x + i(1/p + alpha*(x)) and
  // x + i(1/p + beta*(x)) under zeta -> M(e^{2 pi zeta}).
  const std::vector<cplx>& lower_boundary() const { return lower_; }
  const std::vector<cplx>& upper_boundary() const { return upper_; }
  const std::vector<double>& boundary_x() const { return xs_; }

  // Membership (z1 and z2 always belong).  tol expands the index band, in
  // index units; it also covers bands of zero height.
  bool contains(cplx z, double tol = 1e-9) const;

  // 0 when contains(origin); otherwise the minimum over boundary samples
  // and endpoints of the distance to the origin.
  double origin_distance(double tol = 1e-9) const;

 private:
  friend Leaf leaf(cplx, cplx, double, const IndicatorProfile&);
  cplx z1_{}, z2_{};
  bool degenerate_ = false;
  double inv_p_ = 0;
  IndicatorProfile profile_;
  std::vector<double> xs_;
  std::vector<cplx> lower_, upper_;
};

// The leaf between z1 and z2 determined by (p(t), alpha*, beta*).  The
// boundary grid starts at x in [-4, 4] and is extended automatically until
// both boundary ends land within 1e-6 of z1 and z2.
Leaf leaf(cplx z1, cplx z2, double p_t, const IndicatorProfile& profile);

// ---------------------------------------------------------------------------
// Piecewise continuous symbols on the curve.  Sampled on the curve grid with
// an explicit jump list; the sample at a jump holds the forward (t+0) limit.
// "before" is the limit approached along the orientation (t-0), "after" the
// limit from the opposite side (t+0).

class PCSymbol {
 public:
  struct Jump {
    int sample = 0;
    cplx t{};  // curve point of the discontinuity
    cplx before{}, after{};
  };

  static PCSymbol constant(const CurveModel& curve, cplx value);
  static PCSymbol continuous(const CurveModel& curve,
                             const std::function<cplx(double)>& f);
  // Jump at t; elsewhere the symbol follows the geometric interpolation
  // after * exp(u Log(before/after)), u = arclength fraction from t, whose
  // range is a logarithmic spiral arc avoiding the origin.
  static PCSymbol single_jump(const CurveModel& curve, cplx t, cplx before,
                              cplx after);

  const std::vector<cplx>& samples() const { return values_; }
  const std::vector<Jump>& jumps() const { return jumps_; }

  cplx before_at(int sample) const;  // t-0 limit at a sample
  cplx after_at(int sample) const;   // t+0 limit at a sample

  double inf_abs() const;  // over samples and one-sided limits
  // Jump-merging pointwise operations (factors must share the curve grid).
  PCSymbol operator*(const PCSymbol& rhs) const;
  PCSymbol operator/(const PCSymbol& rhs) const;

 private:
  static PCSymbol combined(const PCSymbol& a, const PCSymbol& b, bool divide);
  std::vector<cplx> values_;
  std::vector<Jump> jumps_;  // sorted by sample, unique
};

// ---------------------------------------------------------------------------
// Local data at a jump and the Fredholm verdict.

// gamma with Re gamma = arg(before/after) / 2pi (principal branch) and
// Im gamma = -log|before/after| / 2pi.  Throws on a vanishing limit.
cplx gamma_local(cplx before, cplx after);
cplx gamma_local(const PCSymbol& a, cplx t);

// Uniform grid on [0, 1].
std::vector<double> theta_grid(int points = 101);

// The integer k with 0 < 1/p + k - Re gamma + theta a* + (1-theta) b* < 1
// for all theta in the grid, where a* = alpha*(-Im gamma) and
// b* = beta*(-Im gamma); nullopt when the band meets the integers.
std::optional<int> select_kt(const IndicatorProfile& profile, cplx gamma,
                             const std::vector<double>& thetas = theta_grid());

// The weight factor |(tau - t)^gamma|.
WeightFactor phi_weight(cplx t, cplx gamma);

// Boundedness of the singular integral operator after multiplying the space
// weight by |(tau - t)^(k - gamma)| (the local Wiener-Hopf weight twist).
BoundednessReport local_S_bounded(const SpaceSpec& space, cplx t, cplx gamma,
                                  int k, double tol = 1e-3);

struct JumpDiagnostic {
  cplx t{};
  int sample = 0;
  cplx before{}, after{};
  cplx gamma{};
  bool leaf_contains_origin = false;
  double leaf_distance = 0;        // distance of the leaf to the origin
  std::vector<double> criterion;   // E(theta) over the theta grid
  double criterion_gap = 0;        // min distance of E(theta) to the integers
  std::optional<int> k;            // admissible integer shift, if any
};

struct NonsingularityReport {
  bool nonsingular = false;
  double range_distance = 0;  // min |value| over the essential range
  std::vector<JumpDiagnostic> jumps;
  std::optional<cplx> witness;  // offending range value or jump location
  std::string reason;
};

NonsingularityReport nonsingular(const PCSymbol& c, const SpaceSpec& space,
                                 double tol = 1e-3);

struct FredholmReport {
  Verdict verdict = Verdict::No;
  std::string reason;
  double inf_abs_b = 0;
  NonsingularityReport quotient;  // diagnostics for a / b
  std::optional<cplx> witness;
};

// Fredholmness of aP + bQ.  Requires decide_S_bounded(space) == Yes (throws
// std::invalid_argument "operator not defined: S unbounded" otherwise).
// Verdict Yes iff inf|b| and the quotient's nonsingularity margins clear the
// tolerance; Borderline when a margin is within tolerance of the boundary.
FredholmReport decide_fredholm(const PCSymbol& a, const PCSymbol& b,
                               const SpaceSpec& space, double tol = 1e-3);

}  // namespace sio
