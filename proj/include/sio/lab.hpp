#pragma once
// Numerical corroboration harness: principal-value Cauchy quadrature, the
// maximal function, finite sections of aP + bQ on the unit circle in the
// Fourier basis, smallest-singular-value trends, and the fixed agreement
// suite comparing trend classifications against the Fredholm verdicts.

#include <vector>

#include <Eigen/Dense>

#include "sio/curve.hpp"
#include "sio/fredholm.hpp"

namespace sio {

// (1/pi i) PV integral of f(tau)/(tau - t) over the curve, from samples of f
// at the curve nodes (resolution + 1 values).  Quadrature subtracts the
// singularity and treats the remaining pure-kernel principal value by
// symmetric node exclusion, extrapolated polynomially to zero window size.
// Two window families are evaluated -- symmetric in arclength and symmetric
// in chord distance -- and must agree within tol, as must the extrapolation
// ladder itself; violations throw numeric_error.  A jump of f at t (failed
// smoothness precondition) is detected and rejected.
cplx pv_cauchy(const CurveModel& curve, const std::vector<cplx>& f, cplx t,
               double tol = 1e-5);

// sup over the radius grid of the portion-averaged |f| on {|tau - t| <= R};
// non-finite samples (integrable singularities of log f) are skipped.
double maximal_function(const CurveModel& curve, const std::vector<cplx>& f,
                        cplx t, const std::vector<double>& radii);

// Compression of aP + bQ to the Fourier modes |n| <= N on the unit circle,
// discretized in the weighted frame: the similarity w(aP+bQ)w^{-1} with
// w(theta) = |1 - e^{i theta}|^mu, mu = lambda + 1/p - 1/2, sampled on the
// 8N-point midpoint grid (mode split: nonnegative frequencies to P).  Row
// and column r correspond to the mode n = r - N.
struct FiniteSection {
  int N = 0;
  double p = 2;
  double lambda = 0;
  Eigen::MatrixXcd matrix;
};

// Throws std::invalid_argument for N outside [1, 2048] (cost guard), p <= 1,
// or symbols sampled on different grids.
FiniteSection finite_section(const PCSymbol& a, const PCSymbol& b, int N,
                             double lambda, double p);

// Smallest singular value by inverse power iteration on the normal equations
// (two triangular solves per step from one LU), fixed seed, 200-iteration
// cap, 1e-10 residual target.
double smallest_singular_value(const Eigen::MatrixXcd& m);

enum class TrendClass { Plateau, Decay, Inconclusive };

const char* to_string(TrendClass c);

struct SigmaTrend {
  std::vector<int> Ns;
  std::vector<double> sigma;
  double slope_per_doubling = 0;  // least-squares slope of log2 sigma vs log2 N
  double tail_ratio = 0;          // max/min over the last three values
  double limit_fraction = 1;      // Aitken-extrapolated tail limit / last value
  TrendClass classification = TrendClass::Inconclusive;
};

// Smallest singular value per truncation order.  Decay when the log-linear
// slope falls below -0.5 per doubling or the last value drops under 1e-3;
// Plateau when the last three values lie within 20% of each other, stay
// above 1e-3, and the Aitken-extrapolated tail limit remains a healthy
// fraction of the last value.  A flat-looking tail whose extrapolated limit
// collapses is classified Decay: critically degenerate symbols erode the
// smallest singular value at a rate the raw slope cannot resolve at these
// orders.  Ambiguous trends are Inconclusive.  Requires >= 4 increasing
// orders.
SigmaTrend sigma_min_trend(const PCSymbol& a, const PCSymbol& b,
                           std::vector<int> Ns, double lambda, double p);

// Fixed 12-case agreement protocol on the circle: three jump pairs at t = 1,
// p in {2, 3}, lambda in {0, 0.25}.  Each case runs decide_fredholm on
// L^p(|tau-1|^lambda) and sigma_min_trend on the same data; `agrees` records
// Plateau <-> Yes, Decay <-> No, and is vacuously true on Borderline.
struct AgreementCase {
  cplx before{}, after{};
  double p = 2, lambda = 0;
  Verdict fredholm = Verdict::Borderline;
  TrendClass trend = TrendClass::Inconclusive;
  SigmaTrend data;
  bool agrees = false;
};

std::vector<AgreementCase> agreement_suite(const CurveModel& circle,
                                           const std::vector<int>& Ns = {32, 64,
                                                                         128,
                                                                         256});

}  // namespace sio
