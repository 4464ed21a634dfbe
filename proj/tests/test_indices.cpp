#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "sio/curve.hpp"
#include "sio/indices.hpp"
#include "sio/spaces.hpp"

using namespace sio;

namespace {

// Radial weight v(r) = exp(slope*log r + amp*sin(omega*log r + phase)) given
// as a log-log table; both indices equal `slope`.
WeightFactor oscillating_factor(cplx t0, double slope, double amp, double omega,
                                double phase) {
  std::vector<double> rr, vv;
  const double lr_lo = std::log(1e-5), lr_hi = std::log(4.0);
  for (int i = 0; i <= 600; ++i) {
    const double lr = lr_lo + (lr_hi - lr_lo) * i / 600.0;
    rr.push_back(std::exp(lr));
    vv.push_back(std::exp(slope * lr + amp * std::sin(omega * lr + phase)));
  }
  return WeightFactor::radial_oscillating(t0, rr, vv);
}

IndexPair indices_of(const SubmultiplicativeSample& s) { return index_pair(s); }

}  // namespace

TEST_CASE("index extraction from synthetic submultiplicative functions") {
  // Pure power: exact.
  auto pw = SubmultiplicativeSample::from_function(
      [](double x) { return std::pow(x, 0.7); });
  auto ip = indices_of(pw);
  CHECK(ip.alpha == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(ip.beta == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(check_submultiplicative(pw));

  // Distinct indices: x^0.3 below 1, x^1.2 above.
  auto two = SubmultiplicativeSample::from_function(
      [](double x) { return x < 1 ? std::pow(x, 0.3) : std::pow(x, 1.2); });
  ip = indices_of(two);
  CHECK(ip.alpha == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(ip.beta == doctest::Approx(1.2).epsilon(1e-8));
  CHECK(ip.alpha <= ip.beta);
  CHECK(check_submultiplicative(two));

  // Logarithmic growth: both indices vanish.
  auto lg = SubmultiplicativeSample::from_function(
      [](double x) { return 1.0 + std::abs(std::log(x)); }, 1e-8, 1e8);
  ip = indices_of(lg);
  CHECK(std::abs(ip.alpha) < 1e-3);
  CHECK(std::abs(ip.beta) < 1e-3);
  CHECK(check_submultiplicative(lg));

  // exp(-|log x|) fails the submultiplicative grid check.
  auto bad = SubmultiplicativeSample::from_function(
      [](double x) { return std::exp(-std::abs(std::log(x))); });
  CHECK(!check_submultiplicative(bad));
}

TEST_CASE("index extraction rejects bad input") {
  // Unbounded near x = 1: not regular.
  auto pole = SubmultiplicativeSample::from_function([](double x) {
    const double l = std::abs(std::log(x));
    return l < 1e-3 ? std::numeric_limits<double>::infinity() : 1.0 / l;
  });
  CHECK(!pole.regular);
  CHECK_THROWS_AS(index_pair(pole), std::invalid_argument);

  // Only one side of x = 1 present.
  auto half = SubmultiplicativeSample::from_function(
      [](double x) { return std::pow(x, 0.5); }, 1e-6, 0.5);
  CHECK_THROWS_AS(index_pair(half), std::invalid_argument);
}

TEST_CASE("section ratios recover power weights on the circle") {
  const auto circle = CurveModel::unit_circle();
  const cplx t{1.0, 0.0};

  for (double lam : {-0.4, 0.3}) {
    const Weight w({WeightFactor::power(t, lam)});
    const auto lim = section_ratio_limit(circle, t, w);
    const auto ipl = index_pair(lim);
    CHECK(ipl.alpha == doctest::Approx(lam).epsilon(1e-6));
    CHECK(ipl.beta == doctest::Approx(lam).epsilon(1e-6));

    const auto sup = section_ratio(circle, t, w);
    const auto ips = index_pair(sup);
    CHECK(std::abs(ips.alpha - ipl.alpha) < 1e-6);
    CHECK(std::abs(ips.beta - ipl.beta) < 1e-6);
    CHECK(check_submultiplicative(sup));
    CHECK(check_submultiplicative(lim));

    // rho(x) * rho(1/x) >= 1 pointwise on the grid.
    const size_t n = sup.x.size();
    for (size_t i = 0; i < n; ++i) {
      const size_t j = n - 1 - i;
      if (!std::isfinite(sup.log_value[i]) || !std::isfinite(sup.log_value[j])) continue;
      CHECK(sup.log_value[i] + sup.log_value[j] >= -1e-9);
    }
  }

  // The trivial weight has unit ratios everywhere.
  const auto one = section_ratio(circle, t, Weight::one());
  for (size_t i = 0; i < one.x.size(); ++i)
    if (std::isfinite(one.log_value[i])) CHECK(std::abs(one.log_value[i]) < 1e-12);

  // Extreme grid points have no usable radius pairs and are annotated.
  const auto lim = section_ratio_limit(circle, t, Weight({WeightFactor::power(t, 0.3)}));
  CHECK(std::isnan(lim.log_value.front()));
  CHECK(std::isnan(lim.log_value.back()));
  CHECK(!lim.dropped.empty());
}

TEST_CASE("section ratios recover power weights on a segment endpoint") {
  const auto seg = CurveModel::segment(cplx{0, 0}, cplx{2, 0});
  const cplx t{0, 0};
  for (double lam : {-0.4, 0.0, 0.3, 0.7}) {
    const auto ip =
        index_pair(section_ratio_limit(seg, t, Weight({WeightFactor::power(t, lam)})));
    CHECK(std::abs(ip.alpha - lam) < 1e-3);
    CHECK(std::abs(ip.beta - lam) < 1e-3);
  }
}

TEST_CASE("spirality: circle, spiral arms, segment endpoint") {
  const auto circle = CurveModel::unit_circle();
  auto [ac, bc] = spirality(circle, cplx{1, 0});
  CHECK(std::abs(ac) < 1e-6);
  CHECK(std::abs(bc) < 1e-6);

  for (double delta : {0.5, 2.0}) {
    const auto sp = CurveModel::log_spiral_attached(delta);
    auto [a, b] = spirality(sp, cplx{1, 0});
    CHECK(std::abs(a - delta) < 1e-2);
    CHECK(std::abs(b - delta) < 1e-2);
  }

  const auto seg = CurveModel::segment(cplx{0, 0}, cplx{2, 0});
  auto [as, bs] = spirality(seg, cplx{0, 0});
  CHECK(std::abs(as) < 1e-6);
  CHECK(std::abs(bs) < 1e-6);

  // The geometry weight of a straight segment is trivial.
  const auto we = section_ratio(seg, cplx{0, 0},
                                Weight({WeightFactor::eta_power(cplx{0, 0}, 1.0)}));
  for (size_t i = 0; i < we.x.size(); ++i)
    if (std::isfinite(we.log_value[i])) CHECK(std::abs(we.log_value[i]) < 1e-9);
}

TEST_CASE("portion mean ratios: identities and power recovery") {
  const auto circle = CurveModel::unit_circle();
  const cplx t{1, 0};

  // Constant weight: unit ratio at any radius pair.
  CHECK(portion_mean_ratio(circle, Weight::one(), t, 0.7, 0.11) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const Weight w({WeightFactor::power(t, 0.35)});
  const double h12 = portion_mean_ratio(circle, w, t, 0.08, 0.4);
  const double h21 = portion_mean_ratio(circle, w, t, 0.4, 0.08);
  CHECK(h12 * h21 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(portion_mean_ratio(circle, w, t, 0.2, 0.2) == doctest::Approx(1.0).epsilon(1e-12));

  // Mean-ratio limit of a power weight.
  const auto ip = index_pair(mean_ratio_limit(circle, t, w));
  CHECK(std::abs(ip.alpha - 0.35) < 1e-3);
  CHECK(std::abs(ip.beta - 0.35) < 1e-3);

  // Factors singular elsewhere do not move the local indices.
  const Weight prod({WeightFactor::power(t, 0.4),
                     WeightFactor::power(cplx{-1, 0}, -0.3)});
  const auto ipp = index_pair(mean_ratio_limit(circle, t, prod));
  CHECK(std::abs(ipp.alpha - 0.4) < 5e-3);
  CHECK(std::abs(ipp.beta - 0.4) < 5e-3);
}

TEST_CASE("mean ratios reject weights with diverging log oscillation") {
  const auto circle = CurveModel::unit_circle();
  const cplx t{1, 0};
  // log v(r) = 0.15 (log r)^3: oscillation over shrinking portions diverges.
  std::vector<double> rr, vv;
  for (int i = 0; i <= 500; ++i) {
    const double lr = std::log(1e-5) + (std::log(4.0) - std::log(1e-5)) * i / 500.0;
    rr.push_back(std::exp(lr));
    vv.push_back(std::exp(0.15 * lr * lr * lr));
  }
  const Weight w({WeightFactor::radial_oscillating(t, rr, vv)});
  CHECK_THROWS_AS(mean_ratio_limit(circle, t, w), numeric_error);
}

TEST_CASE("section and mean ratio limits agree on indices") {
  const auto circle = CurveModel::unit_circle();
  const cplx t{1, 0};

  const Weight pw({WeightFactor::power(t, 0.4)});
  const auto a = index_pair(section_ratio_limit(circle, t, pw));
  const auto b = index_pair(mean_ratio_limit(circle, t, pw));
  CHECK(std::abs(a.alpha - b.alpha) < 5e-3);
  CHECK(std::abs(a.beta - b.beta) < 5e-3);

  const Weight osc({oscillating_factor(t, 0.25, 0.04, 4.7, 0.4)});
  const auto c = index_pair(section_ratio_limit(circle, t, osc));
  const auto d = index_pair(mean_ratio_limit(circle, t, osc));
  CHECK(std::abs(c.alpha - d.alpha) < 4e-2);
  CHECK(std::abs(c.beta - d.beta) < 4e-2);
  CHECK(std::abs(c.alpha - 0.25) < 4e-2);
  CHECK(std::abs(c.beta - 0.25) < 4e-2);
}

TEST_CASE("index scaling under powers of a weight") {
  const auto circle = CurveModel::unit_circle();
  const cplx t{1, 0};

  auto scaled_factor = [&](const WeightFactor& f, double s) {
    if (f.kind == WeightFactor::Kind::Power)
      return WeightFactor::power(f.t0, f.exponent * s);
    std::vector<double> rr(f.table_log_r.size()), vv(f.table_log_r.size());
    for (size_t i = 0; i < rr.size(); ++i) {
      rr[i] = std::exp(f.table_log_r[i]);
      vv[i] = std::exp(s * f.table_log_v[i]);
    }
    return WeightFactor::radial_oscillating(f.t0, rr, vv);
  };

  for (const WeightFactor& base :
       {WeightFactor::power(t, 0.5), oscillating_factor(t, 0.2, 0.08, 0.9, 1.1)}) {
    const auto ip = index_pair(section_ratio(circle, t, Weight({base})));
    for (double s : {-2.0, -0.5, 0.5, 3.0}) {
      const auto ips =
          index_pair(section_ratio(circle, t, Weight({scaled_factor(base, s)})));
      const double want_a = s >= 0 ? s * ip.alpha : s * ip.beta;
      const double want_b = s >= 0 ? s * ip.beta : s * ip.alpha;
      CHECK(std::abs(ips.alpha - want_a) < 2e-3);
      CHECK(std::abs(ips.beta - want_b) < 2e-3);
    }
  }
}

TEST_CASE("index bounds for products of weights") {
  const auto circle = CurveModel::unit_circle();
  const cplx t{1, 0};
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> lam(-0.6, 0.6), amp(0.03, 0.1),
      om(0.5, 1.4), ph(0.0, 6.28);

  auto random_factor = [&](bool allow_osc) {
    if (allow_osc && (rng() & 1u))
      return oscillating_factor(t, lam(rng), amp(rng), om(rng), ph(rng));
    return WeightFactor::power(t, lam(rng));
  };

  for (int trial = 0; trial < 6; ++trial) {
    const WeightFactor f1 = random_factor(trial > 1);
    const WeightFactor f2 = random_factor(trial > 1);
    const Weight w1({f1}), w2({f2}), w12({f1, f2});

    const auto s1 = section_ratio(circle, t, w1);
    const auto s2 = section_ratio(circle, t, w2);
    const auto s12 = section_ratio(circle, t, w12);

    // Pointwise: the product envelope never exceeds the product of envelopes.
    for (size_t i = 0; i < s12.x.size(); ++i) {
      if (!std::isfinite(s12.log_value[i]) || !std::isfinite(s1.log_value[i]) ||
          !std::isfinite(s2.log_value[i]))
        continue;
      CHECK(s12.log_value[i] <= s1.log_value[i] + s2.log_value[i] + 1e-9);
    }

    const auto i1 = index_pair(s1);
    const auto i2 = index_pair(s2);
    const auto i12 = index_pair(s12);
    const bool any_osc = f1.kind != WeightFactor::Kind::Power ||
                         f2.kind != WeightFactor::Kind::Power;
    const double tol = any_osc ? 4e-2 : 2e-3;

    CHECK(i1.alpha + i2.alpha <= i12.alpha + tol);
    CHECK(i12.alpha <=
          std::min(i1.alpha + i2.beta, i1.beta + i2.alpha) + tol);
    CHECK(i12.beta <= i1.beta + i2.beta + tol);
    CHECK(std::max(i1.alpha + i2.beta, i1.beta + i2.alpha) <= i12.beta + tol);
    CHECK(i12.alpha <= i12.beta + 1e-12);
  }
}

TEST_CASE("mean-ratio indices of a product against section-ratio bounds") {
  const auto circle = CurveModel::unit_circle();
  const cplx t{1, 0};
  std::mt19937 rng(77001u);
  std::uniform_real_distribution<double> lam(-0.5, 0.5), amp(0.015, 0.03),
      om(3.5, 6.0), ph(0.0, 6.28);

  for (int trial = 0; trial < 4; ++trial) {
    const WeightFactor fw = WeightFactor::power(t, lam(rng));
    const WeightFactor fp = trial % 2 == 0
                                ? WeightFactor::power(t, lam(rng))
                                : oscillating_factor(t, lam(rng), amp(rng), om(rng),
                                                     ph(rng));
    const auto vw = index_pair(mean_ratio_limit(circle, t, Weight({fw})));
    const auto wp = index_pair(section_ratio(circle, t, Weight({fp})));
    const auto vwp = index_pair(mean_ratio_limit(circle, t, Weight({fw, fp})));
    const double tol = fp.kind == WeightFactor::Kind::Power ? 5e-3 : 7.5e-2;

    CHECK(vw.alpha + wp.alpha <= vwp.alpha + tol);
    CHECK(vwp.alpha <= std::min(vw.alpha + wp.beta, vw.beta + wp.alpha) + tol);
    CHECK(vw.beta + wp.beta >= vwp.beta - tol);
    CHECK(vwp.beta >= std::max(vw.alpha + wp.beta, vw.beta + wp.alpha) - tol);
  }
}

TEST_CASE("power envelope constants on the circle") {
  const auto circle = CurveModel::unit_circle();
  const cplx t{1, 0};
  const Weight w({WeightFactor::power(t, 0.5)});
  auto [c1, c2] = envelope_constants(circle, t, w, 0.1, 0.5);
  CHECK(c1 >= 1.0 - 1e-9);
  CHECK(c2 >= 1.0 - 1e-9);
  CHECK(c1 <= 10.0);
  CHECK(c2 <= 10.0);
}

TEST_CASE("spirality validation uses the geometry scaling law") {
  // Sanity companion: the two arms of a log spiral give matching index pairs
  // for the inverse geometry weight.
  const auto sp = CurveModel::log_spiral_attached(1.0);
  const cplx t{1, 0};
  const auto ip = index_pair(
      section_ratio_limit(sp, t, Weight({WeightFactor::eta_power(t, -1.0)})));
  CHECK(std::abs(ip.alpha + 1.0) < 2e-2);
  CHECK(std::abs(ip.beta + 1.0) < 2e-2);
}
