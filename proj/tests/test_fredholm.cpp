#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sio/fredholm.hpp"

using namespace sio;

namespace {

SpaceSpec circle_space(double p, Weight w = Weight::one()) {
  return {CurveModel::unit_circle(), ExponentField::constant(p), std::move(w)};
}

Weight power_weight(cplx t0, double lambda) {
  return Weight({WeightFactor::power(t0, lambda)});
}

}  // namespace

TEST_CASE("space validation and verdict strings") {
  CHECK(std::string(to_string(Verdict::Yes)) == "Yes");
  CHECK(std::string(to_string(Verdict::No)) == "No");
  CHECK(std::string(to_string(Verdict::Borderline)) == "Borderline");

  CHECK_NOTHROW(validate_space(circle_space(2.0, power_weight({1, 0}, 0.25))));
  CHECK_THROWS_AS(validate_space(circle_space(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(
      validate_space(circle_space(2.0, power_weight({3, 0}, 0.25))),
      std::invalid_argument);
}

TEST_CASE("maximal operator boundedness: power weights on the circle") {
  // Window for |tau-1|^lambda on L^p: -1/p < lambda < 1 - 1/p.
  SUBCASE("inside the window") {
    const auto rep =
        decide_maximal_bounded(circle_space(2.0, power_weight({1, 0}, 0.25)));
    CHECK(rep.verdict == Verdict::Yes);
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.points[0].inv_p == doctest::Approx(0.5));
    CHECK(rep.points[0].alpha == doctest::Approx(0.25).epsilon(0.01));
    CHECK(rep.points[0].beta == doctest::Approx(0.25).epsilon(0.01));
    CHECK(rep.points[0].lower > 0.2);
    CHECK(rep.points[0].upper < 0.8);
  }
  SUBCASE("above the window") {
    const auto rep =
        decide_maximal_bounded(circle_space(2.0, power_weight({1, 0}, 0.6)));
    CHECK(rep.verdict == Verdict::No);
  }
  SUBCASE("below the window") {
    const auto rep =
        decide_maximal_bounded(circle_space(2.0, power_weight({1, 0}, -0.55)));
    CHECK(rep.verdict == Verdict::No);
  }
  SUBCASE("on the boundary") {
    const auto rep =
        decide_maximal_bounded(circle_space(2.0, power_weight({1, 0}, 0.5)));
    CHECK(rep.verdict == Verdict::Borderline);
  }
  SUBCASE("no singularities at all") {
    const auto rep = decide_maximal_bounded(circle_space(1.7));
    CHECK(rep.verdict == Verdict::Yes);
    CHECK(rep.points.empty());
  }
}

TEST_CASE("singular operator boundedness: Carleson curves, open-curve boundary") {
  SUBCASE("circle with an admissible power") {
    const auto rep =
        decide_S_bounded(circle_space(2.0, power_weight({1, 0}, 0.25)));
    CHECK(rep.verdict == Verdict::Yes);
  }
  SUBCASE("segment endpoint inside the window") {
    SpaceSpec sp{CurveModel::segment({0, 0}, {1, 0}),
                 ExponentField::constant(2.0), power_weight({0, 0}, 0.3)};
    const auto rep = decide_S_bounded(sp);
    CHECK(rep.verdict == Verdict::Yes);
  }
  SUBCASE("segment endpoint on the boundary is undecidable") {
    SpaceSpec sp{CurveModel::segment({0, 0}, {1, 0}),
                 ExponentField::constant(2.0), power_weight({0, 0}, -0.5)};
    const auto rep = decide_S_bounded(sp);
    CHECK(rep.verdict == Verdict::Borderline);
    CHECK(rep.reason.find("open curve") != std::string::npos);
  }
}

TEST_CASE("indicator profile: unweighted circle is flat zero") {
  const auto sp = circle_space(2.0);
  const auto pr = indicator_profile(sp, {1, 0});
  CHECK(pr.inv_p == doctest::Approx(0.5));
  REQUIRE(pr.x_grid.size() == 33);
  for (size_t i = 0; i < pr.x_grid.size(); ++i) {
    CHECK(std::abs(pr.alpha_star[i]) < 1e-4);
    CHECK(std::abs(pr.beta_star[i]) < 1e-4);
    CHECK(pr.alpha_star[i] <= pr.beta_star[i] + 1e-12);
  }
  CHECK(std::abs(pr.alpha_slope_plus) < 5e-3);
  CHECK(std::abs(pr.beta_slope_minus) < 5e-3);
  // Beyond the grid the asymptote lines take over and stay flat.
  CHECK(std::abs(pr.alpha_at(25.0)) < 0.15);
  CHECK(std::abs(pr.beta_at(-25.0)) < 0.15);
}

TEST_CASE("indicator profile: power weight shifts the profile by its exponent") {
  const auto sp = circle_space(2.0, power_weight({1, 0}, 0.3));
  const auto pr = indicator_profile(sp, {1, 0});
  for (size_t i = 0; i < pr.x_grid.size(); ++i) {
    CHECK(pr.alpha_star[i] == doctest::Approx(0.3).epsilon(0.02));
    CHECK(pr.beta_star[i] == doctest::Approx(0.3).epsilon(0.02));
  }
  // Consistency with the boundedness indices at x = 0.
  const auto rep = decide_maximal_bounded(sp);
  REQUIRE(rep.points.size() == 1);
  CHECK(pr.alpha_at(0.0) == doctest::Approx(rep.points[0].alpha).epsilon(0.01));
  CHECK(pr.beta_at(0.0) == doctest::Approx(rep.points[0].beta).epsilon(0.01));
}

TEST_CASE("indicator profile: logarithmic spiral tilts the profile linearly") {
  SpaceSpec sp{CurveModel::log_spiral_attached(1.0), ExponentField::constant(2.0),
               Weight::one()};
  const auto pr = indicator_profile(sp, {1, 0});
  for (size_t i = 0; i < pr.x_grid.size(); ++i) {
    CHECK(std::abs(pr.alpha_star[i] - pr.x_grid[i]) < 2e-2);
    CHECK(std::abs(pr.beta_star[i] - pr.x_grid[i]) < 2e-2);
  }
  CHECK(std::abs(pr.alpha_slope_plus - 1.0) < 5e-2);
  CHECK(std::abs(pr.beta_slope_minus - 1.0) < 5e-2);
}

TEST_CASE("indicator profile: input validation") {
  const auto sp = circle_space(2.0);
  CHECK_THROWS_AS(indicator_profile(sp, {1, 0}, {-1.0, 0.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("mobius transform: anchor points and pole") {
  const cplx z1{1, 0}, z2{-2, 3};
  CHECK(std::abs(mobius(z1, z2, {0, 0}) - z1) < 1e-15);
  CHECK(std::abs(mobius(z1, z2, {1e12, 0}) - z2) < 1e-10);
  CHECK_THROWS_AS(mobius(z1, z2, {1, 0}), std::invalid_argument);
}

TEST_CASE("leaf geometry on the unweighted circle") {
  const auto sp = circle_space(2.0);
  const auto pr = indicator_profile(sp, {1, 0});

  SUBCASE("p = 2 diameter leaf contains the origin") {
    const auto L = leaf({1, 0}, {-1, 0}, 2.0, pr);
    CHECK(L.contains({0, 0}));
    CHECK(L.contains({1, 0}));
    CHECK(L.contains({-1, 0}));
    CHECK(L.origin_distance() == 0.0);
    CHECK_FALSE(L.degenerate());
    // Boundary ends reach the endpoints.
    CHECK(std::abs(L.lower_boundary().front() - cplx{1, 0}) < 1e-5);
    CHECK(std::abs(L.lower_boundary().back() - cplx{-1, 0}) < 1e-5);
  }
  SUBCASE("p = 3 circular arc stays at distance 1/sqrt(3)") {
    const auto L = leaf({1, 0}, {-1, 0}, 3.0, pr);
    CHECK_FALSE(L.contains({0, 0}));
    CHECK(L.origin_distance() ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-4));
    // The arc midpoint i*cot(pi/3) belongs to the leaf.
    CHECK(L.contains({0, 1.0 / std::sqrt(3.0)}));
    CHECK_FALSE(L.contains({0, -1.0}));
  }
  SUBCASE("degenerate leaf is a single point") {
    const auto L = leaf({5, 0}, {5, 0}, 2.0, pr);
    CHECK(L.degenerate());
    CHECK(L.contains({5, 0}));
    CHECK_FALSE(L.contains({5.1, 0}));
    CHECK(L.origin_distance() == doctest::Approx(5.0));
  }
}

TEST_CASE("piecewise symbols: factories, limits, and algebra") {
  const auto curve = CurveModel::unit_circle();

  SUBCASE("constant symbol") {
    const auto s = PCSymbol::constant(curve, {0, 2});
    CHECK(s.jumps().empty());
    CHECK(s.inf_abs() == doctest::Approx(2.0));
    CHECK(s.samples().size() == size_t(curve.resolution() + 1));
  }
  SUBCASE("single jump: one-sided limits, seam closure, spiral-path range") {
    const auto s = PCSymbol::single_jump(curve, {0, 1}, {2, 0}, {3, 0});
    REQUIRE(s.jumps().size() == 1);
    const auto& j = s.jumps()[0];
    CHECK(std::abs(j.t - cplx{0, 1}) < 1e-3);
    CHECK(j.before == cplx{2, 0});
    CHECK(j.after == cplx{3, 0});
    CHECK(s.before_at(j.sample) == cplx{2, 0});
    CHECK(s.after_at(j.sample) == cplx{3, 0});
    CHECK(std::abs(s.samples().front() - s.samples().back()) == 0.0);
    CHECK(s.inf_abs() == doctest::Approx(2.0).epsilon(1e-9));
    for (const auto& v : s.samples()) {
      CHECK(std::abs(v) >= 2.0 - 1e-9);
      CHECK(std::abs(v) <= 3.0 + 1e-9);
    }
    CHECK_THROWS_AS(PCSymbol::single_jump(curve, {0, 1}, {0, 0}, {3, 0}),
                    std::invalid_argument);
  }
  SUBCASE("continuous factory records a seam mismatch as a start jump") {
    const double L = curve.length();
    const auto s = PCSymbol::continuous(
        curve, [&](double u) { return std::exp(cplx{0, kPi * u / L}); });
    REQUIRE(s.jumps().size() == 1);
    CHECK(s.jumps()[0].sample == 0);
    CHECK(std::abs(s.jumps()[0].before - cplx{-1, 0}) < 1e-9);
    CHECK(std::abs(s.jumps()[0].after - cplx{1, 0}) < 1e-9);
  }
  SUBCASE("products and quotients merge jump lists") {
    const auto a = PCSymbol::single_jump(curve, {0, 1}, {1, 0}, {-1, 0});
    const auto c = PCSymbol::constant(curve, {2, 0});
    const auto prod = a * c;
    REQUIRE(prod.jumps().size() == 1);
    CHECK(std::abs(prod.jumps()[0].before - cplx{2, 0}) < 1e-12);
    CHECK(std::abs(prod.jumps()[0].after - cplx{-2, 0}) < 1e-12);

    const auto quot = a / a;
    CHECK(quot.jumps().empty());  // the jump cancels exactly
    CHECK(quot.inf_abs() == doctest::Approx(1.0));

    const auto zero = PCSymbol::constant(curve, {0, 0});
    CHECK_THROWS_AS(a / zero, std::invalid_argument);

    const auto other = PCSymbol::constant(CurveModel::unit_circle(1 << 12), {1, 0});
    CHECK_THROWS_AS(a * other, std::invalid_argument);
  }
}

TEST_CASE("gamma of a jump: principal branch, modulus part, symbol lookup") {
  SUBCASE("pure phase jump") {
    const cplx g = gamma_local({1, 0}, {0, 1});
    CHECK(g.real() == doctest::Approx(-0.25));
    CHECK(g.imag() == doctest::Approx(0.0));
  }
  SUBCASE("pure modulus jump") {
    const cplx g = gamma_local({2, 0}, {1, 0});
    CHECK(g.real() == doctest::Approx(0.0));
    CHECK(g.imag() == doctest::Approx(-std::log(2.0) / (2 * kPi)));
  }
  SUBCASE("vanishing limits rejected") {
    CHECK_THROWS_AS(gamma_local({0, 0}, {1, 0}), std::invalid_argument);
  }
  SUBCASE("lookup by curve point") {
    const auto curve = CurveModel::unit_circle();
    const auto a = PCSymbol::single_jump(curve, {0, 1}, {1, 0}, {0, 1});
    const cplx g = gamma_local(a, {0, 1});
    CHECK(g.real() == doctest::Approx(-0.25));
    const cplx none = gamma_local(a, {1, 0});
    CHECK(std::abs(none) == 0.0);
  }
}

TEST_CASE("theta grid") {
  const auto g = theta_grid(5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(0.5));
  CHECK_THROWS_AS(theta_grid(1), std::invalid_argument);
}

TEST_CASE("admissible integer shift k") {
  const auto pr2 = indicator_profile(circle_space(2.0), {1, 0});
  const auto pr3 = indicator_profile(circle_space(3.0), {1, 0});
  const cplx g = gamma_local({1, 0}, {-1, 0});  // Re gamma = +-1/2

  SUBCASE("p = 2: the halving jump admits no shift") {
    CHECK_FALSE(select_kt(pr2, g).has_value());
  }
  SUBCASE("p = 3: shifted criterion value is 5/6") {
    const auto k = select_kt(pr3, g);
    REQUIRE(k.has_value());
    const double e = pr3.inv_p - g.real() + *k;
    CHECK(e == doctest::Approx(5.0 / 6.0).epsilon(1e-6));
  }
  SUBCASE("continuous point: k = 0 works whenever 1/p is interior") {
    const auto k = select_kt(pr2, {0, 0});
    REQUIRE(k.has_value());
    CHECK(*k == 0);
  }
}

TEST_CASE("local twist: S boundedness with the shifted power weight") {
  const auto sp = circle_space(2.0);
  SUBCASE("small real gamma, k = 0") {
    const auto rep = local_S_bounded(sp, {1, 0}, {0.25, 0}, 0);
    CHECK(rep.verdict == Verdict::Yes);
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.points[0].alpha == doctest::Approx(-0.25).epsilon(0.01));
  }
  SUBCASE("gamma on the boundary") {
    const auto rep = local_S_bounded(sp, {1, 0}, {0.5, 0}, 0);
    CHECK(rep.verdict == Verdict::Borderline);
  }
  SUBCASE("bad shift fails") {
    const auto rep = local_S_bounded(sp, {1, 0}, {0.25, 0}, 1);
    CHECK(rep.verdict == Verdict::No);
  }
}

TEST_CASE("fredholm: identity-like and continuous coefficients") {
  const auto sp = circle_space(2.0);
  const auto one = PCSymbol::constant(sp.curve, {1, 0});

  SUBCASE("a = b = 1 gives the identity") {
    const auto rep = decide_fredholm(one, one, sp);
    CHECK(rep.verdict == Verdict::Yes);
    CHECK(rep.quotient.nonsingular);
    CHECK(rep.quotient.range_distance == doctest::Approx(1.0));
  }
  SUBCASE("winding continuous coefficient stays Fredholm") {
    const double L = sp.curve.length();
    const auto a = PCSymbol::continuous(
        sp.curve, [&](double u) { return std::exp(cplx{0, 2 * kPi * u / L}); });
    CHECK(a.jumps().empty());
    const auto rep = decide_fredholm(a, one, sp);
    CHECK(rep.verdict == Verdict::Yes);
  }
  SUBCASE("vanishing b is decisive") {
    const double L = sp.curve.length();
    const auto b = PCSymbol::continuous(sp.curve, [&](double u) {
      return cplx{std::sin(kPi * u / L), 0};  // zero at the seam
    });
    const auto rep = decide_fredholm(one, b, sp);
    CHECK(rep.verdict == Verdict::No);
    CHECK(rep.inf_abs_b <= 1e-3);
    CHECK(rep.reason.find("vanishes") != std::string::npos);
  }
}

TEST_CASE("fredholm: the halving jump, p = 2 versus p = 3") {
  const auto one2 = PCSymbol::constant(CurveModel::unit_circle(), {1, 0});

  SUBCASE("p = 2: leaf through the origin") {
    const auto sp = circle_space(2.0);
    const auto a = PCSymbol::single_jump(sp.curve, {1, 0}, {1, 0}, {-1, 0});
    const auto rep = decide_fredholm(a, one2, sp);
    CHECK(rep.verdict == Verdict::No);
    REQUIRE(rep.quotient.jumps.size() == 1);
    const auto& d = rep.quotient.jumps[0];
    CHECK(d.leaf_contains_origin);
    CHECK(d.criterion_gap < 1e-6);
    CHECK_FALSE(d.k.has_value());
    CHECK(std::abs(std::abs(d.gamma.real()) - 0.5) < 1e-12);
  }
  SUBCASE("p = 3: same jump is Fredholm with gap 1/6") {
    const auto sp = circle_space(3.0);
    const auto a = PCSymbol::single_jump(sp.curve, {1, 0}, {1, 0}, {-1, 0});
    const auto rep = decide_fredholm(a, one2, sp);
    CHECK(rep.verdict == Verdict::Yes);
    REQUIRE(rep.quotient.jumps.size() == 1);
    const auto& d = rep.quotient.jumps[0];
    CHECK_FALSE(d.leaf_contains_origin);
    CHECK(d.criterion_gap == doctest::Approx(1.0 / 6.0).epsilon(1e-3));
    CHECK(d.k.has_value());
    CHECK(d.leaf_distance == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
  }
}

TEST_CASE("fredholm: scaling and reduction invariances") {
  const auto sp = circle_space(3.0);
  const auto a = PCSymbol::single_jump(sp.curve, {0, 1}, {1, 0.3}, {-1, 0.1});
  const auto b = PCSymbol::constant(sp.curve, {2, 0});
  const auto one = PCSymbol::constant(sp.curve, {1, 0});
  const auto two = PCSymbol::constant(sp.curve, {2, 0});

  const auto base = decide_fredholm(a, one, sp);
  const auto scaled = decide_fredholm(a * two, two, sp);
  CHECK(base.verdict == scaled.verdict);
  CHECK(base.quotient.jumps.size() == scaled.quotient.jumps.size());
  if (!base.quotient.jumps.empty() && !scaled.quotient.jumps.empty())
    CHECK(base.quotient.jumps[0].criterion_gap ==
          doctest::Approx(scaled.quotient.jumps[0].criterion_gap).epsilon(1e-9));

  const auto reduced = decide_fredholm(a / b, one, sp);
  const auto direct = decide_fredholm(a, b, sp);
  CHECK(reduced.verdict == direct.verdict);
}

TEST_CASE("fredholm: operator requires a bounded singular integral") {
  const auto sp = circle_space(2.0, power_weight({1, 0}, 0.7));
  const auto one = PCSymbol::constant(sp.curve, {1, 0});
  CHECK_THROWS_WITH_AS(decide_fredholm(one, one, sp),
                       doctest::Contains("operator not defined"),
                       std::invalid_argument);
}

TEST_CASE("fredholm: agreement with the closed-form jump criterion") {
  // Unweighted circle: the operator with a single jump a(t-0)=1,
  // a(t+0)=rho*e^{i phi} fails Fredholmness exactly when
  // 1/p + phi/(2 pi) is an integer (any rho > 0).
  const auto curve = CurveModel::unit_circle();
  const auto one = PCSymbol::constant(curve, {1, 0});
  const double deg = kPi / 180.0;
  const double phis[] = {-120 * deg, -60 * deg, 30 * deg, 90 * deg, 150 * deg,
                         180 * deg};
  const double rhos[] = {0.5, 2.0};
  for (double p : {2.0, 3.0}) {
    const auto sp = circle_space(p);
    for (double phi : phis) {
      for (double rho : rhos) {
        CAPTURE(p);
        CAPTURE(phi);
        CAPTURE(rho);
        const cplx after = std::polar(rho, phi);
        const auto a = PCSymbol::single_jump(curve, {1, 0}, {1, 0}, after);
        const double crit = 1.0 / p + phi / (2 * kPi);
        const double dist = std::abs(crit - std::round(crit));
        if (dist < 5e-3) continue;  // skip knife-edge cases
        const auto rep = decide_fredholm(a, one, sp);
        const bool expect = dist > 1e-3;
        CHECK(rep.verdict == (expect ? Verdict::Yes : Verdict::No));
        REQUIRE(rep.quotient.jumps.size() == 1);
        CHECK(std::abs(rep.quotient.jumps[0].criterion_gap - dist) < 2e-3);
        CHECK(rep.quotient.jumps[0].leaf_contains_origin == !expect);
      }
    }
  }
}
