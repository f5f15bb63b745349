#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gammalab/error.hpp"
#include "gammalab/levelzero.hpp"

#include <numbers>
#include <random>

using namespace gammalab;

namespace {
bool close(cplx a, cplx b, double tol = 1e-9) { return std::abs(a - b) < tol; }

const cplx kFifth = std::polar(1.0, 2.0 * std::numbers::pi / 5.0);
const cplx kCs[] = {1.0, cplx(0.0, 1.0), kFifth};

RatQS random_rat(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto poly = [&](std::size_t d) {
    RatQS::Poly p(d + 1);
    for (cplx& c : p) c = cplx(u(rng), u(rng));
    return p;
  };
  return RatQS(poly(1 + rng() % 3), poly(1 + rng() % 3), static_cast<int>(rng() % 5) - 2);
}
}  // namespace

TEST_CASE("RatQS arithmetic and reduction") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const RatQS a = random_rat(rng), b = random_rat(rng);
    CHECK((a * a.inverse()).approx_equal(RatQS(1.0)));
    CHECK(((a + b) - b).approx_equal(a));
    CHECK((a / b * b).approx_equal(a));
    // Reduction is idempotent.
    const RatQS r(a.num(), a.den(), a.shift());
    CHECK(r.residual(a) < 1e-12);
    CHECK(close(a.den()[0], 1.0));
    // Coefficient equality agrees with pointwise equality on the unit circle.
    for (int k = 0; k < 5; ++k) {
      const cplx X = std::polar(1.0, 0.7 + 1.1 * k);
      CHECK(close((a + b)(X), a(X) + b(X), 1e-7));
      CHECK(close((a * b)(X), a(X) * b(X), 1e-7));
    }
  }
  // Common factors cancel.
  const RatQS f(poly_mul({1.0, -2.0}, {1.0, 0.5}), poly_mul({1.0, -2.0}, {3.0, 1.0}));
  CHECK(f.num().size() == 2);
  CHECK(f.den().size() == 2);
  CHECK(f.approx_equal(RatQS({1.0, 0.5}, {3.0, 1.0})));
  // Laurent shifts are pulled into x_shift.
  const RatQS g({0.0, 0.0, 2.0}, {0.0, 1.0, 1.0});
  CHECK(g.shift() == 1);
  CHECK(g.num().size() == 1);
  CHECK(RatQS(0.0).is_zero());
  CHECK_THROWS_AS(RatQS({1.0}, {0.0}), Error);
  CHECK_THROWS_AS(RatQS(0.0).inverse(), Error);
}

TEST_CASE("RatQS reflection and json round trip") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const RatQS a = random_rat(rng);
    const RatQS r = a.reflect(3.0);
    const cplx X(0.4, 0.9);
    CHECK(close(r(X), a(1.0 / (3.0 * X)), 1e-7));
    CHECK(r.reflect(3.0).approx_equal(a));
    const RatQS back = RatQS::from_json(nlohmann::json::parse(a.to_json().dump()));
    CHECK(back.residual(a) < 1e-12);
  }
  const auto j = l_factor(1.0, 1).to_json();
  CHECK(j.at("x_shift") == 0);
  CHECK(j.at("den").size() == 2);
}

TEST_CASE("L factor and root product") {
  CHECK(l_factor(0.0, 1).is_constant());
  CHECK(l_factor(1.0, 1).approx_equal(RatQS({1.0}, {1.0, -1.0})));
  for (cplx c : kCs)
    for (unsigned m = 1; m <= 3; ++m) {
      const RatQS::Poly p = root_product(c, m);
      CHECK(RatQS(p, {1.0}).approx_equal(RatQS(RatQS::one_minus(c, m), {1.0})));
    }
  CHECK(poly_divides({1.0, -1.0}, RatQS::one_minus(1.0, 3)));
  CHECK_FALSE(poly_divides({1.0, 1.0}, RatQS::one_minus(1.0, 3)));
}

TEST_CASE("lifted values: constants without a Shalika vector, L corrections with one") {
  for (unsigned p : {2u, 3u}) {
    GroupCtx G(p, 1, 2);
    for (std::int64_t k : regular_exponents(G.field(), 2)) {
      CuspidalRep r(G, k);
      const BesselTable t = bessel_build(r);
      for (cplx c : kCs) {
        const LevelZeroCtx ctx{&t, c};
        const WhittakerFun W0 = canonical_whittaker(t);
        const CFun phi0 = canonical_phi(G.fq(), 2);
        if (!admits_shalika_vector(r)) {
          CHECK(lifted_js(ctx, W0, phi0).approx_equal(RatQS(js(W0, phi0))));
          CHECK(lifted_dual_js(ctx, W0, phi0).approx_equal(RatQS(dual_js(W0, phi0))));
          CHECK(std::abs(shalika_functional_value(ctx, W0)) < 1e-12);
          continue;
        }
        const WhittakerFun W = shalika_witness(t);
        const WhittakerFun Wn = W.scaled(1.0 / shalika_functional_value(ctx, W));
        CHECK(close(shalika_functional_value(ctx, Wn), 1.0));
        const CFun one = CFun::constant(p, 1, 1.0);
        CHECK(lifted_js(ctx, Wn, one).approx_equal(l_factor(c, 1)));
        const double q = p;
        const RatQS expect = RatQS::monomial(std::sqrt(q) / q / c, -1) * l_factor(1.0 / c, 1).reflect(q);
        CHECK(lifted_dual_js(ctx, Wn, one).approx_equal(expect));
      }
    }
  }
}

TEST_CASE("local L, epsilon, gamma") {
  for (unsigned n : {2u, 4u})
    for (unsigned p : {2u, 3u}) {
      if (n == 4 && p == 3) continue;  // covered by the acceptance run
      GroupCtx G(p, 1, n);
      const unsigned m = n / 2;
      for (std::int64_t k : regular_orbit_reps(G.field(), n)) {
        CuspidalRep r(G, k);
        const BesselTable t = bessel_build(r);
        const bool sh = admits_shalika_vector(r);
        for (cplx c : kCs) {
          const LevelZeroCtx ctx{&t, c};
          const LocalFactors f = local_factors(ctx);
          CHECK(f.shalika == sh);
          CHECK(f.gamma.is_constant() == !sh);
          CHECK(f.L.has_pole_off_zero() == sh);
          CHECK(f.gamma.approx_equal(f.eps * f.L_dual / f.L));
          CHECK(l_from_lifts(ctx, 10, 7).approx_equal(f.L));
          CHECK(shalika_l_product(ctx).approx_equal(f.L));
          CHECK(poly_divides(f.L.den(), RatQS::one_minus(c, m)));
          if (sh) {
            CHECK(f.L.approx_equal(l_factor(c, m)));
            CHECK(f.eps.approx_equal(RatQS::monomial(std::pow(p, -0.5 * m) / c, -static_cast<int>(m))));
          } else {
            CHECK(close(f.gamma.constant(), gamma_torus(t).value, 1e-8));
            CHECK(f.eps.approx_equal(f.gamma));
          }
        }
      }
    }
}

TEST_CASE("q = 3, n = 2, k = 2, c = 1 instance") {
  GroupCtx G(3, 1, 2);
  CuspidalRep r(G, 2);
  const BesselTable t = bessel_build(r);
  const LocalFactors f = local_factors({&t, 1.0});
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(f.L.approx_equal(RatQS({1.0}, {1.0, -1.0})));
  CHECK(f.eps.approx_equal(RatQS::monomial(s, -1)));
  const RatQS expect = RatQS::monomial(s, -1) * RatQS({1.0, -1.0}, {1.0}) / (RatQS(1.0) - RatQS::monomial(1.0 / 3.0, -1));
  CHECK(f.gamma.approx_equal(expect));
}

TEST_CASE("no-Shalika local gammas of dual data multiply to one") {
  GroupCtx G(3, 1, 2);
  for (std::int64_t k : regular_exponents(G.field(), 2)) {
    CuspidalRep r(G, k);
    if (admits_shalika_vector(r)) continue;
    const BesselTable t = bessel_build(r);
    const BesselTable td = bessel_build(r.contragredient(), true);
    const RatQS g = local_gamma({&t, 1.0});
    const RatQS gd = local_gamma({&td, 1.0}).reflect(3.0);
    CHECK((g * gd).approx_equal(RatQS(1.0), 1e-8));
  }
}

TEST_CASE("modified functional equation") {
  for (unsigned p : {2u, 3u}) {
    GroupCtx G(p, 1, 2);
    for (std::int64_t k : regular_exponents(G.field(), 2)) {
      CuspidalRep r(G, k);
      const BesselTable t = bessel_build(r);
      const ModifiedFe fe = modified_fe_check(t);
      CHECK(fe.exhaustive);
      CHECK(fe.residual < 1e-10);
      CHECK(fe.gamma.approx_equal(local_gamma({&t, 1.0}), 1e-8));
      if (!admits_shalika_vector(r)) CHECK(fe.gamma.is_constant());
    }
  }
  GroupCtx G3(3, 1, 3);
  const BesselTable t3 = bessel_build(CuspidalRep(G3, 1));
  CHECK_THROWS_AS(modified_fe_check(t3), Error);
}
