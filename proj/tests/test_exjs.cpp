#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gammalab/error.hpp"
#include "gammalab/exjs.hpp"

#include <random>

using namespace gammalab;

namespace {
bool close(cplx a, cplx b, double tol = 1e-8) { return std::abs(a - b) < tol; }

CFun random_phi(unsigned q, unsigned m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CFun f = CFun::zeros(q, m);
  for (cplx& v : f.v) v = cplx(u(rng), u(rng));
  return f;
}

MatF random_mat(const Fq& F, unsigned n, std::mt19937_64& rng) {
  MatF x = MatF::zero(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) x(i, j) = static_cast<Fq::E>(rng() % F.q());
  return x;
}

std::vector<Fq::E> random_vec(const Fq& F, unsigned m, std::mt19937_64& rng) {
  std::vector<Fq::E> v(m);
  for (auto& x : v) x = static_cast<Fq::E>(rng() % F.q());
  return v;
}

struct Case {
  unsigned p, n;
};
const Case kSmall[] = {{2, 2}, {3, 2}, {2, 3}, {3, 3}, {2, 4}, {3, 4}};
}  // namespace

TEST_CASE("canonical pair gives js = 1") {
  for (const Case& c : {Case{2, 2}, Case{5, 2}, Case{2, 3}, Case{3, 3}, Case{2, 4}, Case{3, 4}, Case{2, 5}}) {
    GroupCtx G(c.p, 1, c.n);
    CuspidalRep r(G, regular_orbit_reps(G.field(), c.n).front());
    const BesselTable t = bessel_build(r);
    CHECK(close(js(canonical_whittaker(t), canonical_phi(G.fq(), c.n)), 1.0));
  }
}

TEST_CASE("even dual of the canonical W against psi(-x_1) is q^{m/2}") {
  for (const Case& c : {Case{3, 2}, Case{2, 4}}) {
    GroupCtx G(c.p, 1, c.n);
    const unsigned m = c.n / 2;
    CuspidalRep r(G, regular_orbit_reps(G.field(), c.n).back());
    const BesselTable t = bessel_build(r);
    CFun phi = CFun::zeros(G.q(), m);
    for (std::size_t i = 0; i < phi.v.size(); ++i)
      phi.v[i] = G.psi()(G.fq().neg(vec_from_index(G.q(), m, i)[0]));
    CHECK(close(dual_js(canonical_whittaker(t), phi), std::pow(G.q(), 0.5 * m)));
  }
}

TEST_CASE("direct dual formula equals the definition; double duality") {
  std::mt19937_64 rng(11);
  for (const Case& c : kSmall) {
    GroupCtx G(c.p, 1, c.n);
    const JsFrame fr(G.fq(), c.n);
    for (std::int64_t k : regular_orbit_reps(G.field(), c.n)) {
      CuspidalRep r(G, k);
      const BesselTable t = bessel_build(r);
      for (int i = 0; i < 4; ++i) {
        const WhittakerFun W = WhittakerFun::translate(t, random_gl(G.fq(), c.n, rng));
        const CFun phi = random_phi(G.q(), c.n / 2, rng);
        for (DualConvention dc : {DualConvention::Equivariant, DualConvention::Printed})
          CHECK(close(dual_js(fr, W, phi, dc), dual_js_definition(fr, W, phi, dc)));
        // Dualizing the dual pair returns js(W, phi).
        const AddChar& psi = W.psi();
        const AddChar kern = c.n % 2 ? psi.inverted() : psi;
        const CFun phi_hat = fourier(phi, kern);
        CHECK(close(dual_js_definition(fr, W.flip(), phi_hat), js(fr, W, phi)));
      }
    }
  }
}

TEST_CASE("flip is an involution") {
  GroupCtx G(3, 1, 3);
  CuspidalRep r(G, 1);
  const BesselTable t = bessel_build(r);
  std::mt19937_64 rng(2);
  const WhittakerFun W = WhittakerFun::translate(t, random_gl(G.fq(), 3, rng), cplx(0.5, 2.0));
  const WhittakerFun W2 = W.flip().flip();
  for (int i = 0; i < 20; ++i) {
    const MatF g = random_gl(G.fq(), 3, rng);
    CHECK(close(W(g), W2(g)));
  }
}

TEST_CASE("Whittaker translates transform by psi on the left") {
  GroupCtx G(3, 1, 3);
  CuspidalRep r(G, 1);
  const BesselTable t = bessel_build(r);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const WhittakerFun W = WhittakerFun::translate(t, random_gl(G.fq(), 3, rng));
    const MatF u = random_upper_unipotent(G.fq(), 3, rng);
    const MatF g = random_gl(G.fq(), 3, rng);
    CHECK(close(W(mat_mul(G.fq(), u, g)), G.psi()(superdiag_sum(G.fq(), u)) * W(g)));
    const WhittakerFun Wf = W.flip();
    CHECK(close(Wf(mat_mul(G.fq(), u, g)), Wf.psi()(superdiag_sum(G.fq(), u)) * Wf(g)));
  }
}

TEST_CASE("Shalika action generator relations") {
  GroupCtx G(3, 1, 5);
  const Fq& F = G.fq();
  const AddChar& psi = G.psi();
  std::mt19937_64 rng(4);
  const unsigned m = 2;
  auto base = [&] {
    ShalikaElem s{MatF::identity(m), MatF::zero(m), std::vector<Fq::E>(m, 0), std::vector<Fq::E>(m, 0)};
    return s;
  };
  const CFun phi = random_phi(3, m, rng);
  CHECK(shalika_action(F, psi, 5, base(), phi).v == phi.v);
  for (int i = 0; i < 10; ++i) {
    const auto x0 = random_vec(F, m, rng), y0 = random_vec(F, m, rng);
    ShalikaElem sd = base();
    sd.g = random_gl(F, m, rng);
    ShalikaElem su = base();
    su.X = random_mat(F, m, rng);
    ShalikaElem sy = base();
    sy.Y = y0;
    ShalikaElem sz = base();
    sz.Z = x0;
    const CFun ad = shalika_action(F, psi, 5, sd, phi), au = shalika_action(F, psi, 5, su, phi);
    const CFun ay = shalika_action(F, psi, 5, sy, phi), az = shalika_action(F, psi, 5, sz, phi);
    Fq::E tr = F.add(su.X(0, 0), su.X(1, 1));
    for (std::size_t j = 0; j < phi.v.size(); ++j) {
      const auto x = vec_from_index(3, m, j);
      std::vector<Fq::E> xg(m, 0), xs(m);
      for (unsigned b = 0; b < m; ++b) {
        for (unsigned a = 0; a < m; ++a) xg[b] = F.add(xg[b], F.mul(x[a], sd.g(a, b)));
        xs[b] = F.add(x[b], x0[b]);
      }
      const Fq::E dot = F.add(F.mul(x[0], y0[0]), F.mul(x[1], y0[1]));
      CHECK(close(ad.v[j], phi.at(3, xg)));
      CHECK(close(au.v[j], psi(F.neg(tr)) * phi.v[j]));
      CHECK(close(ay.v[j], psi(dot) * phi.v[j]));
      CHECK(close(az.v[j], phi.at(3, xs)));
    }
  }
  ShalikaElem bad = base();
  bad.g = MatF::zero(m);
  CHECK_THROWS_AS(shalika_action(F, psi, 5, bad, phi), Error);
  ShalikaElem even_with_y = base();
  CHECK_THROWS_AS(shalika_matrix(F, 4, even_with_y), Error);
}

TEST_CASE("even equivariance with Psi, odd invariance") {
  std::mt19937_64 rng(5);
  for (const Case& c : kSmall) {
    GroupCtx G(c.p, 1, c.n);
    const Fq& F = G.fq();
    const unsigned m = c.n / 2;
    const JsFrame fr(F, c.n);
    CuspidalRep r(G, regular_orbit_reps(G.field(), c.n).back());
    const BesselTable t = bessel_build(r);
    for (int i = 0; i < 6; ++i) {
      ShalikaElem s{random_gl(F, m, rng), random_mat(F, m, rng), {}, {}};
      if (c.n % 2) {
        s.Y = random_vec(F, m, rng);
        s.Z = random_vec(F, m, rng);
      }
      const WhittakerFun W = WhittakerFun::translate(t, random_gl(F, c.n, rng));
      const CFun phi = random_phi(G.q(), m, rng);
      const WhittakerFun Ws = W.right_translate(shalika_matrix(F, c.n, s));
      const CFun phis = shalika_action(F, t.psi(), c.n, s, phi);
      const cplx factor = c.n % 2 ? cplx(1.0) : shalika_character(F, t.psi(), s);
      CHECK(close(js(fr, Ws, phis), factor * js(fr, W, phi)));
      CHECK(close(dual_js(fr, Ws, phis), factor * dual_js(fr, W, phi)));
    }
  }
}

TEST_CASE("printed odd dual kernel is not equivariant for odd p") {
  GroupCtx G(3, 1, 3);
  const Fq& F = G.fq();
  const JsFrame fr(F, 3);
  CuspidalRep r(G, 1);
  const BesselTable t = bessel_build(r);
  std::mt19937_64 rng(6);
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    ShalikaElem s{MatF::identity(1), MatF::zero(1), random_vec(F, 1, rng), random_vec(F, 1, rng)};
    const WhittakerFun W = WhittakerFun::translate(t, random_gl(F, 3, rng));
    const CFun phi = random_phi(3, 1, rng);
    const cplx a = dual_js(fr, W.right_translate(shalika_matrix(F, 3, s)), shalika_action(F, t.psi(), 3, s, phi),
                           DualConvention::Printed);
    worst = std::max(worst, std::abs(a - dual_js(fr, W, phi, DualConvention::Printed)));
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("gamma routes agree and are unitary") {
  for (const Case& c : kSmall) {
    GroupCtx G(c.p, 1, c.n);
    for (std::int64_t k : regular_orbit_reps(G.field(), c.n)) {
      CuspidalRep r(G, k);
      if (admits_shalika_vector(r)) continue;
      const BesselTable t = bessel_build(r);
      const GammaResult ratio = gamma_ratio(t);
      const GammaResult torus = gamma_torus(t);
      CHECK(ratio.residual < 1e-8);
      CHECK(ratio.pairs >= 100);
      CHECK(close(ratio.value, torus.value, 1e-7));
      CHECK(std::abs(std::abs(ratio.value) - 1.0) < 1e-8);
      if (c.n == 2 && r.central_char().is_trivial()) continue;
      CHECK(close(gamma_closed(r).value, torus.value, 1e-7));
    }
  }
}

TEST_CASE("printed GL4 Kloosterman argument disagrees at q = 3 only") {
  GroupCtx G2(2, 1, 4);
  for (std::int64_t k : regular_orbit_reps(G2.field(), 4)) {
    CuspidalRep r(G2, k);
    if (admits_shalika_vector(r)) continue;
    CHECK(close(gamma_closed(r, false, ClosedVariant::Printed).value, gamma_closed(r).value));
  }
  GroupCtx G3(3, 1, 4);
  CuspidalRep r(G3, 1);
  const cplx good = gamma_closed(r).value, printed = gamma_closed(r, false, ClosedVariant::Printed).value;
  CHECK_FALSE(close(good, printed, 1e-3));
  CHECK(close(printed, -std::conj(good)));
}

TEST_CASE("gamma of the contragredient under psi^{-1} is the inverse") {
  for (const Case& c : kSmall) {
    GroupCtx G(c.p, 1, c.n);
    for (std::int64_t k : regular_orbit_reps(G.field(), c.n)) {
      CuspidalRep r(G, k);
      if (admits_shalika_vector(r)) continue;
      const cplx g = gamma_torus(bessel_build(r)).value;
      const cplx gd = gamma_torus(bessel_build(r.contragredient(), true)).value;
      CHECK(close(g * gd, 1.0));
      CHECK(close(gd, std::conj(g)));
    }
  }
}

TEST_CASE("gamma is constant on Galois orbits") {
  GroupCtx G(3, 1, 3);
  for (std::int64_t k : regular_orbit_reps(G.field(), 3)) {
    const cplx g = gamma_torus(bessel_build(CuspidalRep(G, k))).value;
    for (std::int64_t k2 : galois_orbit(G.field(), 3, k)) CHECK(close(gamma_torus(bessel_build(CuspidalRep(G, k2))).value, g));
  }
}

TEST_CASE("functional equation exhaustively for n = 2, q <= 3; serial equals parallel") {
  for (unsigned p : {2u, 3u}) {
    GroupCtx G(p, 1, 2);
    for (std::int64_t k : regular_exponents(G.field(), 2)) {
      CuspidalRep r(G, k);
      if (admits_shalika_vector(r)) continue;
      const BesselTable t = bessel_build(r);
      const cplx g = gamma_torus(t).value;
      const FeCheck a = fe_check(t, g, {});
      const FeCheck b = fe_check_serial(t, g, {});
      CHECK(a.exhaustive);
      CHECK(a.pairs == gl_order(p, 2) * p);
      CHECK(a.residual < 1e-10);
      CHECK(a.residual == b.residual);
      CHECK(fe_check(t, g * cplx(0, 1), {}).residual > 0.1);
    }
  }
}

TEST_CASE("ratio route rejects a Shalika vector") {
  GroupCtx G(3, 1, 2);
  CuspidalRep r(G, 2);
  CHECK(admits_shalika_vector(r));
  const BesselTable t = bessel_build(r);
  try {
    gamma_ratio(t);
    FAIL("expected ShalikaVectorPresent");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ShalikaVectorPresent);
  }
}

TEST_CASE("S0/S1 decomposition") {
  GroupCtx G2(3, 1, 2);
  for (std::int64_t k : regular_orbit_reps(G2.field(), 2)) {
    CuspidalRep r(G2, k);
    if (admits_shalika_vector(r)) continue;
    const BesselTable t = bessel_build(r);
    const S0S1 s = s0_s1_decomposition(t);
    CHECK(close(s.s0, 0.0));
    CHECK(close(s.s1, 1.0));
    CHECK(close(s.gamma, gamma_torus(t).value));
  }
  for (unsigned p : {2u, 3u}) {
    GroupCtx G(p, 1, 4);
    for (std::int64_t k : regular_orbit_reps(G.field(), 4)) {
      CuspidalRep r(G, k);
      if (admits_shalika_vector(r)) continue;
      const BesselTable t = bessel_build(r);
      const S0S1 s = s0_s1_decomposition(t);
      CHECK(close(s.gamma, gamma_torus(t).value));
      if (!r.central_char().is_trivial()) CHECK(close(s.s0, 0.0));
      else CHECK(close(s.s0, 1.0 / p - 1.0 / (p * p)));
    }
  }
}

TEST_CASE("Shalika detection") {
  for (const Case& c : {Case{2, 2}, Case{3, 2}, Case{5, 2}, Case{2, 4}, Case{3, 4}}) {
    GroupCtx G(c.p, 1, c.n);
    for (std::int64_t k : regular_orbit_reps(G.field(), c.n)) {
      CuspidalRep r(G, k);
      const ShalikaReport rep = shalika_detect(bessel_build(r));
      CHECK(rep.consistent());
      const auto qm1 = static_cast<std::int64_t>(std::pow(c.p, c.n / 2)) - 1;
      CHECK(rep.criterion == (k % qm1 == 0));
      if (rep.criterion) {
        CHECK(std::abs(rep.witness_js) > 1e-6);
        CHECK(close(rep.witness_js, rep.witness_at_sigma));
        CHECK(rep.broken_dual < 1e-8);
      } else {
        CHECK(rep.max_js_translates < 1e-8);
      }
    }
  }
}

TEST_CASE("q = 3, n = 2, k = 1: no Shalika vector, all 48 translates vanish") {
  GroupCtx G(3, 1, 2);
  const ShalikaReport rep = shalika_detect(bessel_build(CuspidalRep(G, 1)));
  CHECK_FALSE(rep.criterion);
  CHECK(rep.translates == 48);
  CHECK(rep.max_js_translates < 1e-12);
}

TEST_CASE("invariant dimensions are 0 or 1") {
  for (unsigned p : {2u, 3u, 5u}) {
    GroupCtx G(p, 1, 2);
    for (std::int64_t k : regular_exponents(G.field(), 2)) {
      const HomDim h = homdim_check(CuspidalRep(G, k));
      CHECK(h.order == p - 1);
    }
  }
  for (unsigned p : {2u, 3u}) {
    GroupCtx G(p, 1, 3);
    for (std::int64_t k : regular_orbit_reps(G.field(), 3)) CHECK_NOTHROW(homdim_check(CuspidalRep(G, k)));
  }
  {
    GroupCtx G(2, 1, 3);
    std::size_t filtered = 0;
    for (const MatF& g : enumerate_gl(G.fq(), 3))
      if (g(0, 1) == 0 && g(1, 0) == 0 && g(1, 2) == 0 && g(2, 0) == 0 && g(2, 1) == 0 && g(2, 2) == 1) ++filtered;
    CHECK(homdim_subgroup(G.fq(), 3).size() == filtered);
  }
  GroupCtx G4(2, 1, 4);
  for (std::int64_t k : regular_orbit_reps(G4.field(), 4)) {
    const HomDim h = homdim_check(CuspidalRep(G4, k));
    CHECK(h.order == 12);
  }
}
