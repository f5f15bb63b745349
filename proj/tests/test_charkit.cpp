#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gammalab/charkit.hpp"

#include <cmath>
#include <random>

using namespace gammalab;

namespace {
bool close(cplx a, cplx b, double tol = 1e-9) { return std::abs(a - b) < tol; }
}

TEST_CASE("regularity and restriction") {
  FieldCtx F2(2, 1, 2);
  CHECK(is_regular(MultChar(F2, 2, 1), 2));
  CHECK_FALSE(is_regular(MultChar(F2, 2, 0), 2));
  FieldCtx F3(3, 1, 2);
  CHECK_FALSE(is_regular(MultChar(F3, 2, 4), 2));
  CHECK(restriction_is_trivial(MultChar(F3, 2, 4), 1));
  CHECK_FALSE(restriction_is_trivial(MultChar(F3, 2, 1), 1));
  CHECK(restriction_is_trivial(MultChar(F3, 2, 8), 2));
  CHECK(regular_orbit_reps(F3, 2).size() == 3);
}

TEST_CASE("orbit counts divisible by n") {
  for (auto [p, e, n] : {std::tuple{2u, 1u, 4u}, {3u, 1u, 3u}, {2u, 1u, 5u}, {3u, 1u, 4u}, {5u, 1u, 2u}}) {
    FieldCtx F(p, e, n);
    const auto reg = regular_exponents(F, n);
    CHECK(reg.size() % n == 0);
    CHECK(regular_orbit_reps(F, n).size() * n == reg.size());
  }
}

TEST_CASE("character orthogonality and multiplicativity") {
  FieldCtx F(3, 1, 3);
  Fq fq(F);
  AddChar psi(fq);
  cplx s = 0;
  for (unsigned x = 0; x < fq.q(); ++x) s += psi(static_cast<Fq::E>(x));
  CHECK(close(s, 0.0));
  for (unsigned d : {1u, 3u}) {
    for (std::int64_t k = 1; k < static_cast<std::int64_t>(F.q_pow(d) - 1); ++k) {
      MultChar th(F, d, k);
      cplx t = 0;
      for (FElem x = 1; x < F.size(); ++x)
        if (F.in_subfield(x, d)) t += th(x);
      CHECK(close(t, 0.0));
    }
  }
  MultChar th(F, 3, 5);
  for (FElem a = 1; a < F.size(); a += 3)
    for (FElem b = 1; b < F.size(); b += 5) CHECK(close(th(F.mul(a, b)), th(a) * th(b)));
  // theta on the canonical generator
  CHECK(close(th(F.subfield_gen(3)), std::polar(1.0, 2 * M_PI * 5 / 26.0)));
  for (unsigned a = 0; a < 3; ++a)
    for (unsigned b = 0; b < 3; ++b)
      CHECK(close(psi(fq.add(static_cast<Fq::E>(a), static_cast<Fq::E>(b))),
                  psi(static_cast<Fq::E>(a)) * psi(static_cast<Fq::E>(b))));
}

TEST_CASE("gauss sums") {
  for (auto [p, e] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}, {7u, 1u}, {2u, 3u}, {3u, 2u}}) {
    FieldCtx F(p, e, 1);
    Fq fq(F);
    AddChar psi(fq);
    CHECK(close(gauss_sum(MultChar(F, 1, 0), psi), -1.0));
    for (std::int64_t k = 1; k < static_cast<std::int64_t>(F.q() - 1); ++k)
      CHECK(std::abs(std::abs(gauss_sum(MultChar(F, 1, k), psi)) - std::sqrt(double(F.q()))) < 1e-9);
  }
  // q = 3, quadratic character: G = chi(1)psi(1) + chi(2)psi(2) = w - w^2 = i sqrt 3 (up to sign)
  FieldCtx F(3, 1, 1);
  Fq fq(F);
  AddChar psi(fq);
  const cplx w = std::polar(1.0, 2 * M_PI / 3);
  const cplx direct = psi.ambient(1) - psi.ambient(2);
  CHECK(close(gauss_sum(MultChar(F, 1, 1), psi), direct));
  CHECK((close(direct, w - w * w) || close(direct, w * w - w)));
}

TEST_CASE("kloosterman sums") {
  FieldCtx F(5, 1, 1);
  Fq fq(F);
  AddChar psi(fq);
  CHECK(close(kloosterman(1, 0, psi), -1.0));
  CHECK(close(kloosterman(0, 0, psi), 4.0));
  for (FElem a = 0; a < 5; ++a)
    for (FElem b = 0; b < 5; ++b) CHECK(close(kloosterman(a, b, psi), kloosterman(b, a, psi)));
}

TEST_CASE("fourier transform") {
  FieldCtx F(3, 1, 2);
  Fq fq(F);
  AddChar psi(fq);
  const unsigned q = 3, m = 2;
  const CFun d0 = CFun::delta(q, m, {0, 0});
  for (cplx v : fourier(d0, psi).v) CHECK(close(v, 1.0 / 3.0));
  const CFun one = CFun::constant(q, m, 1.0);
  const CFun h = fourier(one, psi);
  CHECK(close(h.v[0], 3.0));
  for (std::size_t i = 1; i < h.v.size(); ++i) CHECK(close(h.v[i], 0.0));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  CFun phi = CFun::zeros(q, m);
  for (auto& v : phi.v) v = cplx(nd(rng), nd(rng));
  const CFun back = fourier(fourier(phi, psi), psi.inverted());
  for (std::size_t i = 0; i < phi.v.size(); ++i) CHECK(close(back.v[i], phi.v[i]));
  // twice with psi gives phi(-x)
  const CFun twice = fourier(fourier(phi, psi), psi);
  for (std::size_t i = 0; i < phi.v.size(); ++i) {
    auto x = vec_from_index(q, m, i);
    for (auto& c : x) c = fq.neg(c);
    CHECK(close(twice.v[i], phi.at(q, x)));
  }
}

TEST_CASE("square-sum identity") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dist(-1000, 1000);
  for (auto [p, e, n] : {std::tuple{2u, 1u, 2u}, {3u, 1u, 2u}, {3u, 1u, 3u}, {5u, 1u, 2u}, {2u, 1u, 3u},
                         {3u, 1u, 4u}, {2u, 2u, 2u}, {5u, 1u, 3u}}) {
    FieldCtx F(p, e, n);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::int64_t> tab(F.size() * F.size());
      for (auto& v : tab) v = dist(rng);
      auto J = [&](FElem xi, FElem lam) { return tab[xi * F.size() + lam]; };
      const auto [l, r] = square_sum_sides(F, J);
      CHECK(l == r);
    }
  }
}
