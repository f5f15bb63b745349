#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gammalab/error.hpp"
#include "gammalab/ffield.hpp"

#include <random>
#include <set>

using namespace gammalab;

TEST_CASE("build_field sizes and generator order") {
  FieldCtx F4(2, 1, 2);
  CHECK(F4.size() == 4);
  CHECK(F4.order() == 3);
  FieldCtx F81(3, 1, 4);
  CHECK(F81.size() == 81);
  // gen has full order: powers below the order never return to 1
  for (std::uint64_t j = 1; j < F81.order(); ++j) CHECK(F81.exp(static_cast<std::int64_t>(j)) != 1);
  CHECK(F81.pow(F81.gen(), static_cast<std::int64_t>(F81.order())) == 1);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(FieldCtx(4, 1, 1), Error);
  CHECK_THROWS_AS(FieldCtx(2, 1, 25), Error);
  FieldCtx F(3, 1, 2);
  CHECK_THROWS_AS(F.inv(0), Error);
  CHECK_THROWS_AS(F.dlog(0), Error);
  CHECK_THROWS_AS(F.norm(F.gen(), 1, 1), Error);
}

TEST_CASE("subfield lattice of F_64") {
  FieldCtx F(2, 1, 6);
  for (unsigned d : {1u, 2u, 3u, 6u}) {
    std::vector<FElem> sub;
    for (FElem x = 0; x < F.size(); ++x)
      if (F.in_subfield(x, d)) sub.push_back(x);
    CHECK(sub.size() == (std::size_t{1} << d));
    std::set<FElem> s(sub.begin(), sub.end());
    for (FElem a : sub)
      for (FElem b : sub) {
        CHECK(s.count(F.add(a, b)) == 1);
        CHECK(s.count(F.mul(a, b)) == 1);
      }
  }
}

TEST_CASE("field axioms, small oracle: F_9 by hand-built polynomial arithmetic") {
  FieldCtx F(3, 1, 2);
  // independent oracle: pairs (c0, c1) mod x^2 + a1 x + a0 from the chosen modulus
  const auto& m = F.modulus();
  auto mul = [&](unsigned a, unsigned b) {
    const unsigned a0 = a % 3, a1 = a / 3, b0 = b % 3, b1 = b / 3;
    unsigned c0 = a0 * b0, c1 = a0 * b1 + a1 * b0, c2 = a1 * b1;
    // x^2 = -(m0 + m1 x)
    c0 += 3 * 3 - c2 * m[0] % 3;
    c1 += 3 * 3 - c2 * m[1] % 3;
    return (c0 % 3) + 3 * (c1 % 3);
  };
  for (unsigned a = 0; a < 9; ++a)
    for (unsigned b = 0; b < 9; ++b) {
      CHECK(F.mul(a, b) == mul(a, b));
      CHECK(F.add(a, b) == (a % 3 + b % 3) % 3 + 3 * ((a / 3 + b / 3) % 3));
    }
}

TEST_CASE("identities") {
  FieldCtx F(2, 2, 2);
  const FElem g = F.gen();
  CHECK(F.mul(g, F.inv(g)) == 1);
  for (FElem a = 0; a < F.size(); ++a) CHECK(F.add(a, a) == 0);
  for (FElem a = 0; a < F.size(); ++a)
    if (F.in_subfield(a, 1)) CHECK(F.frobenius(a) == a);
  CHECK(F.dlog(1) == 0);
}

TEST_CASE("dlog round trip and norm/trace homomorphisms") {
  for (auto [p, e, n] : {std::tuple{2u, 1u, 4u}, {3u, 1u, 3u}, {5u, 1u, 2u}, {2u, 2u, 2u}, {3u, 2u, 2u}}) {
    FieldCtx F(p, e, n);
    for (FElem x = 1; x < F.size(); ++x) CHECK(F.exp(F.dlog(x)) == x);
    for (unsigned d1 = 1; d1 <= n; ++d1) {
      if (n % d1) continue;
      for (unsigned d2 = 1; d2 <= d1; ++d2) {
        if (d1 % d2) continue;
        std::vector<FElem> sub;
        for (FElem x = 0; x < F.size(); ++x)
          if (F.in_subfield(x, d1)) sub.push_back(x);
        for (FElem x : sub) {
          CHECK(F.in_subfield(F.norm(x, d1, d2), d2));
          CHECK(F.in_subfield(F.trace(x, d1, d2), d2));
        }
        for (FElem x : sub)
          for (FElem y : sub) {
            CHECK(F.norm(F.mul(x, y), d1, d2) == F.mul(F.norm(x, d1, d2), F.norm(y, d1, d2)));
            CHECK(F.trace(F.add(x, y), d1, d2) == F.add(F.trace(x, d1, d2), F.trace(y, d1, d2)));
          }
        CHECK(F.trace(1, d1, d2) == F.from_int(d1 / d2));
      }
    }
    // N_{F_{q^n}/F_q}(gen) generates F_q^x
    const FElem N = F.norm(F.gen(), n, 1);
    std::set<FElem> pw;
    FElem cur = 1;
    for (std::uint64_t i = 0; i < F.q() - 1; ++i) {
      pw.insert(cur);
      cur = F.mul(cur, N);
    }
    CHECK(pw.size() == F.q() - 1);
  }
}

TEST_CASE("squares are detected by the norm") {
  for (auto [p, e, n] : {std::tuple{3u, 1u, 2u}, {3u, 1u, 3u}, {5u, 1u, 2u}, {3u, 2u, 2u}}) {
    FieldCtx F(p, e, n);
    std::set<FElem> sq, sq_q;
    for (FElem x = 1; x < F.size(); ++x) sq.insert(F.mul(x, x));
    for (FElem x = 1; x < F.size(); ++x)
      if (F.in_subfield(x, 1)) sq_q.insert(F.mul(x, x));
    for (FElem x = 1; x < F.size(); ++x) CHECK((sq.count(x) == 1) == (sq_q.count(F.norm(x, n, 1)) == 1));
  }
}

TEST_CASE("F_q local tables agree with ambient arithmetic") {
  FieldCtx F(3, 2, 2);
  Fq fq(F);
  CHECK(fq.q() == 9);
  for (unsigned a = 0; a < 9; ++a)
    for (unsigned b = 0; b < 9; ++b) {
      const auto A = static_cast<Fq::E>(a), B = static_cast<Fq::E>(b);
      CHECK(fq.to_ambient(fq.add(A, B)) == F.add(fq.to_ambient(A), fq.to_ambient(B)));
      CHECK(fq.to_ambient(fq.mul(A, B)) == F.mul(fq.to_ambient(A), fq.to_ambient(B)));
      CHECK(fq.from_ambient(fq.to_ambient(A)) == A);
    }
}
