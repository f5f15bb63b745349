#pragma once

#include "gammalab/exjs.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace gammalab {

// X^shift * num(X) / den(X) with complex coefficients, X = q^{-s}.
// Reduced form: num and den coprime, den(0) = 1, num(0) != 0 unless zero.
class RatQS {
 public:
  using Poly = std::vector<cplx>;  // Poly[i] is the coefficient of X^i

  RatQS() : num_{0.0}, den_{1.0} {}
  RatQS(cplx c) : num_{c}, den_{1.0} { reduce(); }
  RatQS(Poly num, Poly den, int shift = 0);
  static RatQS monomial(cplx c, int power);
  // 1 - c X^m as a polynomial.
  static Poly one_minus(cplx c, unsigned m);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  int shift() const { return shift_; }

  bool is_zero() const { return num_.size() == 1 && num_[0] == 0.0; }
  bool is_constant() const { return shift_ == 0 && num_.size() == 1 && den_.size() == 1; }
  // X^k with k = shift and num, den constants.
  bool is_monomial() const { return num_.size() == 1 && den_.size() == 1; }
  cplx constant() const { return num_[0]; }
  bool has_pole_off_zero() const { return den_.size() > 1; }

  cplx operator()(cplx X) const;
  RatQS operator+(const RatQS& o) const;
  RatQS operator-(const RatQS& o) const;
  RatQS operator*(const RatQS& o) const;
  RatQS operator/(const RatQS& o) const;
  RatQS inverse() const;

  // f(X) -> f(q^{-1} X^{-1}), i.e. s -> 1 - s.
  RatQS reflect(double q) const;

  // Max coefficient of num*o.den - o.num*den after shift alignment, relative
  // to the larger coefficient scale.
  double residual(const RatQS& o) const;
  bool approx_equal(const RatQS& o, double tol = 1e-9) const { return residual(o) < tol; }

  nlohmann::json to_json() const;
  static RatQS from_json(const nlohmann::json& j);
  std::string str() const;

 private:
  void reduce();
  Poly num_, den_;
  int shift_ = 0;
};

// Polynomial helpers, exposed for tests.
RatQS::Poly poly_mul(const RatQS::Poly& a, const RatQS::Poly& b);
RatQS::Poly poly_gcd(const RatQS::Poly& a, const RatQS::Poly& b, double tol = 1e-9);
// lcm normalized to constant term 1; inputs must have nonzero constant term.
RatQS::Poly poly_lcm(const RatQS::Poly& a, const RatQS::Poly& b, double tol = 1e-9);
// a = q b exactly up to tol; false if b does not divide a.
bool poly_divides(const RatQS::Poly& b, const RatQS::Poly& a, double tol = 1e-9);

// Residue-field data of a level-zero lift: the Bessel table of pi_0 and
// c = omega_pi(varpi).
struct LevelZeroCtx {
  const BesselTable* table;
  cplx c;
  unsigned n() const { return table->rep().n(); }
  unsigned m() const { return n() / 2; }
  double q() const { return table->rep().group().q(); }
};

// 1 / (1 - c X^m).
RatQS l_factor(cplx c, unsigned m);
// prod over alpha^m = c of (1 - alpha X), as a polynomial.
RatQS::Poly root_product(cplx c, unsigned m);

RatQS lifted_js(const LevelZeroCtx& ctx, const WhittakerFun& W0, const CFun& phi0);
RatQS lifted_dual_js(const LevelZeroCtx& ctx, const WhittakerFun& W0, const CFun& phi0);

// js(W0, 1).
cplx shalika_functional_value(const LevelZeroCtx& ctx, const WhittakerFun& W0);

struct LocalFactors {
  bool shalika = false;
  RatQS gamma, L, L_dual, eps;
};
// gamma from lifted values of a pair with nonzero lifted js: the Shalika
// witness against 1 when pi_0 has a Shalika vector, else the canonical pair.
RatQS local_gamma(const LevelZeroCtx& ctx);
LocalFactors local_factors(const LevelZeroCtx& ctx);
// 1 / lcm of the reduced lifted_js denominators over the canonical pair, the
// normalized Shalika witness and `trials` random translates against deltas and 1.
RatQS l_from_lifts(const LevelZeroCtx& ctx, unsigned trials, std::uint64_t seed);
// prod (1 - alpha X)^{-1} over the m-th roots alpha of c with nonzero Shalika
// functional value of the witness.
RatQS shalika_l_product(const LevelZeroCtx& ctx);

struct ModifiedFe {
  RatQS gamma;
  double residual = 0.0;
  std::uint64_t pairs = 0;
  bool exhaustive = false;
};
// c = 1 modified equation: LHS = dual + q^{-m} X^{-m} fourier(phi)(0) / (1 - q^{-m} X^{-m}) js(W, 1),
// RHS = js + X^m phi(0) / (1 - X^m) js(W, 1). gamma~ = LHS / RHS at the canonical pair.
ModifiedFe modified_fe_check(const BesselTable& table, const FeOptions& opt = {});

}  // namespace gammalab
