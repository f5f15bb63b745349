#pragma once

#include <cstdint>
#include <vector>

namespace gammalab {

// Index of an element of the ambient field: base-p digits are the
// coefficients in the polynomial basis 1, x, x^2, ...
using FElem = std::uint32_t;

// The ambient field F_{p^{e n}}. Every subfield F_{q^d}, d | n, lives inside
// it and embedding is the identity on indices.
class FieldCtx {
 public:
  FieldCtx(unsigned p, unsigned e, unsigned n);

  unsigned p() const { return p_; }
  unsigned e() const { return e_; }
  unsigned n() const { return n_; }
  unsigned degree() const { return e_ * n_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t order() const { return size_ - 1; }
  // Number of elements of the degree-d subfield over F_q.
  std::uint64_t q_pow(unsigned d) const;

  // Lower coefficients c_0..c_{D-1} of the monic modulus.
  const std::vector<unsigned>& modulus() const { return modulus_; }
  FElem gen() const { return exp_[1 % exp_.size()]; }
  // gen^{(q^n-1)/(q^d-1)}, generator of F_{q^d}^x.
  FElem subfield_gen(unsigned d) const;

  FElem zero() const { return 0; }
  FElem one() const { return 1; }
  FElem add(FElem a, FElem b) const;
  FElem sub(FElem a, FElem b) const;
  FElem neg(FElem a) const;
  FElem mul(FElem a, FElem b) const;
  FElem inv(FElem a) const;
  FElem div(FElem a, FElem b) const;
  FElem pow(FElem a, std::int64_t k) const;
  FElem frobenius(FElem a) const { return frobenius(a, 1); }
  // a^{q^i}
  FElem frobenius(FElem a, unsigned i) const;

  // gen^j for any integer j.
  FElem exp(std::int64_t j) const;
  std::uint32_t dlog(FElem a) const;

  bool in_subfield(FElem a, unsigned d) const;
  FElem norm(FElem x, unsigned from_deg, unsigned to_deg) const;
  FElem trace(FElem x, unsigned from_deg, unsigned to_deg) const;
  FElem embed(FElem x, unsigned from_deg) const;

  // Elements of the prime field F_p have indices 0..p-1.
  FElem from_int(std::int64_t v) const;

 private:
  unsigned p_, e_, n_;
  std::uint64_t q_, size_;
  std::vector<std::uint64_t> ppow_;
  std::vector<unsigned> modulus_;
  std::vector<FElem> exp_;
  std::vector<std::uint32_t> log_;
};

// F_q with local indices: 0 is zero, i >= 1 is gen_1^{i-1} where gen_1 is the
// canonical generator of the degree-1 subfield. Dense add/mul tables.
class Fq {
 public:
  using E = std::uint16_t;

  explicit Fq(const FieldCtx& F);

  unsigned q() const { return q_; }
  E add(E a, E b) const { return add_[a * q_ + b]; }
  E sub(E a, E b) const { return add_[a * q_ + neg_[b]]; }
  E neg(E a) const { return neg_[a]; }
  E mul(E a, E b) const { return mul_[a * q_ + b]; }
  E inv(E a) const;
  E div(E a, E b) const { return mul(a, inv(b)); }
  E one() const { return 1; }
  // gen_1^j
  E exp(std::int64_t j) const;
  unsigned log(E a) const { return a - 1u; }

  FElem to_ambient(E a) const { return amb_[a]; }
  E from_ambient(FElem x) const;
  const FieldCtx& field() const { return *F_; }

 private:
  const FieldCtx* F_;
  unsigned q_;
  std::vector<E> add_, mul_, neg_;
  std::vector<FElem> amb_;
};

bool is_prime(std::uint64_t v);

}  // namespace gammalab
