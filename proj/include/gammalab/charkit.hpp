#pragma once

#include "gammalab/ffield.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace gammalab {

using cplx = std::complex<double>;

constexpr double kTol = 1e-8;

// Absolute tolerance for a sum of `terms` unit-modulus values.
double sum_tolerance(std::uint64_t terms);

// zeta_M^k = exp(2 pi i k / M), tabulated for moderate M.
class RootTable {
 public:
  explicit RootTable(std::uint64_t M);
  std::uint64_t modulus() const { return M_; }
  cplx operator()(std::int64_t k) const;
  // Shared table for modulus M, built once per process.
  static std::shared_ptr<const RootTable> shared(std::uint64_t M);

 private:
  std::uint64_t M_;
  std::vector<cplx> z_;
};

// psi(x) = exp(2 pi i Tr_{F_q/F_p}(x) / p), or its inverse.
class AddChar {
 public:
  AddChar(const Fq& fq, bool inverse = false);
  bool inverse() const { return inverse_; }
  AddChar inverted() const { return AddChar(*fq_, !inverse_); }
  // x given as a local F_q index.
  cplx operator()(Fq::E x) const { return val_[x]; }
  // x given as an ambient element lying in F_q.
  cplx ambient(FElem x) const { return val_[fq_->from_ambient(x)]; }
  const Fq& fq() const { return *fq_; }

 private:
  const Fq* fq_;
  bool inverse_;
  std::vector<cplx> val_;
};

// theta(gen_d^j) = zeta_{q^d-1}^{k j} on F_{q^d}^x, with gen_d the canonical
// subfield generator. Since dlog(gen_d^j) = j (q^n-1)/(q^d-1) this equals
// zeta_{q^n-1}^{k dlog(xi)} after lifting k.
class MultChar {
 public:
  MultChar(const FieldCtx& F, unsigned level, std::int64_t k);
  unsigned level() const { return level_; }
  std::int64_t exponent() const { return k_; }
  std::uint64_t modulus() const { return mod_; }
  const FieldCtx& field() const { return *F_; }
  cplx operator()(FElem xi) const;
  MultChar inverse() const { return MultChar(*F_, level_, -k_); }
  // Restriction to F_{q^d}^x, d | level.
  MultChar restrict_to(unsigned d) const;
  bool is_trivial() const { return k_ == 0; }

 private:
  const FieldCtx* F_;
  unsigned level_;
  std::int64_t k_;
  std::uint64_t mod_;
  std::uint64_t lift_;
  std::shared_ptr<const RootTable> roots_;
};

bool is_regular(const MultChar& theta, unsigned n);
bool restriction_is_trivial(const MultChar& theta, unsigned d);
// Exponents k in [0, q^n - 1) of the regular characters, and the least
// representative of each Galois orbit.
std::vector<std::int64_t> regular_exponents(const FieldCtx& F, unsigned n);
std::vector<std::int64_t> regular_orbit_reps(const FieldCtx& F, unsigned n);
std::vector<std::int64_t> galois_orbit(const FieldCtx& F, unsigned n, std::int64_t k);

cplx gauss_sum(const MultChar& chi, const AddChar& psi);
cplx kloosterman(FElem a, FElem b, const AddChar& psi);

// Complex function on F_q^m; index = sum_i x_i q^i with x_i local F_q indices.
struct CFun {
  unsigned m = 0;
  std::vector<cplx> v;

  static CFun zeros(unsigned q, unsigned m);
  static CFun constant(unsigned q, unsigned m, cplx c);
  static CFun delta(unsigned q, unsigned m, const std::vector<Fq::E>& at);
  cplx at(unsigned q, const std::vector<Fq::E>& x) const;
};

std::size_t vec_index(unsigned q, const std::vector<Fq::E>& x);
std::vector<Fq::E> vec_from_index(unsigned q, unsigned m, std::size_t idx);

CFun fourier(const CFun& phi, const AddChar& psi);

// Both sides of the square-sum identity for a tabulated J(xi, lambda) with
// xi in F_{q^n}^x and lambda in F_q^x; integer valued so equality is exact.
// Returns (2 * lhs, 2 * rhs) for even n and (lhs, rhs) for odd n.
using SquareSumJ = std::function<std::int64_t(FElem, FElem)>;
std::pair<std::int64_t, std::int64_t> square_sum_sides(const FieldCtx& F, const SquareSumJ& J);

}  // namespace gammalab
