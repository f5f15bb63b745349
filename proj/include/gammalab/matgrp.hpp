#pragma once

#include "gammalab/ffield.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <unordered_map>
#include <vector>

namespace gammalab {

constexpr unsigned kMaxN = 6;

// n x n matrix over F_q, entries are local F_q indices.
struct MatF {
  unsigned n = 0;
  std::array<Fq::E, kMaxN * kMaxN> a{};

  Fq::E& operator()(unsigned i, unsigned j) { return a[i * kMaxN + j]; }
  Fq::E operator()(unsigned i, unsigned j) const { return a[i * kMaxN + j]; }
  bool operator==(const MatF& o) const { return n == o.n && a == o.a; }
  bool operator<(const MatF& o) const { return n != o.n ? n < o.n : a < o.a; }

  static MatF zero(unsigned n);
  static MatF identity(unsigned n);
};

MatF mat_mul(const Fq& F, const MatF& x, const MatF& y);
MatF mat_add(const Fq& F, const MatF& x, const MatF& y);
MatF mat_scale(const Fq& F, Fq::E c, const MatF& x);
MatF mat_transpose(const MatF& x);
MatF mat_inverse(const Fq& F, const MatF& x);
Fq::E mat_det(const Fq& F, const MatF& x);
unsigned mat_rank(const Fq& F, const MatF& x);
bool mat_invertible(const Fq& F, const MatF& x);
MatF block_diag(const MatF& x, const MatF& y);
// Place src with its (0,0) entry at (r0, c0) of dst.
void mat_place(MatF& dst, const MatF& src, unsigned r0, unsigned c0);
MatF mat_sub_block(const MatF& x, unsigned r0, unsigned c0, unsigned rows, unsigned cols);
// Sum of superdiagonal entries.
Fq::E superdiag_sum(const Fq& F, const MatF& u);

struct BruhatDecomp {
  MatF u1, w, d, u2;
};

// g = u1 w d u2 with u1, u2 upper unipotent, w a permutation matrix and d
// diagonal; (w, d) is unique.
BruhatDecomp bruhat(const Fq& F, const MatF& g);
// The monomial part w d together with the superdiagonal sums of u1 and u2,
// without materializing u1 and u2.
struct BruhatCell {
  MatF wd;
  Fq::E psi_arg;  // superdiag_sum(u1) + superdiag_sum(u2)
};
BruhatCell bruhat_cell(const Fq& F, const MatF& g);

enum class CosetKind { NmodG, BmodM };
// N\GL_m: canonical left-unipotent row-reduced representatives.
// B\M_m: strictly lower-triangular matrices.
std::vector<MatF> coset_reps(const Fq& F, unsigned m, CosetKind kind);
// Canonical representative of the coset N g.
MatF n_coset_canonical(const Fq& F, const MatF& g);

// Column permutation matrix of the interleaving shuffle; column j is e_{sigma(j)}.
MatF sigma_perm(unsigned n);
// antidiag(l_1 I_{t m_1}, ..., l_r I_{t m_r} [, 1 I_1]); top-right block first.
MatF antidiag_elem(const std::vector<unsigned>& weights, const std::vector<Fq::E>& scalars,
                   unsigned block_scale, bool tail_one);
// Longest Weyl element w_n (ones on the antidiagonal).
MatF long_weyl(unsigned n);

// All of GL_n(F_q) in a fixed order; intended for small groups.
std::vector<MatF> enumerate_gl(const Fq& F, unsigned n);
void for_each_gl(const Fq& F, unsigned n, const std::function<void(const MatF&)>& visit);
std::uint64_t gl_order(std::uint64_t q, unsigned n);
std::vector<MatF> enumerate_upper_unipotent(const Fq& F, unsigned n);
MatF random_gl(const Fq& F, unsigned n, std::mt19937_64& rng);
MatF random_upper_unipotent(const Fq& F, unsigned n, std::mt19937_64& rng);

// Polynomials over F_q, coefficient i is the coefficient of t^i.
using PolyF = std::vector<Fq::E>;
PolyF char_poly(const Fq& F, const MatF& g);

struct ClassType {
  bool primary = false;
  unsigned d = 0;
  unsigned c = 0;
  FElem alpha = 0;
  unsigned k = 0;
  PolyF f;
};

// Class typing with a precomputed table: monic irreducible f over F_q of
// degree d | n -> root of least dlog.
class ClassTyper {
 public:
  ClassTyper(const FieldCtx& F, const Fq& fq);
  ClassType operator()(const MatF& g) const;
  const Fq& fq() const { return *fq_; }
  // Monic irreducible polynomials of degree d (d | n), with their least-dlog root.
  std::vector<std::pair<PolyF, FElem>> irreducibles(unsigned d) const;

 private:
  std::uint64_t key(const PolyF& f) const;
  const FieldCtx* F_;
  const Fq* fq_;
  std::unordered_map<std::uint64_t, FElem> root_of_;
  std::vector<std::vector<std::pair<PolyF, FElem>>> irr_;
};

}  // namespace gammalab
