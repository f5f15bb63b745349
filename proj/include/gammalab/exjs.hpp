#pragma once

#include "gammalab/bessel.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gammalab {

// Linear combination of right translates of a Bessel function, possibly
// flipped into the contragredient model. A plain term evaluates to
// scale * B(g Q); a flipped term to scale * B(w_n ᵗ(g P)^{-1} Q).
class WhittakerFun {
 public:
  explicit WhittakerFun(const BesselTable& table);
  static WhittakerFun translate(const BesselTable& table, const MatF& h, cplx scale = 1.0);

  unsigned n() const { return table_->rep().n(); }
  const BesselTable& table() const { return *table_; }
  bool flipped() const { return flipped_; }
  // Character of the Whittaker model W lives in.
  const AddChar& psi() const;

  cplx operator()(const MatF& g) const;
  // g -> W(g s)
  WhittakerFun right_translate(const MatF& s) const;
  // g -> W(w_n ᵗg^{-1} J) with J the block swap; an involution.
  WhittakerFun flip() const;
  WhittakerFun scaled(cplx c) const;
  WhittakerFun& operator+=(const WhittakerFun& o);

 private:
  struct Term {
    cplx scale;
    MatF P, Q;
  };
  WhittakerFun(const BesselTable* t, bool flipped) : table_(t), flipped_(flipped) {}
  const BesselTable* table_;
  bool flipped_ = false;
  std::vector<Term> terms_;
};

// Block helpers for n = 2m or 2m + 1.
MatF shalika_u(const Fq& F, unsigned n, const MatF& X);              // [[I, X], [0, I]] (+ 1)
MatF shalika_d(unsigned n, const MatF& g);                           // diag(g, g) (+ 1)
MatF shalika_lower(const Fq& F, unsigned n, const std::vector<Fq::E>& z);  // odd: Z in the last row
MatF shalika_upper(const Fq& F, unsigned n, const std::vector<Fq::E>& y);  // odd: Y in the last column
MatF block_swap(unsigned n);                                         // [[0, I], [I, 0]] (+ 1)

// Precomputed summands of the Jacquet-Shalika sum and of the direct dual
// formula for GL_n(F_q).
class JsFrame {
 public:
  JsFrame(const Fq& F, unsigned n);
  unsigned n() const { return n_; }
  unsigned m() const { return n_ / 2; }
  const Fq& fq() const { return *F_; }
  std::size_t phi_size() const { return phi_size_; }
  double norm() const { return norm_; }

  // js(W, phi) = sum_i J[i] phi[i] and dual_js(W, phi) = sum_i D[i] fourier(phi)[i].
  std::vector<cplx> js_buckets(const WhittakerFun& W) const;
  std::vector<cplx> dual_buckets(const WhittakerFun& W) const;

 private:
  struct Term {
    MatF k, k_dual;
    Fq::E neg_tr;
    std::size_t idx, dual_idx;
  };
  const Fq* F_;
  unsigned n_;
  std::size_t phi_size_;
  double norm_;
  std::vector<Term> terms_;
};

// Fourier kernel of the odd dual: Printed uses psi as displayed, Equivariant
// uses psi^{-1}. They agree for even n and in characteristic 2.
enum class DualConvention { Equivariant, Printed };

cplx js(const JsFrame& fr, const WhittakerFun& W, const CFun& phi);
cplx dual_js(const JsFrame& fr, const WhittakerFun& W, const CFun& phi,
             DualConvention c = DualConvention::Equivariant);
// js of the flipped function under the inverse character against fourier(phi).
cplx dual_js_definition(const JsFrame& fr, const WhittakerFun& W, const CFun& phi,
                        DualConvention c = DualConvention::Equivariant);
cplx js(const WhittakerFun& W, const CFun& phi);
cplx dual_js(const WhittakerFun& W, const CFun& phi);

// Element of the Shalika subgroup: [[g, X], [0, g]] for even n,
// [[g, X, Y], [0, g, 0], [0, Z, 1]] for odd n.
struct ShalikaElem {
  MatF g, X;
  std::vector<Fq::E> Y, Z;
};
MatF shalika_matrix(const Fq& F, unsigned n, const ShalikaElem& s);
CFun shalika_action(const Fq& F, const AddChar& psi, unsigned n, const ShalikaElem& s, const CFun& phi);
// psi(tr(X g^{-1})); defined on the whole group for even n and on the mirabolic part for odd n.
cplx shalika_character(const Fq& F, const AddChar& psi, const ShalikaElem& s);

// The pair with js = 1: scaled translate by sigma^{-1} and delta_eps (even) or delta_0 (odd).
WhittakerFun canonical_whittaker(const BesselTable& table);
CFun canonical_phi(const Fq& F, unsigned n);

enum class GammaRoute { Ratio, Torus, ClosedForm };
const char* route_name(GammaRoute r);

struct GammaResult {
  cplx value;
  GammaRoute route = GammaRoute::Ratio;
  double residual = 0.0;  // functional-equation residual (ratio route only)
  std::uint64_t pairs = 0;
  bool exhaustive = false;
};

struct FeOptions {
  std::uint64_t seed = 1;
  unsigned trials = 100;
  double tol = 1e-8;
  std::uint64_t exhaustive_limit = 100000;
  bool force_exhaustive = false;
  DualConvention dual = DualConvention::Equivariant;
};

// Max |dual_js - gamma js| over translate/delta pairs; exhaustive when the
// pair count is within the limit.
struct FeCheck {
  double residual = 0.0;
  std::uint64_t pairs = 0;
  bool exhaustive = false;
};
// Translates h used by fe_check: all of GL_n when |GL_n| q^m is within the
// limit, else ceil(trials / q^m) draws from mt19937_64(seed).
struct FePlan {
  std::vector<MatF> hs;
  bool exhaustive = false;
};
FePlan fe_plan(const GroupCtx& G, const FeOptions& opt);
FeCheck fe_check(const BesselTable& table, cplx gamma, const FeOptions& opt);
FeCheck fe_check_serial(const BesselTable& table, cplx gamma, const FeOptions& opt);

bool admits_shalika_vector(const CuspidalRep& rep);

GammaResult gamma_ratio(const BesselTable& table, const FeOptions& opt = {});
GammaResult gamma_torus(const BesselTable& table);
// GL4 Kloosterman argument: Printed is Tr(xi^2)/N^2 +- N Tr(xi^-2);
// Rederived is Tr(xi^-2) +- Tr(xi^2)/N, from the F6 Bessel formula.
enum class ClosedVariant { Rederived, Printed };
GammaResult gamma_closed(const CuspidalRep& rep, bool psi_inverse = false,
                         ClosedVariant variant = ClosedVariant::Rederived);

struct S0S1 {
  cplx s0, s1, gamma;
};
S0S1 s0_s1_decomposition(const BesselTable& table);

struct ShalikaReport {
  bool criterion = false;           // (q^m - 1) | k
  cplx witness_js;                  // js(W_sh, 1)
  cplx witness_at_sigma;            // W_sh(sigma)
  double broken_dual = 0.0;         // |dual_js(W, 1)| for js(W, 1) = 1
  double max_js_translates = 0.0;   // max |js(B(. h), 1)| over checked h
  std::uint64_t translates = 0;
  bool search_nonzero = false;      // some W with js(W, 1) != 0 was found
  bool consistent() const { return criterion == search_nonzero; }
};
// Witness W_sh(h) = sum_{g in N\P_m} sum_X B(h U(X) D(g) sigma^{-1}) psi(-tr X).
WhittakerFun shalika_witness(const BesselTable& table);
ShalikaReport shalika_detect(const BesselTable& table, const FeOptions& opt = {});

struct HomDim {
  double value = 0.0;
  std::uint64_t order = 0;
};
// (1/|H|) sum_{h in H} chi(h) for H = {diag(g1, g2) : g2 in P_m} (even) or
// {[[g1, 0, u], [0, g2, 0], [0, 0, 1]]} (odd).
std::vector<MatF> homdim_subgroup(const Fq& F, unsigned n);
HomDim homdim_check(const CuspidalRep& rep);

}  // namespace gammalab
