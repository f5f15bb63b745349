#pragma once

#include "gammalab/charkit.hpp"
#include "gammalab/matgrp.hpp"

#include <map>
#include <memory>
#include <string>
#include <tuple>

namespace gammalab {

// Everything needed to work with GL_n(F_q): the ambient field F_{q^n}, the
// F_q tables, class typing and the trace character psi.
class GroupCtx {
 public:
  GroupCtx(unsigned p, unsigned e, unsigned n);
  GroupCtx(const GroupCtx&) = delete;
  GroupCtx& operator=(const GroupCtx&) = delete;

  unsigned n() const { return n_; }
  unsigned q() const { return fq_->q(); }
  const FieldCtx& field() const { return *F_; }
  const Fq& fq() const { return *fq_; }
  const ClassTyper& typer() const { return *typer_; }
  const AddChar& psi() const { return *psi_; }
  const AddChar& psi_inv() const { return *psi_inv_; }
  const AddChar& psi(bool inverse) const { return inverse ? *psi_inv_ : *psi_; }

 private:
  unsigned n_;
  std::unique_ptr<FieldCtx> F_;
  std::unique_ptr<Fq> fq_;
  std::unique_ptr<ClassTyper> typer_;
  std::unique_ptr<AddChar> psi_, psi_inv_;
};

class CuspidalRep {
 public:
  CuspidalRep(const GroupCtx& G, std::int64_t k);

  const GroupCtx& group() const { return *G_; }
  unsigned n() const { return G_->n(); }
  const MultChar& theta() const { return theta_; }
  const MultChar& central_char() const { return central_; }
  std::int64_t k() const { return theta_.exponent(); }
  // The contragredient, attached to theta^{-1}.
  CuspidalRep contragredient() const { return CuspidalRep(*G_, -k()); }

  cplx character(const MatF& g) const;
  cplx character(const ClassType& ct) const;
  double degree() const;

 private:
  const GroupCtx* G_;
  MultChar theta_;
  MultChar central_;
};

struct OracleCheck {
  std::string name;
  bool ok = false;
  double residual = 0.0;
};

struct IrreducibilityReport {
  double inner_product = 0.0;  // <chi, chi>
  double degree = 0.0;
  std::vector<OracleCheck> checks;
  bool ok() const;
};

// Histogram of primary class types of GL_n(F_q): (d, k, alpha) -> count.
// Non-primary elements are dropped since the cuspidal character vanishes there.
struct ClassKey {
  unsigned d, k;
  FElem alpha;
  bool operator==(const ClassKey& o) const = default;
  bool operator<(const ClassKey& o) const {
    return std::tie(d, k, alpha) < std::tie(o.d, o.k, o.alpha);
  }
};
using ClassHistogram = std::map<ClassKey, std::uint64_t>;

// Full enumeration of GL_n(F_q).
ClassHistogram class_histogram_serial(const GroupCtx& G);
ClassHistogram class_histogram_parallel(const GroupCtx& G);
// Same histogram from conjugacy-class sizes: for each monic irreducible f of
// degree d | n and each partition lambda of n/d, the class of that type has
// |GL_n| / |C(g)| elements, with |C(g)| the centralizer order of a unipotent
// element of type lambda in GL_{n/d}(F_{q^d}).
ClassHistogram class_histogram_weighted(const GroupCtx& G);

// Checks (a)-(d): <chi,chi> = 1, chi(1) = prod (q^i - 1), chi(g^{-1}) = conj chi(g)
// and class constancy on sampled conjugates.
IrreducibilityReport verify_irreducible(const CuspidalRep& rep, const ClassHistogram& hist,
                                        std::uint64_t seed = 1, unsigned samples = 200);

}  // namespace gammalab
