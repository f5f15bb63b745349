#pragma once

#include "gammalab/cuspchar.hpp"

#include <map>
#include <ostream>
#include <utility>
#include <vector>

namespace gammalab {

// (composition (n_1..n_r) of n, scalars (l_1..l_r)) for antidiag(l_1 I_{n_1}, ..., l_r I_{n_r}).
using BesselKey = std::pair<std::vector<unsigned>, std::vector<Fq::E>>;

std::vector<std::vector<unsigned>> compositions(unsigned n);
std::vector<BesselKey> bessel_keys(const Fq& F, unsigned n);
// Parse a monomial matrix as antidiag(l_1 I_{n_1}, ...); false if it has another shape.
bool parse_antidiag(const MatF& wd, BesselKey& key);

class BesselTable {
 public:
  BesselTable(const CuspidalRep& rep, bool psi_inverse, std::map<BesselKey, cplx> entries);

  const CuspidalRep& rep() const { return rep_; }
  bool psi_inverse() const { return psi_inverse_; }
  const AddChar& psi() const { return rep_.group().psi(psi_inverse_); }
  const std::map<BesselKey, cplx>& entries() const { return entries_; }
  cplx entry(const BesselKey& key) const;

  // Bruhat reduction followed by a table lookup.
  cplx eval(const MatF& g) const;

  void write_csv(std::ostream& os) const;

 private:
  CuspidalRep rep_;
  bool psi_inverse_;
  std::map<BesselKey, cplx> entries_;
};

// (1/|N|) sum_{u in N} chi(g u) psi^{-1}(u), for any g.
cplx bessel_direct(const CuspidalRep& rep, bool psi_inverse, const MatF& g);
cplx bessel_direct(const CuspidalRep& rep, bool psi_inverse, const MatF& g, const std::vector<MatF>& unipotents);

BesselTable bessel_build(const CuspidalRep& rep, bool psi_inverse = false);
BesselTable bessel_build_serial(const CuspidalRep& rep, bool psi_inverse = false);

// Printed closed forms. Scalars are local F_q indices.
cplx bessel_closed_form_gl3(const CuspidalRep& rep, Fq::E l1, Fq::E l2);
cplx bessel_closed_form_gl4(const CuspidalRep& rep, Fq::E mu, Fq::E nu);

}  // namespace gammalab
