#include "gammalab/bessel.hpp"

#include "gammalab/error.hpp"

#include <cmath>
#include <iomanip>

namespace gammalab {

std::vector<std::vector<unsigned>> compositions(unsigned n) {
  std::vector<std::vector<unsigned>> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  // bit i of mask set: cut after position i+1
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<unsigned> c;
    unsigned run = 1;
    for (unsigned i = 0; i + 1 < n; ++i) {
      if (mask & (1u << i)) {
        c.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    c.push_back(run);
    out.push_back(c);
  }
  return out;
}

std::vector<BesselKey> bessel_keys(const Fq& F, unsigned n) {
  std::vector<BesselKey> keys;
  for (const auto& comp : compositions(n)) {
    const std::size_t r = comp.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < r; ++i) total *= F.q() - 1;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<Fq::E> sc(r);
      std::size_t t = idx;
      for (std::size_t i = 0; i < r; ++i) {
        sc[i] = static_cast<Fq::E>(1 + t % (F.q() - 1));
        t /= F.q() - 1;
      }
      keys.emplace_back(comp, sc);
    }
  }
  return keys;
}

bool parse_antidiag(const MatF& wd, BesselKey& key) {
  const unsigned n = wd.n;
  key.first.clear();
  key.second.clear();
  unsigned off = 0;
  while (off < n) {
    unsigned c = n;
    for (unsigned j = 0; j < n; ++j)
      if (wd(off, j) != 0) {
        c = j;
        break;
      }
    if (c == n || c >= n - off) return false;
    const unsigned size = n - off - c;
    const Fq::E lam = wd(off, c);
    for (unsigned a = 0; a < size; ++a)
      if (wd(off + a, c + a) != lam) return false;
    key.first.push_back(size);
    key.second.push_back(lam);
    off += size;
  }
  return true;
}

BesselTable::BesselTable(const CuspidalRep& rep, bool psi_inverse, std::map<BesselKey, cplx> entries)
    : rep_(rep), psi_inverse_(psi_inverse), entries_(std::move(entries)) {}

cplx BesselTable::entry(const BesselKey& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(Errc::PreconditionViolated, "no Bessel table entry for key");
  return it->second;
}

cplx BesselTable::eval(const MatF& g) const {
  const Fq& F = rep_.group().fq();
  const BruhatCell cell = bruhat_cell(F, g);
  BesselKey key;
  if (!parse_antidiag(cell.wd, key)) return 0.0;
  return psi()(cell.psi_arg) * entry(key);
}

void BesselTable::write_csv(std::ostream& os) const {
  const Fq& F = rep_.group().fq();
  os << "composition,scalars,re,im\n";
  os << std::setprecision(17);
  for (const auto& [key, v] : entries_) {
    for (std::size_t i = 0; i < key.first.size(); ++i) os << (i ? " " : "") << key.first[i];
    os << ",";
    for (std::size_t i = 0; i < key.second.size(); ++i) os << (i ? " " : "") << F.log(key.second[i]);
    os << "," << v.real() << "," << v.imag() << "\n";
  }
}

cplx bessel_direct(const CuspidalRep& rep, bool psi_inverse, const MatF& g, const std::vector<MatF>& unipotents) {
  const Fq& F = rep.group().fq();
  const AddChar& psi = rep.group().psi(!psi_inverse);  // psi^{-1}
  cplx s = 0;
  for (const MatF& u : unipotents) s += rep.character(mat_mul(F, g, u)) * psi(superdiag_sum(F, u));
  return s / static_cast<double>(unipotents.size());
}

cplx bessel_direct(const CuspidalRep& rep, bool psi_inverse, const MatF& g) {
  return bessel_direct(rep, psi_inverse, g, enumerate_upper_unipotent(rep.group().fq(), rep.n()));
}

namespace {

cplx key_value(const CuspidalRep& rep, bool psi_inverse, const BesselKey& key, const std::vector<MatF>& N) {
  return bessel_direct(rep, psi_inverse, antidiag_elem(key.first, key.second, 1, false), N);
}

}  // namespace

BesselTable bessel_build(const CuspidalRep& rep, bool psi_inverse) {
  const auto keys = bessel_keys(rep.group().fq(), rep.n());
  const auto N = enumerate_upper_unipotent(rep.group().fq(), rep.n());
  std::vector<cplx> vals(keys.size());
  // Each key is summed serially inside its own iteration, so the result does
  // not depend on the thread count.
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < keys.size(); ++i) vals[i] = key_value(rep, psi_inverse, keys[i], N);
  std::map<BesselKey, cplx> entries;
  for (std::size_t i = 0; i < keys.size(); ++i) entries.emplace(keys[i], vals[i]);
  return BesselTable(rep, psi_inverse, std::move(entries));
}

BesselTable bessel_build_serial(const CuspidalRep& rep, bool psi_inverse) {
  const auto N = enumerate_upper_unipotent(rep.group().fq(), rep.n());
  std::map<BesselKey, cplx> entries;
  for (const auto& key : bessel_keys(rep.group().fq(), rep.n()))
    entries.emplace(key, key_value(rep, psi_inverse, key, N));
  return BesselTable(rep, psi_inverse, std::move(entries));
}

cplx bessel_closed_form_gl3(const CuspidalRep& rep, Fq::E l1, Fq::E l2) {
  if (rep.n() != 3) throw Error(Errc::UnsupportedN, "GL3 formula needs n = 3");
  const GroupCtx& G = rep.group();
  const FieldCtx& F = G.field();
  const Fq& fq = G.fq();
  const FElem L1 = fq.to_ambient(l1), L2 = fq.to_ambient(l2);
  const FElem target = F.mul(L1, F.mul(L2, L2));
  const FElem c = F.neg(F.inv(L2));
  cplx s = 0;
  for (std::uint64_t j = 0; j < F.order(); ++j) {
    const FElem xi = F.exp(static_cast<std::int64_t>(j));
    if (F.norm(xi, 3, 1) != target) continue;
    s += G.psi().ambient(F.mul(c, F.trace(xi, 3, 1))) * rep.theta()(xi);
  }
  const double q = static_cast<double>(G.q());
  return s / (q * q);
}

cplx bessel_closed_form_gl4(const CuspidalRep& rep, Fq::E mu, Fq::E nu) {
  if (rep.n() != 4) throw Error(Errc::UnsupportedN, "GL4 formula needs n = 4");
  const GroupCtx& G = rep.group();
  const FieldCtx& F = G.field();
  const Fq& fq = G.fq();
  const AddChar& psi = G.psi();
  const double q = static_cast<double>(G.q());
  const FElem M = fq.to_ambient(mu), Nu = fq.to_ambient(nu);
  const FElem mn = F.mul(M, Nu);
  const FElem det = F.mul(mn, mn);
  const FElem mnn = F.mul(mn, Nu);
  cplx total = 0;
  for (std::uint64_t j = 0; j < F.order(); ++j) {
    const FElem xi = F.exp(static_cast<std::int64_t>(j));
    const FElem N = F.norm(xi, 4, 1);
    if (N != det) continue;
    cplx f6p = 0;
    if (F.in_subfield(xi, 2) && !F.in_subfield(xi, 1) && mn == F.neg(F.norm(xi, 2, 1))) f6p = -q;
    const FElem a3 = F.neg(F.trace(xi, 4, 1));
    const FElem a1 = F.neg(F.mul(F.trace(F.inv(xi), 4, 1), N));
    const FElem num = F.add(a1, F.mul(a3, mn));
    cplx inner = 0;
    for (unsigned b = 1; b < fq.q(); ++b) {
      const FElem beta = fq.to_ambient(static_cast<Fq::E>(b));
      const FElem arg = F.add(F.neg(beta), F.div(num, F.mul(beta, mnn)));
      inner += psi.ambient(arg);
    }
    const cplx f6 = -(f6p + inner) / (q * q * q * q);
    total += f6 * rep.theta()(xi);
  }
  return total;
}

}  // namespace gammalab
