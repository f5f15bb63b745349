#include "gammalab/charkit.hpp"

#include "gammalab/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <set>

namespace gammalab {

double sum_tolerance(std::uint64_t terms) {
  return terms > 1000000 ? static_cast<double>(terms) * 1e-14 : kTol;
}

namespace {
constexpr std::uint64_t kMaxTable = std::uint64_t{1} << 20;

cplx unit_root(std::uint64_t r, std::uint64_t M) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(M));
}
}  // namespace

RootTable::RootTable(std::uint64_t M) : M_(M) {
  if (M <= kMaxTable) {
    z_.resize(M);
    for (std::uint64_t r = 0; r < M; ++r) z_[r] = unit_root(r, M);
  }
}

cplx RootTable::operator()(std::int64_t k) const {
  std::int64_t r = k % static_cast<std::int64_t>(M_);
  if (r < 0) r += static_cast<std::int64_t>(M_);
  if (!z_.empty()) return z_[static_cast<std::size_t>(r)];
  return unit_root(static_cast<std::uint64_t>(r), M_);
}

std::shared_ptr<const RootTable> RootTable::shared(std::uint64_t M) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const RootTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const RootTable>(M);
  cache.emplace(M, t);
  return t;
}

AddChar::AddChar(const Fq& fq, bool inverse) : fq_(&fq), inverse_(inverse) {
  const FieldCtx& F = fq.field();
  const unsigned p = F.p();
  val_.resize(fq.q());
  for (unsigned a = 0; a < fq.q(); ++a) {
    const FElem x = fq.to_ambient(static_cast<Fq::E>(a));
    // Tr_{F_q/F_p}(x) = sum of x^{p^i}, i < e; F_p has indices 0..p-1.
    FElem tr = 0;
    FElem cur = x;
    for (unsigned i = 0; i < F.e(); ++i) {
      tr = F.add(tr, cur);
      cur = F.pow(cur, p);
    }
    const std::int64_t s = inverse ? -static_cast<std::int64_t>(tr) : static_cast<std::int64_t>(tr);
    std::int64_t r = s % p;
    if (r < 0) r += p;
    val_[a] = unit_root(static_cast<std::uint64_t>(r), p);
  }
}

MultChar::MultChar(const FieldCtx& F, unsigned level, std::int64_t k) : F_(&F), level_(level) {
  if (level == 0 || F.n() % level != 0) throw Error(Errc::NotInSubfield, "level must divide n");
  mod_ = F.q_pow(level) - 1;
  std::int64_t r = k % static_cast<std::int64_t>(mod_);
  if (r < 0) r += static_cast<std::int64_t>(mod_);
  k_ = r;
  lift_ = F.order() / mod_;
  roots_ = RootTable::shared(F.order());
}

cplx MultChar::operator()(FElem xi) const {
  if (xi == 0) throw Error(Errc::ZeroHasNoLog, "character at zero");
  const std::uint64_t l = F_->dlog(xi);
  if (l % lift_ != 0) throw Error(Errc::NotInSubfield, "argument outside character domain");
  const auto prod = static_cast<unsigned __int128>(static_cast<std::uint64_t>(k_)) * l;
  return (*roots_)(static_cast<std::int64_t>(prod % F_->order()));
}

MultChar MultChar::restrict_to(unsigned d) const {
  if (d == 0 || level_ % d != 0) throw Error(Errc::NotInSubfield, "restriction degree must divide level");
  return MultChar(*F_, d, k_);
}

std::vector<std::int64_t> galois_orbit(const FieldCtx& F, unsigned n, std::int64_t k) {
  const auto M = static_cast<std::int64_t>(F.q_pow(n) - 1);
  const auto q = static_cast<std::int64_t>(F.q());
  std::vector<std::int64_t> orb;
  std::int64_t cur = ((k % M) + M) % M;
  for (unsigned i = 0; i < n; ++i) {
    orb.push_back(cur);
    cur = static_cast<std::int64_t>((static_cast<__int128>(cur) * q) % M);
  }
  return orb;
}

bool is_regular(const MultChar& theta, unsigned n) {
  if (theta.level() != n) throw Error(Errc::PreconditionViolated, "level must equal n");
  const auto orb = galois_orbit(theta.field(), n, theta.exponent());
  std::set<std::int64_t> s(orb.begin(), orb.end());
  return s.size() == n;
}

bool restriction_is_trivial(const MultChar& theta, unsigned d) {
  if (d == 0 || theta.level() % d != 0) throw Error(Errc::PreconditionViolated, "d must divide the level");
  const auto m = static_cast<std::int64_t>(theta.field().q_pow(d) - 1);
  return theta.exponent() % m == 0;
}

std::vector<std::int64_t> regular_exponents(const FieldCtx& F, unsigned n) {
  std::vector<std::int64_t> out;
  const auto M = static_cast<std::int64_t>(F.q_pow(n) - 1);
  for (std::int64_t k = 0; k < M; ++k)
    if (is_regular(MultChar(F, n, k), n)) out.push_back(k);
  return out;
}

std::vector<std::int64_t> regular_orbit_reps(const FieldCtx& F, unsigned n) {
  std::vector<std::int64_t> out;
  for (std::int64_t k : regular_exponents(F, n)) {
    const auto orb = galois_orbit(F, n, k);
    if (*std::min_element(orb.begin(), orb.end()) == k) out.push_back(k);
  }
  return out;
}

cplx gauss_sum(const MultChar& chi, const AddChar& psi) {
  if (chi.level() != 1) throw Error(Errc::PreconditionViolated, "gauss sum needs a character of F_q");
  const Fq& fq = psi.fq();
  cplx s = 0;
  for (unsigned a = 1; a < fq.q(); ++a) {
    const auto e = static_cast<Fq::E>(a);
    s += chi(fq.to_ambient(fq.inv(e))) * psi(e);
  }
  return s;
}

cplx kloosterman(FElem a, FElem b, const AddChar& psi) {
  const Fq& fq = psi.fq();
  const Fq::E la = fq.from_ambient(a), lb = fq.from_ambient(b);
  cplx s = 0;
  for (unsigned x = 1; x < fq.q(); ++x) {
    const auto e = static_cast<Fq::E>(x);
    s += psi(fq.mul(la, e)) * psi(fq.div(lb, e));
  }
  return s;
}

std::size_t vec_index(unsigned q, const std::vector<Fq::E>& x) {
  std::size_t idx = 0, w = 1;
  for (Fq::E c : x) {
    idx += c * w;
    w *= q;
  }
  return idx;
}

std::vector<Fq::E> vec_from_index(unsigned q, unsigned m, std::size_t idx) {
  std::vector<Fq::E> x(m);
  for (unsigned i = 0; i < m; ++i) {
    x[i] = static_cast<Fq::E>(idx % q);
    idx /= q;
  }
  return x;
}

static std::size_t ipow(unsigned q, unsigned m) {
  std::size_t r = 1;
  for (unsigned i = 0; i < m; ++i) r *= q;
  return r;
}

CFun CFun::zeros(unsigned q, unsigned m) { return CFun{m, std::vector<cplx>(ipow(q, m), 0.0)}; }

CFun CFun::constant(unsigned q, unsigned m, cplx c) { return CFun{m, std::vector<cplx>(ipow(q, m), c)}; }

CFun CFun::delta(unsigned q, unsigned m, const std::vector<Fq::E>& at) {
  CFun f = zeros(q, m);
  f.v[vec_index(q, at)] = 1.0;
  return f;
}

cplx CFun::at(unsigned q, const std::vector<Fq::E>& x) const { return v[vec_index(q, x)]; }

CFun fourier(const CFun& phi, const AddChar& psi) {
  const Fq& fq = psi.fq();
  const unsigned q = fq.q();
  const std::size_t N = phi.v.size();
  CFun out{phi.m, std::vector<cplx>(N, 0.0)};
  const double scale = std::pow(static_cast<double>(q), -0.5 * phi.m);
  std::vector<std::vector<Fq::E>> vecs(N);
  for (std::size_t i = 0; i < N; ++i) vecs[i] = vec_from_index(q, phi.m, i);
  for (std::size_t y = 0; y < N; ++y) {
    cplx s = 0;
    for (std::size_t x = 0; x < N; ++x) {
      if (phi.v[x] == cplx(0.0)) continue;
      Fq::E dot = 0;
      for (unsigned i = 0; i < phi.m; ++i) dot = fq.add(dot, fq.mul(vecs[x][i], vecs[y][i]));
      s += phi.v[x] * psi(dot);
    }
    out.v[y] = scale * s;
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> square_sum_sides(const FieldCtx& F, const SquareSumJ& J) {
  const unsigned n = F.n();
  std::int64_t lhs = 0, rhs = 0;
  for (std::uint64_t j = 0; j < F.order(); ++j) {
    const FElem xi = F.exp(static_cast<std::int64_t>(j));
    const FElem N = F.norm(xi, n, 1);
    // lhs: every xi with N(xi) a square lambda^2 contributes once per root lambda.
    for (std::uint64_t t = 0; t < F.q() - 1; ++t) {
      const FElem lam = F.exp(static_cast<std::int64_t>(t * (F.order() / (F.q() - 1))));
      if (F.mul(lam, lam) == N) lhs += J(xi, lam);
    }
    const FElem xi2 = F.mul(xi, xi);
    if (n % 2 == 0)
      rhs += J(xi2, N) + J(xi2, F.neg(N));
    else
      rhs += J(xi2, N);
  }
  if (n % 2 == 0) lhs *= 2;
  return {lhs, rhs};
}

}  // namespace gammalab
