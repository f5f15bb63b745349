#include "gammalab/cuspchar.hpp"

#include "gammalab/error.hpp"

#include <cmath>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gammalab {

GroupCtx::GroupCtx(unsigned p, unsigned e, unsigned n) : n_(n) {
  if (n == 0 || n > kMaxN) throw Error(Errc::UnsupportedN, "n must be in 1..6");
  F_ = std::make_unique<FieldCtx>(p, e, n);
  fq_ = std::make_unique<Fq>(*F_);
  typer_ = std::make_unique<ClassTyper>(*F_, *fq_);
  psi_ = std::make_unique<AddChar>(*fq_, false);
  psi_inv_ = std::make_unique<AddChar>(*fq_, true);
}

CuspidalRep::CuspidalRep(const GroupCtx& G, std::int64_t k)
    : G_(&G), theta_(G.field(), G.n(), k), central_(theta_.restrict_to(1)) {
  if (!is_regular(theta_, G.n())) throw Error(Errc::NotRegular, "theta exponent " + std::to_string(k) + " is not regular");
}

cplx CuspidalRep::character(const ClassType& ct) const {
  if (!ct.primary) return 0.0;
  const FieldCtx& F = G_->field();
  const double q = static_cast<double>(F.q());
  double coef = (n() % 2 == 1) ? 1.0 : -1.0;
  for (unsigned i = 1; i < ct.k; ++i) coef *= 1.0 - std::pow(q, static_cast<double>(ct.d * i));
  cplx s = 0;
  for (unsigned i = 0; i < ct.d; ++i) s += theta_(F.frobenius(ct.alpha, i));
  return coef * s;
}

cplx CuspidalRep::character(const MatF& g) const { return character(G_->typer()(g)); }

double CuspidalRep::degree() const {
  double r = 1;
  const double q = static_cast<double>(G_->q());
  for (unsigned i = 1; i < n(); ++i) r *= std::pow(q, i) - 1.0;
  return r;
}

bool IrreducibilityReport::ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

namespace {

void add_to(ClassHistogram& h, const ClassType& ct) {
  if (ct.primary) ++h[ClassKey{ct.d, ct.k, ct.alpha}];
}

// Rows of GL_n enumerated with the first row fixed to index `first`.
void enumerate_with_first_row(const GroupCtx& G, std::size_t first, ClassHistogram& h) {
  const Fq& F = G.fq();
  const unsigned n = G.n(), q = F.q();
  std::size_t qn = 1;
  for (unsigned i = 0; i < n; ++i) qn *= q;
  auto vec = [&](std::size_t v, unsigned j) {
    for (unsigned i = 0; i < j; ++i) v /= q;
    return static_cast<Fq::E>(v % q);
  };
  auto combine = [&](std::size_t a, Fq::E c, std::size_t b) {
    std::size_t idx = 0, w = 1;
    for (unsigned j = 0; j < n; ++j) {
      idx += F.add(vec(a, j), F.mul(c, vec(b, j))) * w;
      w *= q;
    }
    return idx;
  };
  MatF cur = MatF::zero(n);
  std::function<void(unsigned, const std::vector<std::size_t>&)> rec =
      [&](unsigned row, const std::vector<std::size_t>& span) {
        if (row == n) {
          add_to(h, G.typer()(cur));
          return;
        }
        std::vector<char> in(qn, 0);
        for (std::size_t s : span) in[s] = 1;
        for (std::size_t v = 0; v < qn; ++v) {
          if (in[v]) continue;
          for (unsigned j = 0; j < n; ++j) cur(row, j) = vec(v, j);
          std::vector<std::size_t> next;
          next.reserve(span.size() * q);
          for (std::size_t s : span)
            for (unsigned c = 0; c < q; ++c) next.push_back(combine(s, static_cast<Fq::E>(c), v));
          rec(row + 1, next);
        }
      };
  for (unsigned j = 0; j < n; ++j) cur(0, j) = vec(first, j);
  std::vector<std::size_t> span;
  for (unsigned c = 0; c < q; ++c) span.push_back(combine(0, static_cast<Fq::E>(c), first));
  rec(1, span);
}

std::size_t row_count(const GroupCtx& G) {
  std::size_t qn = 1;
  for (unsigned i = 0; i < G.n(); ++i) qn *= G.q();
  return qn;
}

}  // namespace

ClassHistogram class_histogram_serial(const GroupCtx& G) {
  ClassHistogram h;
  for (const MatF& g : enumerate_gl(G.fq(), G.n())) add_to(h, G.typer()(g));
  return h;
}

ClassHistogram class_histogram_parallel(const GroupCtx& G) {
  const std::size_t rows = row_count(G);
  std::vector<ClassHistogram> parts(rows);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t first = 1; first < rows; ++first) enumerate_with_first_row(G, first, parts[first]);
  // Integer counts: merging in any order is exact.
  ClassHistogram h;
  for (const auto& part : parts)
    for (const auto& [key, cnt] : part) h[key] += cnt;
  return h;
}

namespace {

void partitions(unsigned c, unsigned max_part, std::vector<unsigned>& cur,
                std::vector<std::vector<unsigned>>& out) {
  if (c == 0) {
    out.push_back(cur);
    return;
  }
  for (unsigned p = std::min(c, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(c - p, p, cur, out);
    cur.pop_back();
  }
}

unsigned __int128 ipow128(std::uint64_t b, unsigned e) {
  unsigned __int128 r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

// Companion matrix of a monic polynomial, placed at offset `off` of g.
void place_companion(const Fq& F, MatF& g, unsigned off, const PolyF& f) {
  const unsigned d = static_cast<unsigned>(f.size() - 1);
  for (unsigned i = 1; i < d; ++i) g(off + i, off + i - 1) = 1;
  for (unsigned i = 0; i < d; ++i) g(off + i, off + d - 1) = F.neg(f[i]);
}

PolyF poly_pow(const Fq& F, const PolyF& f, unsigned e) {
  PolyF r{1};
  for (unsigned t = 0; t < e; ++t) {
    PolyF nx(r.size() + f.size() - 1, 0);
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) nx[i + j] = F.add(nx[i + j], F.mul(r[i], f[j]));
    r = nx;
  }
  return r;
}

}  // namespace

ClassHistogram class_histogram_weighted(const GroupCtx& G) {
  const Fq& F = G.fq();
  const unsigned n = G.n();
  const std::uint64_t order = gl_order(G.q(), n);
  ClassHistogram h;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const unsigned c = n / d;
    const std::uint64_t Q = G.field().q_pow(d);
    std::vector<std::vector<unsigned>> parts;
    std::vector<unsigned> cur;
    partitions(c, c, cur, parts);
    for (const auto& [f, alpha] : G.typer().irreducibles(d)) {
      for (const auto& lam : parts) {
        // |C| = Q^{sum lam'_i^2 - sum_i m_i(m_i+1)/2} prod_i prod_{j<=m_i} (Q^j - 1)
        std::vector<unsigned> mult(c + 1, 0);
        for (unsigned part : lam) ++mult[part];
        unsigned conj_sq = 0;
        for (unsigned i = 1; i <= c; ++i) {
          unsigned li = 0;
          for (unsigned part : lam) li += part >= i;
          conj_sq += li * li;
        }
        unsigned tri = 0;
        unsigned __int128 cent_rest = 1;
        for (unsigned i = 1; i <= c; ++i) {
          tri += mult[i] * (mult[i] + 1) / 2;
          for (unsigned j = 1; j <= mult[i]; ++j) cent_rest *= ipow128(Q, j) - 1;
        }
        const unsigned __int128 cent = ipow128(Q, conj_sq - tri) * cent_rest;
        if (order % cent != 0) throw Error(Errc::OracleFailed, "centralizer order does not divide |GL_n|");
        // Representative: companion blocks of f^{lambda_i}; typed to check (d, k, alpha).
        MatF g = MatF::zero(n);
        unsigned off = 0;
        for (unsigned part : lam) {
          place_companion(F, g, off, poly_pow(F, f, part));
          off += part * d;
        }
        const ClassType ct = G.typer()(g);
        if (!ct.primary || ct.d != d || ct.k != lam.size() || ct.alpha != alpha)
          throw Error(Errc::OracleFailed, "class representative typed inconsistently");
        h[ClassKey{d, static_cast<unsigned>(lam.size()), alpha}] +=
            static_cast<std::uint64_t>(order / cent);
      }
    }
  }
  return h;
}

IrreducibilityReport verify_irreducible(const CuspidalRep& rep, const ClassHistogram& hist,
                                        std::uint64_t seed, unsigned samples) {
  const GroupCtx& G = rep.group();
  const Fq& F = G.fq();
  IrreducibilityReport r;
  const double order = static_cast<double>(gl_order(G.q(), G.n()));
  double total = 0;
  for (const auto& [key, cnt] : hist) {
    ClassType ct;
    ct.primary = true;
    ct.d = key.d;
    ct.k = key.k;
    ct.c = G.n() / key.d;
    ct.alpha = key.alpha;
    total += static_cast<double>(cnt) * std::norm(rep.character(ct));
  }
  r.inner_product = total / order;
  r.checks.push_back({"inner_product", std::abs(r.inner_product - 1.0) < 1e-6, std::abs(r.inner_product - 1.0)});

  const cplx at_one = rep.character(MatF::identity(G.n()));
  r.degree = at_one.real();
  const double expect = rep.degree();
  const double deg_res = std::abs(at_one - cplx(expect));
  r.checks.push_back({"degree", deg_res < 1e-9 && expect > 0, deg_res});

  std::mt19937_64 rng(seed);
  double inv_res = 0, class_res = 0;
  for (unsigned s = 0; s < samples; ++s) {
    const MatF g = random_gl(F, G.n(), rng);
    const cplx v = rep.character(g);
    inv_res = std::max(inv_res, std::abs(rep.character(mat_inverse(F, g)) - std::conj(v)));
    const MatF h = random_gl(F, G.n(), rng);
    const MatF conj = mat_mul(F, mat_mul(F, h, g), mat_inverse(F, h));
    class_res = std::max(class_res, std::abs(rep.character(conj) - v));
  }
  r.checks.push_back({"inverse_conjugate", inv_res < kTol, inv_res});
  r.checks.push_back({"class_constant", class_res < kTol, class_res});
  return r;
}

}  // namespace gammalab
